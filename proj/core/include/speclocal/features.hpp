#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "speclocal/bbox.hpp"
#include "speclocal/image.hpp"

namespace speclocal {

enum class FeatureKind { hog, spm };

struct FeatureVector {
    FeatureKind kind = FeatureKind::hog;
    std::vector<double> values;
    /// For spm vectors: set when the box contained no descriptor sites and
    /// the vector is all-zero.
    bool empty_region = false;
};

/// Dense descriptor lattice over an image: one 128-dim gradient descriptor
/// per site, sites spaced `stride` pixels apart wherever the square support
/// fits fully inside the image. Row i of `descriptors` belongs to site i.
struct DescriptorField {
    int image_width = 0;
    int image_height = 0;
    int stride = 4;
    int support = 16;
    std::vector<int> site_x; // top-left corner of each site's support
    std::vector<int> site_y;
    Eigen::MatrixXd descriptors; // sites x 128

    [[nodiscard]] int size() const { return int(descriptors.rows()); }
};

/// Visual word dictionary: k centroids in descriptor space.
struct Codebook {
    Eigen::MatrixXd words; // k x 128
    std::uint64_t seed = 0;

    [[nodiscard]] int size() const { return int(words.rows()); }
};

/// Descriptor lattice with each site reduced to its nearest codeword.
struct WordField {
    int image_width = 0;
    int image_height = 0;
    int stride = 4;
    int support = 16;
    std::vector<int> site_x;
    std::vector<int> site_y;
    std::vector<int> word;
    int codebook_size = 0;
};

inline constexpr int kHogLength = 1764; // 7x7 blocks x 4 cells x 9 bins

/// HOG over the box: crop resized to 64x64, 8x8-pixel cells, 9 unsigned
/// orientation bins with bilinear voting, 2x2-cell blocks at stride 1 with
/// clipped (0.2) L2 block normalization.
FeatureVector hog_descriptor(const Image& gray, const BBox& box);

/// Dense 4x4x8 gradient descriptors (signed orientation, 16x16 support)
/// every `stride` pixels; each L2-normalized, clipped at 0.2, renormalized.
DescriptorField extract_dense_descriptors(const Image& gray, int stride = 4);

/// k-means codebook (k-means++ init) from the field's descriptors.
/// k shrinks to the number of distinct descriptors when they run short.
/// Deterministic for fixed (field, seed).
Codebook build_codebook(const DescriptorField& field, int words, std::uint64_t seed);

/// Nearest-centroid assignment (Euclidean); ties go to the lowest index.
WordField quantize(const DescriptorField& field, const Codebook& codebook);

/// Word histograms over the box pooled on a 1x1 plus 3x3 spatial pyramid
/// (sites assigned by their center; internal grid boundaries resolve to the
/// lower-index cell), concatenated to 10 x codebook_size and L2-normalized.
FeatureVector spm_pool(const WordField& field, const BBox& box, int codebook_size);

} // namespace speclocal
