#pragma once

#include <vector>

#include "speclocal/bbox.hpp"
#include "speclocal/image.hpp"

namespace speclocal {

/// Per-pixel saliency in [0,1], spatially aligned with its source image.
struct SaliencyMap {
    int width = 0;
    int height = 0;
    std::vector<float> values;
    /// Set when the source image was constant and the map is all-zero.
    bool uninformative = false;

    [[nodiscard]] float at(int x, int y) const {
        return values[static_cast<std::size_t>(y) * width + x];
    }
};

/// Spectral-residual saliency. The image is reduced to a 64-pixel max side,
/// the log-amplitude spectrum residual (against a 3x3 mean filter) is
/// inverted back to the spatial domain, squared, smoothed with a Gaussian
/// (sigma 2.5 px), upsampled to the source size and min-max normalized.
/// A constant image yields an all-zero map flagged `uninformative`.
SaliencyMap compute_saliency(const Image& img);

/// Mean saliency over the box clipped to the map bounds.
/// Throws std::invalid_argument when the box misses the map entirely.
double box_saliency(const SaliencyMap& map, const BBox& box);

} // namespace speclocal
