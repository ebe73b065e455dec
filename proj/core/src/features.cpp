#include "speclocal/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "speclocal/rng.hpp"

namespace speclocal {

namespace {

constexpr double kBlockClip = 0.2;
constexpr double kDescriptorClip = 0.2;

void l2_normalize_clip_renormalize(double* v, int n, double clip) {
    double norm = 0.0;
    for (int i = 0; i < n; ++i) norm += v[i] * v[i];
    norm = std::sqrt(norm);
    if (norm <= 0.0) return;
    double renorm = 0.0;
    for (int i = 0; i < n; ++i) {
        v[i] = std::min(v[i] / norm, clip);
        renorm += v[i] * v[i];
    }
    renorm = std::sqrt(renorm);
    if (renorm <= 0.0) return;
    for (int i = 0; i < n; ++i) v[i] /= renorm;
}

} // namespace

FeatureVector hog_descriptor(const Image& gray, const BBox& box) {
    if (gray.channels != 1)
        throw std::invalid_argument("hog_descriptor: single-channel image required");
    if (!inside_image(box, gray.width, gray.height))
        throw std::invalid_argument("hog_descriptor: box outside image or degenerate");

    constexpr int kPatch = 64;
    constexpr int kCell = 8;
    constexpr int kCells = kPatch / kCell; // 8
    constexpr int kBins = 9;
    constexpr int kBlocks = kCells - 1; // 7 per axis, 2x2-cell blocks at stride 1

    const Image patch = resize_bilinear(crop(gray, box), kPatch, kPatch);
    const GradientField grad = gradients(patch);

    // Cell histograms with circular bilinear voting across orientation bins.
    double cells[kCells][kCells][kBins] = {};
    constexpr double kBinWidth = std::numbers::pi / kBins;
    for (int y = 0; y < kPatch; ++y) {
        for (int x = 0; x < kPatch; ++x) {
            const std::size_t i = grad.index(x, y);
            const double m = grad.magnitude[i];
            if (m == 0.0) continue;
            const double b = grad.orientation[i] / kBinWidth; // [0, 9)
            int b0 = int(b);
            if (b0 >= kBins) b0 = kBins - 1;
            const double f = b - b0;
            const int b1 = (b0 + 1) % kBins;
            double* hist = cells[y / kCell][x / kCell];
            hist[b0] += (1.0 - f) * m;
            hist[b1] += f * m;
        }
    }

    FeatureVector out;
    out.kind = FeatureKind::hog;
    out.values.resize(kHogLength);
    double* dst = out.values.data();
    for (int by = 0; by < kBlocks; ++by) {
        for (int bx = 0; bx < kBlocks; ++bx) {
            double block[4 * kBins];
            double* b = block;
            for (int cy = 0; cy < 2; ++cy)
                for (int cx = 0; cx < 2; ++cx) {
                    const double* hist = cells[by + cy][bx + cx];
                    b = std::copy(hist, hist + kBins, b);
                }
            l2_normalize_clip_renormalize(block, 4 * kBins, kBlockClip);
            dst = std::copy(block, block + 4 * kBins, dst);
        }
    }
    return out;
}

DescriptorField extract_dense_descriptors(const Image& gray, int stride) {
    if (gray.channels != 1)
        throw std::invalid_argument("extract_dense_descriptors: single-channel image required");
    if (stride < 1) throw std::invalid_argument("extract_dense_descriptors: stride must be >= 1");
    constexpr int kSupport = 16;
    constexpr int kSpatial = 4; // 4x4 cells of 4x4 pixels
    constexpr int kBins = 8;    // signed orientation over [0, 2pi)
    constexpr int kDim = kSpatial * kSpatial * kBins;
    if (gray.width < kSupport || gray.height < kSupport)
        throw std::invalid_argument("extract_dense_descriptors: image must be at least 16x16");

    const GradientField grad = gradients(gray);

    DescriptorField field;
    field.image_width = gray.width;
    field.image_height = gray.height;
    field.stride = stride;
    field.support = kSupport;
    const int nx = (gray.width - kSupport) / stride + 1;
    const int ny = (gray.height - kSupport) / stride + 1;
    field.site_x.reserve(std::size_t(nx) * ny);
    field.site_y.reserve(std::size_t(nx) * ny);
    field.descriptors.resize(std::size_t(nx) * ny, kDim);

    constexpr double kTwoPi = 2.0 * std::numbers::pi;
    constexpr double kBinWidth = kTwoPi / kBins;
    std::vector<double> desc(kDim);
    int row = 0;
    for (int sy = 0; sy + kSupport <= gray.height; sy += stride) {
        for (int sx = 0; sx + kSupport <= gray.width; sx += stride) {
            std::fill(desc.begin(), desc.end(), 0.0);
            for (int dy = 0; dy < kSupport; ++dy) {
                for (int dx = 0; dx < kSupport; ++dx) {
                    const std::size_t i = grad.index(sx + dx, sy + dy);
                    const double m = grad.magnitude[i];
                    if (m == 0.0) continue;
                    double th = std::atan2(grad.gy[i], grad.gx[i]);
                    if (th < 0.0) th += kTwoPi;
                    double b = th / kBinWidth;
                    if (b >= kBins) b -= kBins;
                    int b0 = int(b);
                    if (b0 >= kBins) b0 = kBins - 1;
                    const double f = b - b0;
                    const int b1 = (b0 + 1) % kBins;
                    const int cell = (dy / 4) * kSpatial + (dx / 4);
                    desc[cell * kBins + b0] += (1.0 - f) * m;
                    desc[cell * kBins + b1] += f * m;
                }
            }
            l2_normalize_clip_renormalize(desc.data(), kDim, kDescriptorClip);
            for (int d = 0; d < kDim; ++d) field.descriptors(row, d) = desc[d];
            field.site_x.push_back(sx);
            field.site_y.push_back(sy);
            ++row;
        }
    }
    return field;
}

namespace {

// Squared Euclidean distances between every row of a and every row of b.
Eigen::MatrixXd pairwise_sq_dist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    const Eigen::VectorXd a2 = a.rowwise().squaredNorm();
    const Eigen::VectorXd b2 = b.rowwise().squaredNorm();
    Eigen::MatrixXd d = -2.0 * (a * b.transpose());
    d.colwise() += a2;
    d.rowwise() += b2.transpose();
    return d.cwiseMax(0.0);
}

std::vector<int> distinct_row_indices(const Eigen::MatrixXd& m) {
    std::vector<int> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    const auto row_less = [&m](int a, int b) {
        for (int c = 0; c < m.cols(); ++c) {
            if (m(a, c) != m(b, c)) return m(a, c) < m(b, c);
        }
        return false;
    };
    std::sort(order.begin(), order.end(), row_less);
    std::vector<int> distinct;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || row_less(order[i - 1], order[i])) distinct.push_back(order[i]);
    }
    std::sort(distinct.begin(), distinct.end());
    return distinct;
}

} // namespace

Codebook build_codebook(const DescriptorField& field, int words, std::uint64_t seed) {
    if (field.size() == 0) throw std::invalid_argument("build_codebook: empty descriptor field");
    if (words < 1) throw std::invalid_argument("build_codebook: words must be >= 1");

    const Eigen::MatrixXd& data = field.descriptors;
    const int n = int(data.rows());
    const int dim = int(data.cols());

    const std::vector<int> distinct = distinct_row_indices(data);
    const int k = std::min<int>(words, int(distinct.size()));

    std::mt19937_64 rng(seed);
    Eigen::MatrixXd centers(k, dim);

    // k-means++ seeding over the distinct descriptors.
    {
        const int first = distinct[uniform_int(rng, 0, int(distinct.size()) - 1)];
        centers.row(0) = data.row(first);
        Eigen::VectorXd best_d2 =
            (data.rowwise() - centers.row(0)).rowwise().squaredNorm();
        for (int c = 1; c < k; ++c) {
            const double total = best_d2.sum();
            int chosen = -1;
            if (total > 0.0) {
                const double target = uniform_unit(rng) * total;
                double acc = 0.0;
                for (int i = 0; i < n; ++i) {
                    acc += best_d2[i];
                    if (acc >= target) {
                        chosen = i;
                        break;
                    }
                }
                if (chosen < 0) chosen = n - 1;
            } else {
                chosen = distinct[c]; // all mass at existing centers; walk the distinct list
            }
            centers.row(c) = data.row(chosen);
            best_d2 = best_d2.cwiseMin(
                (data.rowwise() - centers.row(c)).rowwise().squaredNorm());
        }
    }

    // Lloyd iterations, at most 50, until centers move less than 1e-4.
    std::vector<int> assign(n, 0);
    for (int iter = 0; iter < 50; ++iter) {
        const Eigen::MatrixXd d2 = pairwise_sq_dist(data, centers);
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double bd = d2(i, 0);
            for (int c = 1; c < k; ++c) {
                if (d2(i, c) < bd) {
                    bd = d2(i, c);
                    best = c;
                }
            }
            assign[i] = best;
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, dim);
        std::vector<int> counts(k, 0);
        for (int i = 0; i < n; ++i) {
            sums.row(assign[i]) += data.row(i);
            counts[assign[i]] += 1;
        }
        double max_move = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) continue; // empty cluster keeps its centroid
            const Eigen::RowVectorXd updated = sums.row(c) / double(counts[c]);
            max_move = std::max(max_move, (updated - centers.row(c)).norm());
            centers.row(c) = updated;
        }
        if (max_move < 1e-4) break;
    }

    // Exact-duplicate centroids collapse to the first occurrence.
    std::vector<int> keep;
    for (int c = 0; c < k; ++c) {
        bool dup = false;
        for (const int p : keep) {
            if (centers.row(c) == centers.row(p)) {
                dup = true;
                break;
            }
        }
        if (!dup) keep.push_back(c);
    }

    Codebook book;
    book.seed = seed;
    book.words.resize(int(keep.size()), dim);
    for (std::size_t i = 0; i < keep.size(); ++i) book.words.row(int(i)) = centers.row(keep[i]);
    return book;
}

WordField quantize(const DescriptorField& field, const Codebook& codebook) {
    if (codebook.size() < 1) throw std::invalid_argument("quantize: empty codebook");
    if (field.descriptors.cols() != codebook.words.cols())
        throw std::invalid_argument("quantize: descriptor dimensions do not match codebook");

    WordField wf;
    wf.image_width = field.image_width;
    wf.image_height = field.image_height;
    wf.stride = field.stride;
    wf.support = field.support;
    wf.site_x = field.site_x;
    wf.site_y = field.site_y;
    wf.codebook_size = codebook.size();
    wf.word.resize(field.size());

    const Eigen::MatrixXd d2 = pairwise_sq_dist(field.descriptors, codebook.words);
    for (int i = 0; i < field.size(); ++i) {
        int best = 0;
        double bd = d2(i, 0);
        for (int c = 1; c < codebook.size(); ++c) {
            if (d2(i, c) < bd) { // strict: ties keep the lowest index
                bd = d2(i, c);
                best = c;
            }
        }
        wf.word[i] = best;
    }
    return wf;
}

FeatureVector spm_pool(const WordField& field, const BBox& box, int codebook_size) {
    if (!inside_image(box, field.image_width, field.image_height))
        throw std::invalid_argument("spm_pool: box outside image or degenerate");
    if (codebook_size < 1) throw std::invalid_argument("spm_pool: codebook_size must be >= 1");

    FeatureVector out;
    out.kind = FeatureKind::spm;
    out.values.assign(std::size_t(10) * codebook_size, 0.0);

    const int half = field.support / 2;
    bool any = false;
    for (std::size_t i = 0; i < field.word.size(); ++i) {
        const int cx = field.site_x[i] + half;
        const int cy = field.site_y[i] + half;
        if (cx < box.x || cx >= box.x2() || cy < box.y || cy >= box.y2()) continue;
        any = true;
        const int w = field.word[i];
        out.values[w] += 1.0; // global 1x1 region

        // 3x3 grid cell; exact internal boundaries resolve to the lower cell.
        auto grid_index = [](int offset, int extent) {
            const long long num = 3LL * offset;
            int g = int(num / extent);
            if (g > 0 && num % extent == 0) --g;
            return std::min(g, 2);
        };
        const int gx = grid_index(cx - box.x, box.w);
        const int gy = grid_index(cy - box.y, box.h);
        out.values[std::size_t(1 + gy * 3 + gx) * codebook_size + w] += 1.0;
    }

    if (!any) {
        out.empty_region = true;
        return out;
    }
    double norm = 0.0;
    for (const double v : out.values) norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : out.values) v /= norm;
    return out;
}

} // namespace speclocal
