#include "speclocal/saliency.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace speclocal {

namespace {

using Complex = std::complex<double>;

// Direct DFT along one axis. Sizes here are at most 64, so the O(n^2)
// transform with a precomputed twiddle table is plenty.
void dft_1d(const Complex* in, Complex* out, int n, const std::vector<Complex>& twiddle,
            int stride) {
    for (int k = 0; k < n; ++k) {
        Complex acc(0.0, 0.0);
        for (int t = 0; t < n; ++t) acc += in[t * stride] * twiddle[(k * t) % n];
        out[k * stride] = acc;
    }
}

std::vector<Complex> make_twiddle(int n, bool inverse) {
    std::vector<Complex> tw(n);
    const double sign = inverse ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
        const double a = sign * 2.0 * std::numbers::pi * i / n;
        tw[i] = Complex(std::cos(a), std::sin(a));
    }
    return tw;
}

void dft_2d(std::vector<Complex>& field, int w, int h, bool inverse) {
    const auto tw_row = make_twiddle(w, inverse);
    const auto tw_col = make_twiddle(h, inverse);
    std::vector<Complex> tmp(std::max(w, h));
    for (int y = 0; y < h; ++y) {
        dft_1d(field.data() + std::size_t(y) * w, tmp.data(), w, tw_row, 1);
        std::copy(tmp.begin(), tmp.begin() + w, field.begin() + std::size_t(y) * w);
    }
    std::vector<Complex> col(h);
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col[y] = field[std::size_t(y) * w + x];
        dft_1d(col.data(), tmp.data(), h, tw_col, 1);
        for (int y = 0; y < h; ++y) field[std::size_t(y) * w + x] = tmp[y];
    }
    if (inverse) {
        const double scale = 1.0 / (double(w) * h);
        for (auto& v : field) v *= scale;
    }
}

std::vector<double> mean_filter_3x3(const std::vector<double>& in, int w, int h) {
    std::vector<double> out(in.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = std::clamp(y + dy, 0, h - 1);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = std::clamp(x + dx, 0, w - 1);
                    acc += in[std::size_t(yy) * w + xx];
                }
            }
            out[std::size_t(y) * w + x] = acc / 9.0;
        }
    }
    return out;
}

std::vector<double> gaussian_blur(const std::vector<double>& in, int w, int h, double sigma) {
    const int radius = int(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        sum += kernel[i + radius];
    }
    for (auto& k : kernel) k /= sum;

    std::vector<double> tmp(in.size()), out(in.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * in[std::size_t(y) * w + std::clamp(x + i, 0, w - 1)];
            tmp[std::size_t(y) * w + x] = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp[std::size_t(std::clamp(y + i, 0, h - 1)) * w + x];
            out[std::size_t(y) * w + x] = acc;
        }
    return out;
}

} // namespace

SaliencyMap compute_saliency(const Image& img) {
    if (img.width < 1 || img.height < 1)
        throw std::invalid_argument("compute_saliency: empty image");

    const Image gray = to_grayscale(img);

    SaliencyMap map;
    map.width = img.width;
    map.height = img.height;
    map.values.assign(gray.pixel_count(), 0.0f);

    const auto [mn, mx] = std::minmax_element(gray.data.begin(), gray.data.end());
    if (*mn == *mx) {
        map.uninformative = true;
        return map;
    }

    // Work at a 64-pixel max side, aspect preserved.
    const int longest = std::max(gray.width, gray.height);
    const double scale = 64.0 / longest;
    const int sw = std::max(1, int(std::lround(gray.width * scale)));
    const int sh = std::max(1, int(std::lround(gray.height * scale)));
    const Image small = resize_bilinear(gray, sw, sh);

    std::vector<Complex> field(small.pixel_count());
    for (std::size_t i = 0; i < field.size(); ++i) field[i] = Complex(small.data[i], 0.0);
    dft_2d(field, sw, sh, false);

    std::vector<double> log_amp(field.size());
    std::vector<double> phase(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) {
        log_amp[i] = std::log1p(std::abs(field[i]));
        phase[i] = std::arg(field[i]);
    }
    const std::vector<double> smoothed = mean_filter_3x3(log_amp, sw, sh);
    for (std::size_t i = 0; i < field.size(); ++i) {
        const double residual_mag = std::exp(log_amp[i] - smoothed[i]);
        field[i] = std::polar(residual_mag, phase[i]);
    }
    dft_2d(field, sw, sh, true);

    std::vector<double> energy(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) energy[i] = std::norm(field[i]);
    energy = gaussian_blur(energy, sw, sh, 2.5);

    Image sal_small(sw, sh, 1);
    for (std::size_t i = 0; i < energy.size(); ++i) sal_small.data[i] = float(energy[i]);
    const Image sal_full = resize_bilinear(sal_small, img.width, img.height);

    const auto [smn, smx] = std::minmax_element(sal_full.data.begin(), sal_full.data.end());
    const float lo = *smn, hi = *smx;
    if (hi <= lo) {
        map.uninformative = true;
        return map;
    }
    const float inv = 1.0f / (hi - lo);
    for (std::size_t i = 0; i < map.values.size(); ++i)
        map.values[i] = (sal_full.data[i] - lo) * inv;
    return map;
}

double box_saliency(const SaliencyMap& map, const BBox& box) {
    const auto clipped = clip_to_image(box, map.width, map.height);
    if (!clipped)
        throw std::invalid_argument("box_saliency: box does not intersect the map");
    double acc = 0.0;
    for (int y = clipped->y; y < clipped->y2(); ++y)
        for (int x = clipped->x; x < clipped->x2(); ++x) acc += map.at(x, y);
    return acc / double(clipped->area());
}

} // namespace speclocal
