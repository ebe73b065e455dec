#pragma once

#include <cassert>
#include <vector>

#include "speclocal/bbox.hpp"

namespace speclocal {

/// Row-major raster with interleaved channels; intensities scaled to [0,1].
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1; // 1 or 3
    std::vector<float> data;

    Image() = default;
    Image(int w, int h, int c, float fill = 0.0f)
        : width(w), height(h), channels(c),
          data(static_cast<std::size_t>(w) * h * c, fill) {}

    [[nodiscard]] float at(int x, int y, int c = 0) const {
        assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < channels);
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float& at(int x, int y, int c = 0) {
        assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < channels);
        return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    [[nodiscard]] std::size_t pixel_count() const {
        return static_cast<std::size_t>(width) * height;
    }
};

/// Per-pixel gradient magnitude and unsigned orientation in [0, pi).
struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<float> gx;
    std::vector<float> gy;
    std::vector<float> magnitude;
    std::vector<float> orientation;

    [[nodiscard]] std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * width + x;
    }
};

/// ITU-R 601 luma conversion; identity on single-channel input.
Image to_grayscale(const Image& img);

/// Central differences in the interior, replicate border at the edges.
/// Requires a single-channel image of at least 3x3 pixels.
GradientField gradients(const Image& gray);

/// Crop the box region out of a single-channel image. The box must lie inside.
Image crop(const Image& gray, const BBox& box);

/// Bilinear resize (align-centers sampling). Single-channel only.
Image resize_bilinear(const Image& gray, int out_width, int out_height);

} // namespace speclocal
