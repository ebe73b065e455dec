#include "speclocal/image.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace speclocal {

Image to_grayscale(const Image& img) {
    if (img.width < 1 || img.height < 1)
        throw std::invalid_argument("to_grayscale: empty image");
    if (img.channels == 1) return img;
    if (img.channels != 3)
        throw std::invalid_argument("to_grayscale: expected 1 or 3 channels");

    Image out(img.width, img.height, 1);
    const std::size_t n = img.pixel_count();
    for (std::size_t i = 0; i < n; ++i) {
        const float r = img.data[i * 3 + 0];
        const float g = img.data[i * 3 + 1];
        const float b = img.data[i * 3 + 2];
        out.data[i] = 0.299f * r + 0.587f * g + 0.114f * b;
    }
    return out;
}

GradientField gradients(const Image& gray) {
    if (gray.channels != 1)
        throw std::invalid_argument("gradients: single-channel image required");
    if (gray.width < 3 || gray.height < 3)
        throw std::invalid_argument("gradients: image must be at least 3x3");

    const int w = gray.width, h = gray.height;
    GradientField f;
    f.width = w;
    f.height = h;
    f.gx.resize(gray.pixel_count());
    f.gy.resize(gray.pixel_count());
    f.magnitude.resize(gray.pixel_count());
    f.orientation.resize(gray.pixel_count());

    constexpr float kPi = std::numbers::pi_v<float>;
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, w - 1);
            const float gx = 0.5f * (gray.at(xp, y) - gray.at(xm, y));
            const float gy = 0.5f * (gray.at(x, yp) - gray.at(x, ym));
            const std::size_t i = f.index(x, y);
            f.gx[i] = gx;
            f.gy[i] = gy;
            f.magnitude[i] = std::sqrt(gx * gx + gy * gy);
            if (gx == 0.0f && gy == 0.0f) {
                f.orientation[i] = 0.0f;
            } else {
                float th = std::atan2(gy, gx); // (-pi, pi]
                if (th < 0.0f) th += kPi;
                if (th >= kPi) th -= kPi;
                if (th < 0.0f) th = 0.0f;
                f.orientation[i] = th;
            }
        }
    }
    return f;
}

Image crop(const Image& gray, const BBox& box) {
    if (gray.channels != 1)
        throw std::invalid_argument("crop: single-channel image required");
    if (!inside_image(box, gray.width, gray.height))
        throw std::invalid_argument("crop: box outside image bounds");
    Image out(box.w, box.h, 1);
    for (int y = 0; y < box.h; ++y)
        for (int x = 0; x < box.w; ++x)
            out.at(x, y) = gray.at(box.x + x, box.y + y);
    return out;
}

Image resize_bilinear(const Image& gray, int out_width, int out_height) {
    if (gray.channels != 1)
        throw std::invalid_argument("resize_bilinear: single-channel image required");
    if (out_width < 1 || out_height < 1)
        throw std::invalid_argument("resize_bilinear: output dimensions must be positive");
    if (out_width == gray.width && out_height == gray.height) return gray;

    Image out(out_width, out_height, 1);
    const double sx = double(gray.width) / out_width;
    const double sy = double(gray.height) / out_height;
    for (int y = 0; y < out_height; ++y) {
        double fy = (y + 0.5) * sy - 0.5;
        fy = std::clamp(fy, 0.0, double(gray.height - 1));
        const int y0 = int(fy);
        const int y1 = std::min(y0 + 1, gray.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < out_width; ++x) {
            double fx = (x + 0.5) * sx - 0.5;
            fx = std::clamp(fx, 0.0, double(gray.width - 1));
            const int x0 = int(fx);
            const int x1 = std::min(x0 + 1, gray.width - 1);
            const double wx = fx - x0;
            const double top = (1.0 - wx) * gray.at(x0, y0) + wx * gray.at(x1, y0);
            const double bot = (1.0 - wx) * gray.at(x0, y1) + wx * gray.at(x1, y1);
            out.at(x, y) = float((1.0 - wy) * top + wy * bot);
        }
    }
    return out;
}

} // namespace speclocal
