#pragma once

#include <cstdint>
#include <optional>

namespace speclocal {

/// Axis-aligned pixel rectangle. (x, y) is the top-left corner, 0-based;
/// the box spans [x, x+w) x [y, y+h) in continuous coordinates.
struct BBox {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;

    [[nodiscard]] std::int64_t area() const { return std::int64_t(w) * h; }
    [[nodiscard]] int x2() const { return x + w; }
    [[nodiscard]] int y2() const { return y + h; }

    bool operator==(const BBox&) const = default;
};

[[nodiscard]] inline bool valid_box(const BBox& b) { return b.w >= 1 && b.h >= 1; }

/// True when the box lies fully inside a width x height image.
[[nodiscard]] inline bool inside_image(const BBox& b, int width, int height) {
    return valid_box(b) && b.x >= 0 && b.y >= 0 && b.x2() <= width && b.y2() <= height;
}

/// Intersects the box with the image rectangle. Empty when nothing remains.
[[nodiscard]] inline std::optional<BBox> clip_to_image(const BBox& b, int width, int height) {
    const int x1 = b.x < 0 ? 0 : b.x;
    const int y1 = b.y < 0 ? 0 : b.y;
    const int x2 = b.x2() > width ? width : b.x2();
    const int y2 = b.y2() > height ? height : b.y2();
    if (x2 - x1 < 1 || y2 - y1 < 1) return std::nullopt;
    return BBox{x1, y1, x2 - x1, y2 - y1};
}

} // namespace speclocal
