#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "scene3d/geometry.hpp"

namespace scene3d {

/// Binary raster. Foreground pixels are nonzero.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;  // row-major, width * height

    BinaryMask() = default;
    BinaryMask(int w, int h) : width(w), height(h), bits(static_cast<size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool on = true) {
        bits[static_cast<size_t>(y) * width + x] = on ? 1 : 0;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool operator==(const BinaryMask& other) const = default;
};

struct PixelRect {
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive bounds
    int width() const { return x1 - x0 + 1; }
    int height() const { return y1 - y0 + 1; }
};

struct MaskStats {
    Vec2 centroid;
    PixelRect bounding_rect;
    std::int64_t area = 0;
};

/// Closed polyline of boundary pixel coordinates.
struct Contour {
    std::vector<Eigen::Vector2i> points;
};

/// The seven Hu invariant moments.
using HuVector = std::array<double, 7>;

/// Morphological dilation with a disk structuring element (dx^2 + dy^2 <= r^2).
BinaryMask dilate_mask(const BinaryMask& mask, int radius);

/// Centroid (mean of foreground pixel coordinates), tight bounding rectangle
/// and foreground pixel count. Throws on an empty mask.
MaskStats mask_stats(const BinaryMask& mask);

/// Outer boundary of the largest 8-connected component (Moore border
/// following) and its perimeter: the Euclidean length of the closed polyline.
struct ContourResult {
    Contour contour;
    double arc_length = 0.0;
};
ContourResult trace_contour(const BinaryMask& mask);

/// Hu invariants of the filled foreground region. Throws on an empty mask.
HuVector hu_moments(const BinaryMask& mask);

/// Union of all masks except keep_index, dilated: the region an inpainter
/// would have to fill to erase every other object.
BinaryMask build_inpainting_mask(const std::vector<BinaryMask>& all_masks, size_t keep_index,
                                 int dilation_radius);

/// Sub-image covering the rectangle (inclusive bounds).
BinaryMask crop_mask(const BinaryMask& mask, const PixelRect& rect);

/// Nearest-neighbour resample to new_width x new_height (aspect ignored).
BinaryMask resize_mask(const BinaryMask& mask, int new_width, int new_height);

std::int64_t mask_area(const BinaryMask& mask);

}  // namespace scene3d
