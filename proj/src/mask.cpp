#include "scene3d/mask.hpp"

#include <cmath>
#include <stdexcept>

namespace scene3d {

std::int64_t mask_area(const BinaryMask& mask) {
    std::int64_t n = 0;
    for (std::uint8_t b : mask.bits) n += b != 0;
    return n;
}

BinaryMask dilate_mask(const BinaryMask& mask, int radius) {
    if (radius < 0) throw std::invalid_argument("dilation radius must be >= 0");
    if (radius == 0) return mask;

    // Disk offsets once, then stamp them over every foreground pixel.
    std::vector<Eigen::Vector2i> disk;
    for (int dy = -radius; dy <= radius; ++dy)
        for (int dx = -radius; dx <= radius; ++dx)
            if (dx * dx + dy * dy <= radius * radius) disk.emplace_back(dx, dy);

    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            for (const auto& d : disk) {
                const int nx = x + d.x(), ny = y + d.y();
                if (out.in_bounds(nx, ny)) out.set(nx, ny);
            }
        }
    }
    return out;
}

MaskStats mask_stats(const BinaryMask& mask) {
    MaskStats s;
    double sx = 0, sy = 0;
    PixelRect r{mask.width, mask.height, -1, -1};
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            ++s.area;
            sx += x;
            sy += y;
            r.x0 = std::min(r.x0, x);
            r.y0 = std::min(r.y0, y);
            r.x1 = std::max(r.x1, x);
            r.y1 = std::max(r.y1, y);
        }
    }
    if (s.area == 0) throw std::invalid_argument("mask is empty");
    s.centroid = Vec2(sx / s.area, sy / s.area);
    s.bounding_rect = r;
    return s;
}

namespace {

// Keep only the largest 8-connected component (ties: first in raster order).
BinaryMask largest_component(const BinaryMask& mask) {
    std::vector<int> label(mask.bits.size(), -1);
    int best_label = -1;
    std::int64_t best_size = 0;
    int next = 0;
    std::vector<int> stack;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const size_t idx = static_cast<size_t>(y) * mask.width + x;
            if (!mask.at(x, y) || label[idx] >= 0) continue;
            std::int64_t size = 0;
            stack.push_back(static_cast<int>(idx));
            label[idx] = next;
            while (!stack.empty()) {
                const int cur = stack.back();
                stack.pop_back();
                ++size;
                const int cy = cur / mask.width, cx = cur % mask.width;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) continue;
                        const size_t nidx = static_cast<size_t>(ny) * mask.width + nx;
                        if (label[nidx] >= 0) continue;
                        label[nidx] = next;
                        stack.push_back(static_cast<int>(nidx));
                    }
                }
            }
            if (size > best_size) {
                best_size = size;
                best_label = next;
            }
            ++next;
        }
    }
    if (best_label < 0) throw std::invalid_argument("mask is empty");
    BinaryMask out(mask.width, mask.height);
    for (size_t i = 0; i < label.size(); ++i) out.bits[i] = label[i] == best_label ? 1 : 0;
    return out;
}

}  // namespace

ContourResult trace_contour(const BinaryMask& mask) {
    const BinaryMask comp = largest_component(mask);  // throws if empty

    // Start pixel: first foreground pixel in raster order.
    int sx = -1, sy = -1;
    for (int y = 0; y < comp.height && sx < 0; ++y)
        for (int x = 0; x < comp.width; ++x)
            if (comp.at(x, y)) {
                sx = x;
                sy = y;
                break;
            }

    // Moore neighbourhood, clockwise in image coordinates (y down).
    static const int DX[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static const int DY[8] = {0, 1, 1, 1, 0, -1, -1, -1};

    auto fg = [&](int x, int y) { return comp.in_bounds(x, y) && comp.at(x, y); };

    ContourResult res;
    res.contour.points.emplace_back(sx, sy);

    // Entering from the west: raster order guarantees the west neighbour is
    // background. `back` always points from the current pixel to the last
    // background cell scanned, and the clockwise scan resumes just after it.
    int cx = sx, cy = sy;
    int back = 4;
    int first_move = -1;
    const std::int64_t limit = 4 * static_cast<std::int64_t>(mask.width) * mask.height + 8;
    for (std::int64_t guard = 0; guard < limit; ++guard) {
        int move = -1;
        for (int k = 1; k <= 8; ++k) {
            const int dir = (back + k) % 8;
            if (fg(cx + DX[dir], cy + DY[dir])) {
                move = dir;
                break;
            }
        }
        if (move < 0) break;  // isolated pixel
        if (first_move < 0) {
            first_move = move;
        } else if (cx == sx && cy == sy && move == first_move) {
            break;  // Jacob's criterion: re-entering the start the same way
        }
        cx += DX[move];
        cy += DY[move];
        res.contour.points.emplace_back(cx, cy);
        // The cell scanned just before the move, at direction (move-1) from the
        // old pixel, is background; relative to the new pixel it sits at:
        back = (2 * (move / 2) + 6) % 8;
    }

    // Drop the duplicated start pixel if the walk closed on it.
    auto& pts = res.contour.points;
    while (pts.size() > 1 && pts.back() == pts.front()) pts.pop_back();

    double len = 0.0;
    if (pts.size() > 1) {
        for (size_t i = 0; i + 1 < pts.size(); ++i)
            len += (pts[i + 1] - pts[i]).cast<double>().norm();
        len += (pts.front() - pts.back()).cast<double>().norm();
    }
    res.arc_length = len;
    return res;
}

HuVector hu_moments(const BinaryMask& mask) {
    double m00 = 0, m10 = 0, m01 = 0;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) {
                m00 += 1;
                m10 += x;
                m01 += y;
            }
    if (m00 == 0) throw std::invalid_argument("mask is empty");
    const double xb = m10 / m00, yb = m01 / m00;

    double mu20 = 0, mu02 = 0, mu11 = 0;
    double mu30 = 0, mu03 = 0, mu21 = 0, mu12 = 0;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            const double dx = x - xb, dy = y - yb;
            mu20 += dx * dx;
            mu02 += dy * dy;
            mu11 += dx * dy;
            mu30 += dx * dx * dx;
            mu03 += dy * dy * dy;
            mu21 += dx * dx * dy;
            mu12 += dx * dy * dy;
        }
    }

    const double n2 = m00 * m00;              // normalizer for p+q = 2
    const double n3 = std::pow(m00, 2.5);     // normalizer for p+q = 3
    const double e20 = mu20 / n2, e02 = mu02 / n2, e11 = mu11 / n2;
    const double e30 = mu30 / n3, e03 = mu03 / n3, e21 = mu21 / n3, e12 = mu12 / n3;

    HuVector h;
    h[0] = e20 + e02;
    h[1] = (e20 - e02) * (e20 - e02) + 4.0 * e11 * e11;
    h[2] = (e30 - 3 * e12) * (e30 - 3 * e12) + (3 * e21 - e03) * (3 * e21 - e03);
    h[3] = (e30 + e12) * (e30 + e12) + (e21 + e03) * (e21 + e03);
    h[4] = (e30 - 3 * e12) * (e30 + e12) *
               ((e30 + e12) * (e30 + e12) - 3 * (e21 + e03) * (e21 + e03)) +
           (3 * e21 - e03) * (e21 + e03) *
               (3 * (e30 + e12) * (e30 + e12) - (e21 + e03) * (e21 + e03));
    h[5] = (e20 - e02) * ((e30 + e12) * (e30 + e12) - (e21 + e03) * (e21 + e03)) +
           4.0 * e11 * (e30 + e12) * (e21 + e03);
    h[6] = (3 * e21 - e03) * (e30 + e12) *
               ((e30 + e12) * (e30 + e12) - 3 * (e21 + e03) * (e21 + e03)) -
           (e30 - 3 * e12) * (e21 + e03) *
               (3 * (e30 + e12) * (e30 + e12) - (e21 + e03) * (e21 + e03));
    return h;
}

BinaryMask build_inpainting_mask(const std::vector<BinaryMask>& all_masks, size_t keep_index,
                                 int dilation_radius) {
    if (keep_index >= all_masks.size())
        throw std::invalid_argument("keep_index out of range");
    const int w = all_masks[keep_index].width;
    const int h = all_masks[keep_index].height;
    BinaryMask merged(w, h);
    for (size_t i = 0; i < all_masks.size(); ++i) {
        if (i == keep_index) continue;
        const BinaryMask& m = all_masks[i];
        if (m.width != w || m.height != h)
            throw std::invalid_argument("mask dimensions disagree");
        for (size_t j = 0; j < merged.bits.size(); ++j) merged.bits[j] |= m.bits[j];
    }
    // Dilation distributes over union, so dilating the merged mask equals the
    // union of individually dilated masks.
    return dilate_mask(merged, dilation_radius);
}

BinaryMask crop_mask(const BinaryMask& mask, const PixelRect& rect) {
    BinaryMask out(rect.width(), rect.height());
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.set(x, y, mask.at(rect.x0 + x, rect.y0 + y));
    return out;
}

BinaryMask resize_mask(const BinaryMask& mask, int new_width, int new_height) {
    BinaryMask out(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        const int sy = std::min(mask.height - 1,
                                static_cast<int>((y + 0.5) * mask.height / new_height));
        for (int x = 0; x < new_width; ++x) {
            const int sx = std::min(mask.width - 1,
                                    static_cast<int>((x + 0.5) * mask.width / new_width));
            out.set(x, y, mask.at(sx, sy));
        }
    }
    return out;
}

}  // namespace scene3d
