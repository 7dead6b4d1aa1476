#include "rvp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rvp/error.hpp"

namespace rvp {

namespace {

void check_box(const BBox& b) {
    if (b.w < 1 || b.h < 1 || b.x < 0 || b.y < 0)
        throw InvalidBox("invalid box (" + std::to_string(b.x) + "," + std::to_string(b.y) + "," +
                         std::to_string(b.w) + "," + std::to_string(b.h) + ")");
}

}  // namespace

PixelPoint point_of_point(PixelPoint p, int image_width, int image_height) {
    if (p.x < 0 || p.y < 0 || p.x >= image_width || p.y >= image_height)
        throw OutOfBounds("point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                          ") outside " + std::to_string(image_width) + "x" +
                          std::to_string(image_height) + " image");
    return p;
}

PixelPoint box_centroid(const BBox& b) {
    check_box(b);
    return {b.x + b.w / 2, b.y + b.h / 2};
}

std::vector<PixelPoint> box_grid_points(const BBox& b, const GridSpec& grid) {
    check_box(b);
    const int dx = static_cast<int>(std::llround(grid.margin_fraction * b.w));
    const int dy = static_cast<int>(std::llround(grid.margin_fraction * b.h));
    if (b.w - 2 * dx < 1 || b.h - 2 * dy < 1)
        throw DegenerateGrid("margin inset collapses the box");

    if (grid.layout == GridLayout::FiveCorner) {
        const int left = b.x + dx;
        const int top = b.y + dy;
        const int right = std::min(b.x + b.w - dx, b.x + b.w - 1);
        const int bottom = std::min(b.y + b.h - dy, b.y + b.h - 1);
        const PixelPoint center = box_centroid(b);
        return {{left, top}, {right, top}, {left, bottom}, {right, bottom}, center};
    }

    if (grid.rows < 1 || grid.cols < 1) throw DegenerateGrid("grid rows/cols must be >= 1");
    const int x0 = b.x + dx;
    const int y0 = b.y + dy;
    const int iw = b.w - 2 * dx;
    const int ih = b.h - 2 * dy;
    std::vector<PixelPoint> points;
    points.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
    // Cell-center lattice over the inset box; stays strictly inside it.
    for (int r = 0; r < grid.rows; ++r) {
        const int py = y0 + static_cast<int>((2 * r + 1) * static_cast<long long>(ih) /
                                             (2 * grid.rows));
        for (int c = 0; c < grid.cols; ++c) {
            const int px = x0 + static_cast<int>((2 * c + 1) * static_cast<long long>(iw) /
                                                 (2 * grid.cols));
            points.push_back({px, py});
        }
    }
    return points;
}

PixelPoint mask_center(const BinaryMask& m) {
    const DistanceField field = distance_transform(m);
    try {
        return argmax_distance(field);
    } catch (const EmptyRegion&) {
        throw EmptyRegion("mask_center: mask has no foreground pixel");
    }
}

std::vector<PixelPoint> disentangle(const RegionAnnotation& r, int image_width, int image_height,
                                    const std::optional<GridSpec>& grid) {
    if (const auto* p = std::get_if<PixelPoint>(&r))
        return {point_of_point(*p, image_width, image_height)};
    if (const auto* b = std::get_if<BBox>(&r)) {
        if (b->x + b->w > image_width || b->y + b->h > image_height)
            throw InvalidBox("box exceeds image bounds");
        if (grid) return box_grid_points(*b, *grid);
        return {box_centroid(*b)};
    }
    return {mask_center(std::get<BinaryMask>(r))};
}

}  // namespace rvp
