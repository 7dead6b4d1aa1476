#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "rvp/raster.hpp"

namespace rvp {

struct BBox {
    int x = 0;
    int y = 0;
    int w = 1;
    int h = 1;
    auto operator<=>(const BBox&) const = default;

    long long area() const { return static_cast<long long>(w) * h; }
    bool contains_box(const BBox& inner) const {
        return inner.x >= x && inner.y >= y && inner.x + inner.w <= x + w &&
               inner.y + inner.h <= y + h;
    }
};

// A referring visual prompt: exactly one of point, box, or mask.
using RegionAnnotation = std::variant<PixelPoint, BBox, BinaryMask>;

enum class GridLayout { FiveCorner, UniformGrid };

struct GridSpec {
    GridLayout layout = GridLayout::FiveCorner;
    int rows = 1;
    int cols = 1;
    double margin_fraction = 0.1;  // in [0, 0.5)
};

// Geometry disentanglement: reduce any annotation to representative point(s).
PixelPoint point_of_point(PixelPoint p, int image_width, int image_height);
PixelPoint box_centroid(const BBox& b);
std::vector<PixelPoint> box_grid_points(const BBox& b, const GridSpec& grid);
PixelPoint mask_center(const BinaryMask& m);
std::vector<PixelPoint> disentangle(const RegionAnnotation& r, int image_width, int image_height,
                                    const std::optional<GridSpec>& grid = std::nullopt);

}  // namespace rvp
