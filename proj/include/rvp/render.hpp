#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rvp/raster.hpp"

namespace rvp {

enum class MarkerShape { Dot, Circle, Square, Cross };

struct PromptStyle {
    MarkerShape shape = MarkerShape::Dot;
    Rgb8 color = {255, 0, 0};
    int radius = 3;  // half-extent for Square/Cross
    int stroke = 1;  // ring/arm thickness
    bool operator==(const PromptStyle&) const = default;
};

std::string shape_name(MarkerShape s);
std::optional<MarkerShape> shape_from_name(const std::string& name);

// Fixed name <-> RGB table backing textual marker descriptors ("red dot").
std::optional<Rgb8> color_from_name(const std::string& name);
std::optional<std::string> color_name(Rgb8 rgb);

// Image-relative default radius so markers stay visible across resolutions.
int default_marker_radius(int width, int height);

// Paint one opaque, non-anti-aliased marker; all other pixels untouched.
Raster render_marker(const Raster& img, PixelPoint p, const PromptStyle& style);
// One rendered raster per point, order preserved.
std::vector<Raster> render_multi(const Raster& img, const std::vector<PixelPoint>& points,
                                 const PromptStyle& style);

// Ablation path: paint full region geometry instead of a point marker.
Raster render_mask_overlay(const Raster& img, const BinaryMask& mask, Rgb8 color);
Raster render_box_outline(const Raster& img, int x, int y, int w, int h, Rgb8 color, int stroke);

}  // namespace rvp
