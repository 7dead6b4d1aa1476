#include "rvp/render.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "rvp/error.hpp"

namespace rvp {

namespace {

struct NamedColor {
    const char* name;
    Rgb8 rgb;
};

constexpr std::array<NamedColor, 7> kColorTable{{
    {"red", {255, 0, 0}},
    {"green", {0, 255, 0}},
    {"blue", {0, 0, 255}},
    {"purple", {128, 0, 128}},
    {"yellow", {255, 255, 0}},
    {"cyan", {0, 255, 255}},
    {"white", {255, 255, 255}},
}};

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void check_style(const PromptStyle& style) {
    if (style.radius < 1 || style.stroke < 1)
        throw Error("marker radius and stroke must be >= 1");
    if (style.shape == MarkerShape::Circle && style.radius < style.stroke)
        throw Error("circle radius must be >= stroke");
}

bool in_footprint(MarkerShape shape, int radius, int stroke, int dx, int dy) {
    const long long d2 = static_cast<long long>(dx) * dx + static_cast<long long>(dy) * dy;
    switch (shape) {
        case MarkerShape::Dot:
            return d2 <= static_cast<long long>(radius) * radius;
        case MarkerShape::Circle: {
            const long long inner = radius - stroke;
            return d2 > inner * inner && d2 <= static_cast<long long>(radius) * radius;
        }
        case MarkerShape::Square:
            return std::abs(dx) <= radius && std::abs(dy) <= radius;
        case MarkerShape::Cross: {
            const int half = stroke / 2;
            return (std::abs(dx) <= radius && std::abs(dy) <= half) ||
                   (std::abs(dy) <= radius && std::abs(dx) <= half);
        }
    }
    return false;
}

}  // namespace

std::string shape_name(MarkerShape s) {
    switch (s) {
        case MarkerShape::Dot: return "dot";
        case MarkerShape::Circle: return "circle";
        case MarkerShape::Square: return "square";
        case MarkerShape::Cross: return "cross";
    }
    return "dot";
}

std::optional<MarkerShape> shape_from_name(const std::string& name) {
    const std::string n = lowercase(name);
    if (n == "dot") return MarkerShape::Dot;
    if (n == "circle") return MarkerShape::Circle;
    if (n == "square") return MarkerShape::Square;
    if (n == "cross") return MarkerShape::Cross;
    return std::nullopt;
}

std::optional<Rgb8> color_from_name(const std::string& name) {
    const std::string n = lowercase(name);
    for (const auto& c : kColorTable)
        if (n == c.name) return c.rgb;
    return std::nullopt;
}

std::optional<std::string> color_name(Rgb8 rgb) {
    for (const auto& c : kColorTable)
        if (rgb == c.rgb) return std::string(c.name);
    return std::nullopt;
}

int default_marker_radius(int width, int height) {
    const int rel = static_cast<int>(std::ceil(0.01 * std::min(width, height)));
    return std::max(3, rel);
}

Raster render_marker(const Raster& img, PixelPoint p, const PromptStyle& style) {
    if (!img.contains(p))
        throw OutOfBounds("marker position (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                          ") outside image");
    check_style(style);

    Raster out = img;
    const int r = style.radius;
    for (int dy = -r; dy <= r; ++dy) {
        const int y = p.y + dy;
        if (y < 0 || y >= img.height()) continue;
        for (int dx = -r; dx <= r; ++dx) {
            const int x = p.x + dx;
            if (x < 0 || x >= img.width()) continue;
            if (in_footprint(style.shape, style.radius, style.stroke, dx, dy))
                out.set(x, y, style.color);
        }
    }
    return out;
}

std::vector<Raster> render_multi(const Raster& img, const std::vector<PixelPoint>& points,
                                 const PromptStyle& style) {
    std::vector<Raster> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(render_marker(img, p, style));
    return out;
}

Raster render_mask_overlay(const Raster& img, const BinaryMask& mask, Rgb8 color) {
    if (mask.width() != img.width() || mask.height() != img.height())
        throw Error("mask overlay: mask dimensions do not match image");
    Raster out = img;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (mask.at(x, y)) out.set(x, y, color);
    return out;
}

Raster render_box_outline(const Raster& img, int x, int y, int w, int h, Rgb8 color, int stroke) {
    if (w < 1 || h < 1) throw InvalidBox("box outline: empty box");
    Raster out = img;
    for (int yy = y; yy < y + h; ++yy) {
        if (yy < 0 || yy >= img.height()) continue;
        for (int xx = x; xx < x + w; ++xx) {
            if (xx < 0 || xx >= img.width()) continue;
            const bool edge = xx < x + stroke || xx >= x + w - stroke || yy < y + stroke ||
                              yy >= y + h - stroke;
            if (edge) out.set(xx, yy, color);
        }
    }
    return out;
}

}  // namespace rvp
