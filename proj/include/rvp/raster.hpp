#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

namespace rvp {

struct PixelPoint {
    int x = 0;
    int y = 0;
    auto operator<=>(const PixelPoint&) const = default;
};

struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;
    auto operator<=>(const Rgb8&) const = default;
};

// 8-bit RGB image, row-major, origin top-left.
class Raster {
public:
    Raster() = default;
    Raster(int width, int height, Rgb8 fill = {});

    int width() const { return w_; }
    int height() const { return h_; }
    bool empty() const { return px_.empty(); }
    bool contains(PixelPoint p) const { return p.x >= 0 && p.x < w_ && p.y >= 0 && p.y < h_; }

    Rgb8 at(int x, int y) const { return px_[static_cast<std::size_t>(y) * w_ + x]; }
    void set(int x, int y, Rgb8 c) { px_[static_cast<std::size_t>(y) * w_ + x] = c; }

    const std::vector<Rgb8>& pixels() const { return px_; }
    std::vector<Rgb8>& pixels() { return px_; }

    bool operator==(const Raster&) const = default;

private:
    int w_ = 0;
    int h_ = 0;
    std::vector<Rgb8> px_;
};

// Per-pixel boolean raster; foreground = true.
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, bool fill = false);

    int width() const { return w_; }
    int height() const { return h_; }
    bool empty() const { return bits_.empty(); }
    bool contains(PixelPoint p) const { return p.x >= 0 && p.x < w_ && p.y >= 0 && p.y < h_; }

    bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y) * w_ + x] != 0; }
    void set(int x, int y, bool v) {
        bits_[static_cast<std::size_t>(y) * w_ + x] = v ? 1 : 0;
    }

    std::size_t count() const;
    bool subset_of(const BinaryMask& other) const;

    bool operator==(const BinaryMask&) const = default;

private:
    int w_ = 0;
    int h_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Squared Euclidean distances to the nearest background pixel (image exterior
// counts as background).
struct DistanceField {
    int width = 0;
    int height = 0;
    std::vector<std::int64_t> sqdist;

    std::int64_t at(int x, int y) const { return sqdist[static_cast<std::size_t>(y) * width + x]; }
};

// Directional dilation kernel: the anchor plus a ray of steps along one of
// the eight compass directions (0 = east, counterclockwise, y-down).
struct StructuringElement {
    int size = 1;
    int direction = 0;
    std::vector<std::pair<int, int>> offsets;  // (dx, dy), always contains (0,0)
};

DistanceField distance_transform(const BinaryMask& mask);
PixelPoint argmax_distance(const DistanceField& field);
StructuringElement make_kernel(int size, int direction);
BinaryMask dilate(const BinaryMask& mask, const StructuringElement& kernel);
BinaryMask gaussian_blur_threshold(const BinaryMask& mask, double sigma, double threshold = 0.5);
BinaryMask connected_component(const BinaryMask& mask, PixelPoint seed);

}  // namespace rvp
