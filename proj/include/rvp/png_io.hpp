#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rvp/raster.hpp"

namespace rvp {

// PNG serialization conventions: images are RGB8; masks are single-channel
// 8-bit with foreground = 255, background = 0 (any nonzero reads as
// foreground). Label maps keep raw palette/gray indices as category ids.

Raster read_image_png(const std::filesystem::path& path);
void write_image_png(const std::filesystem::path& path, const Raster& img);

BinaryMask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask);

struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels;  // row-major category indices

    std::uint8_t at(int x, int y) const { return labels[static_cast<std::size_t>(y) * width + x]; }
};

LabelMap read_label_map_png(const std::filesystem::path& path);
void write_label_map_png(const std::filesystem::path& path, const LabelMap& labels);

// PNG-encoded RGB bytes of a raster (wire form for the model gateway).
std::vector<std::uint8_t> encode_png(const Raster& img);

}  // namespace rvp
