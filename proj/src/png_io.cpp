#include "rvp/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

#include "rvp/error.hpp"

namespace rvp {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngReader() {
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw IoError("libpng allocation failed");
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
    PngReader(const PngReader&) = delete;
    PngReader& operator=(const PngReader&) = delete;
};

struct PngWriter {
    png_structp png = nullptr;
    png_infop info = nullptr;

    PngWriter() {
        png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
        if (png) info = png_create_info_struct(png);
        if (!png || !info) throw IoError("libpng allocation failed");
    }
    ~PngWriter() { png_destroy_write_struct(&png, &info); }
    PngWriter(const PngWriter&) = delete;
    PngWriter& operator=(const PngWriter&) = delete;
};

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.string().c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

// Decode to 8-bit rows; `expand_rgb` maps everything to RGB8, otherwise
// palette/gray indices are kept as-is (label maps).
struct Decoded {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;
};

Decoded decode(const std::filesystem::path& path, bool expand_rgb) {
    auto file = open_file(path, "rb");
    PngReader r;
    if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG " + path.string());
    png_init_io(r.png, file.get());
    png_read_info(r.png, r.info);

    const png_uint_32 w = png_get_image_width(r.png, r.info);
    const png_uint_32 h = png_get_image_height(r.png, r.info);
    const int color_type = png_get_color_type(r.png, r.info);
    const int bit_depth = png_get_bit_depth(r.png, r.info);

    if (bit_depth == 16) png_set_strip_16(r.png);
    if (expand_rgb) {
        if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
        if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
            png_set_gray_to_rgb(r.png);
        if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
        png_set_strip_alpha(r.png);
    } else {
        if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
            png_set_expand_gray_1_2_4_to_8(r.png);
        if (bit_depth < 8 && color_type == PNG_COLOR_TYPE_PALETTE)
            png_set_packing(r.png);
        if (color_type == PNG_COLOR_TYPE_GRAY_ALPHA || color_type == PNG_COLOR_TYPE_RGB_ALPHA)
            png_set_strip_alpha(r.png);
    }
    png_read_update_info(r.png, r.info);

    const std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
    Decoded out;
    out.width = static_cast<int>(w);
    out.height = static_cast<int>(h);
    out.channels = static_cast<int>(rowbytes / w);
    out.data.resize(rowbytes * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = out.data.data() + y * rowbytes;
    png_read_image(r.png, rows.data());
    png_read_end(r.png, nullptr);
    return out;
}

void encode_to(png_structp png, png_infop info, const Raster& img) {
    png_set_IHDR(png, info, static_cast<png_uint_32>(img.width()),
                 static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(img.width()) * 3);
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const Rgb8 c = img.at(x, y);
            row[static_cast<std::size_t>(x) * 3 + 0] = c.r;
            row[static_cast<std::size_t>(x) * 3 + 1] = c.g;
            row[static_cast<std::size_t>(x) * 3 + 2] = c.b;
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
}

}  // namespace

Raster read_image_png(const std::filesystem::path& path) {
    const Decoded d = decode(path, /*expand_rgb=*/true);
    if (d.channels != 3) throw IoError("unexpected channel count in " + path.string());
    Raster img(d.width, d.height);
    for (int y = 0; y < d.height; ++y) {
        for (int x = 0; x < d.width; ++x) {
            const std::size_t i = (static_cast<std::size_t>(y) * d.width + x) * 3;
            img.set(x, y, {d.data[i], d.data[i + 1], d.data[i + 2]});
        }
    }
    return img;
}

void write_image_png(const std::filesystem::path& path, const Raster& img) {
    auto file = open_file(path, "wb");
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG " + path.string());
    png_init_io(w.png, file.get());
    encode_to(w.png, w.info, img);
}

BinaryMask read_mask_png(const std::filesystem::path& path) {
    const LabelMap lm = read_label_map_png(path);
    BinaryMask mask(lm.width, lm.height);
    for (int y = 0; y < lm.height; ++y)
        for (int x = 0; x < lm.width; ++x) mask.set(x, y, lm.at(x, y) != 0);
    return mask;
}

void write_mask_png(const std::filesystem::path& path, const BinaryMask& mask) {
    auto file = open_file(path, "wb");
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG " + path.string());
    png_init_io(w.png, file.get());
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(mask.width()),
                 static_cast<png_uint_32>(mask.height()), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(mask.width()));
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x)
            row[static_cast<std::size_t>(x)] = mask.at(x, y) ? 255 : 0;
        png_write_row(w.png, row.data());
    }
    png_write_end(w.png, nullptr);
}

LabelMap read_label_map_png(const std::filesystem::path& path) {
    const Decoded d = decode(path, /*expand_rgb=*/false);
    if (d.channels != 1)
        throw IoError("label map must be palette or grayscale PNG: " + path.string());
    return LabelMap{d.width, d.height, d.data};
}

void write_label_map_png(const std::filesystem::path& path, const LabelMap& labels) {
    auto file = open_file(path, "wb");
    PngWriter w;
    if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG " + path.string());
    png_init_io(w.png, file.get());
    png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(labels.width),
                 static_cast<png_uint_32>(labels.height), 8, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(w.png, w.info);
    for (int y = 0; y < labels.height; ++y)
        png_write_row(w.png, const_cast<png_bytep>(labels.labels.data() +
                                                   static_cast<std::size_t>(y) * labels.width));
    png_write_end(w.png, nullptr);
}

std::vector<std::uint8_t> encode_png(const Raster& img) {
    PngWriter w;
    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(w.png))) throw IoError("failed to encode PNG buffer");
    png_set_write_fn(
        w.png, &out,
        [](png_structp png, png_bytep data, png_size_t len) {
            auto* buf = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
            buf->insert(buf->end(), data, data + len);
        },
        nullptr);
    encode_to(w.png, w.info, img);
    return out;
}

}  // namespace rvp
