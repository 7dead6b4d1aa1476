#include "rvp/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rvp/error.hpp"

namespace rvp {

Raster::Raster(int width, int height, Rgb8 fill)
    : w_(width), h_(height), px_(static_cast<std::size_t>(width) * height, fill) {
    if (width < 1 || height < 1) throw Error("Raster dimensions must be >= 1");
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : w_(width), h_(height), bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
    if (width < 1 || height < 1) throw Error("BinaryMask dimensions must be >= 1");
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool BinaryMask::subset_of(const BinaryMask& other) const {
    if (w_ != other.w_ || h_ != other.h_) return false;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] && !other.bits_[i]) return false;
    return true;
}

namespace {

// Lower-envelope-of-parabolas pass over one row of squared column distances.
// Positions run over [-1, w]: the two virtual entries are the image exterior,
// which is background and therefore contributes (x+1)^2 / (w-x)^2.
void envelope_row(const std::vector<std::int64_t>& f, int w, std::vector<std::int64_t>& out) {
    const int n = w + 2;  // positions -1..w, stored shifted by +1
    static thread_local std::vector<int> v;
    static thread_local std::vector<double> z;
    v.assign(n, 0);
    z.assign(n + 1, 0.0);

    auto fq = [&](int q) { return f[q]; };  // f indexed by shifted position

    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            const int p = v[k];
            s = (static_cast<double>(fq(q) + static_cast<std::int64_t>(q) * q) -
                 static_cast<double>(fq(p) + static_cast<std::int64_t>(p) * p)) /
                (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }

    k = 0;
    for (int q = 1; q <= w; ++q) {  // only real columns (shifted positions 1..w)
        while (z[k + 1] < q) ++k;
        const std::int64_t d = q - v[k];
        out[q - 1] = d * d + fq(v[k]);
    }
}

}  // namespace

DistanceField distance_transform(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    DistanceField field{w, h, std::vector<std::int64_t>(static_cast<std::size_t>(w) * h, 0)};

    // Pass 1: per column, distance (in rows) to the nearest background pixel,
    // with virtual background at y = -1 and y = h.
    std::vector<std::int32_t> coldist(static_cast<std::size_t>(w) * h);
    for (int x = 0; x < w; ++x) {
        std::int32_t d = 1;  // distance to the exterior above row 0
        for (int y = 0; y < h; ++y) {
            d = mask.at(x, y) ? d : 0;
            coldist[static_cast<std::size_t>(y) * w + x] = d;
            ++d;
        }
        d = 1;
        for (int y = h - 1; y >= 0; --y) {
            d = mask.at(x, y) ? d : 0;
            auto& cell = coldist[static_cast<std::size_t>(y) * w + x];
            cell = std::min(cell, d);
            ++d;
        }
    }

    // Pass 2: per row, 1-D squared-distance envelope over the squared column
    // distances, with zero-valued virtual columns at x = -1 and x = w.
    std::vector<std::int64_t> f(static_cast<std::size_t>(w) + 2);
    std::vector<std::int64_t> row(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        f[0] = 0;
        f[static_cast<std::size_t>(w) + 1] = 0;
        for (int x = 0; x < w; ++x) {
            const std::int64_t c = coldist[static_cast<std::size_t>(y) * w + x];
            f[static_cast<std::size_t>(x) + 1] = c * c;
        }
        envelope_row(f, w, row);
        std::copy(row.begin(), row.end(),
                  field.sqdist.begin() + static_cast<std::size_t>(y) * w);
    }
    return field;
}

PixelPoint argmax_distance(const DistanceField& field) {
    std::int64_t best = 0;
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < field.sqdist.size(); ++i) {
        if (field.sqdist[i] > best) {
            best = field.sqdist[i];
            best_idx = i;
        }
    }
    if (best <= 0) throw EmptyRegion("argmax_distance: field has no positive value");
    const int w = field.width;
    return {static_cast<int>(best_idx % w), static_cast<int>(best_idx / w)};
}

StructuringElement make_kernel(int size, int direction) {
    if (size < 1 || size % 2 == 0)
        throw InvalidKernelSpec("kernel size must be odd and >= 1, got " + std::to_string(size));
    if (direction < 0 || direction > 7)
        throw InvalidKernelSpec("kernel direction must be in [0,7], got " +
                                std::to_string(direction));

    // Compass steps, 0 = east, counterclockwise, y grows downward.
    static constexpr int kStepX[8] = {1, 1, 0, -1, -1, -1, 0, 1};
    static constexpr int kStepY[8] = {0, -1, -1, -1, 0, 1, 1, 1};

    StructuringElement k{size, direction, {{0, 0}}};
    const int steps = size / 2;
    for (int i = 1; i <= steps; ++i)
        k.offsets.emplace_back(i * kStepX[direction], i * kStepY[direction]);
    return k;
}

BinaryMask dilate(const BinaryMask& mask, const StructuringElement& kernel) {
    const int w = mask.width();
    const int h = mask.height();
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            for (const auto& [dx, dy] : kernel.offsets) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx >= 0 && nx < w && ny >= 0 && ny < h) out.set(nx, ny, true);
            }
        }
    }
    return out;
}

BinaryMask gaussian_blur_threshold(const BinaryMask& mask, double sigma, double threshold) {
    if (sigma <= 0.0) throw Error("gaussian_blur_threshold: sigma must be positive");
    const int w = mask.width();
    const int h = mask.height();
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));

    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (auto& v : kernel) v /= sum;

    // Separable convolution with zero padding; the normalized 1-D kernels
    // compose to the normalized 2-D product kernel.
    std::vector<double> tmp(static_cast<std::size_t>(w) * h, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sx = x + i;
                if (sx < 0 || sx >= w) continue;
                if (mask.at(sx, y)) acc += kernel[static_cast<std::size_t>(i + radius)];
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    BinaryMask out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sy = y + i;
                if (sy < 0 || sy >= h) continue;
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp[static_cast<std::size_t>(sy) * w + x];
            }
            out.set(x, y, acc >= threshold);
        }
    }
    return out;
}

BinaryMask connected_component(const BinaryMask& mask, PixelPoint seed) {
    if (!mask.contains(seed)) throw OutOfBounds("connected_component: seed out of bounds");
    const int w = mask.width();
    const int h = mask.height();
    BinaryMask out(w, h);
    if (!mask.at(seed.x, seed.y)) return out;

    std::vector<PixelPoint> stack{seed};
    out.set(seed.x, seed.y, true);
    while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                const int nx = cx + dx;
                const int ny = cy + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                if (mask.at(nx, ny) && !out.at(nx, ny)) {
                    out.set(nx, ny, true);
                    stack.push_back({nx, ny});
                }
            }
        }
    }
    return out;
}

}  // namespace rvp
