#pragma once

#include <cstdint>
#include <vector>

namespace aerotarget {

[[noreturn]] void throw_bad_dimensions(int width, int height);

struct Rgb8 {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb8&) const = default;
};

// h in degrees [0,360), s and v as fractions in [0,1]
struct HsvPixel {
    float h = 0.0f, s = 0.0f, v = 0.0f;
};

// h in degrees [0,360), l and s as fractions in [0,1]
struct HlsPixel {
    float h = 0.0f, l = 0.0f, s = 0.0f;
};

/// Row-major 2-D pixel grid. Immutable use after construction is the norm;
/// all pipeline stages take grids by const reference and return new ones.
template <typename T>
class PixelGrid {
public:
    PixelGrid() = default;
    PixelGrid(int width, int height, T fill = T{});

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t pixel_count() const { return static_cast<std::int64_t>(width_) * height_; }

    T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

template <typename T>
PixelGrid<T>::PixelGrid(int width, int height, T fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw_bad_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
}

using ImageRgb = PixelGrid<Rgb8>;
using ImageHsv = PixelGrid<HsvPixel>;
using ImageHls = PixelGrid<HlsPixel>;
using GrayImage = PixelGrid<float>;  // intensities on the 0..255 scale

/// Binary foreground mask (1 = foreground/white, 0 = background).
class BinaryMask {
public:
    BinaryMask() = default;
    BinaryMask(int width, int height, std::uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t pixel_count() const { return static_cast<std::int64_t>(width_) * height_; }

    std::uint8_t at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    void set(int x, int y, bool fg) { data_[static_cast<std::size_t>(y) * width_ + x] = fg ? 1 : 0; }

    std::vector<std::uint8_t>& data() { return data_; }
    const std::vector<std::uint8_t>& data() const { return data_; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width_ && y >= 0 && y < height_; }
    std::int64_t population() const;

    bool operator==(const BinaryMask&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Axis-aligned box, half-open: x in [x_min, x_max), y in [y_min, y_max).
struct BoundingBox {
    int x_min = 0, y_min = 0, x_max = 0, y_max = 0;

    int width() const { return x_max - x_min; }
    int height() const { return y_max - y_min; }
    std::int64_t area() const { return static_cast<std::int64_t>(width()) * height(); }
    bool valid() const { return x_min < x_max && y_min < y_max; }

    bool operator==(const BoundingBox&) const = default;
};

double iou(const BoundingBox& a, const BoundingBox& b);

ImageHsv rgb_to_hsv(const ImageRgb& img);
ImageRgb hsv_to_rgb(const ImageHsv& img);
ImageHls rgb_to_hls(const ImageRgb& img);
ImageRgb hls_to_rgb(const ImageHls& img);

HsvPixel rgb_to_hsv(Rgb8 p);
Rgb8 hsv_to_rgb(HsvPixel p);
HlsPixel rgb_to_hls(Rgb8 p);
Rgb8 hls_to_rgb(HlsPixel p);

/// 3x3 per-channel median filter; edge pixels use clamped neighborhoods.
ImageHsv denoise(const ImageHsv& img);

ImageRgb crop(const ImageRgb& img, const BoundingBox& box);

/// HSV value channel scaled to the 0..255 intensity range.
GrayImage value_channel(const ImageHsv& img);

}  // namespace aerotarget
