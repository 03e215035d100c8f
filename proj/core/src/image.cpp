#include "aerotarget/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aerotarget {

void throw_bad_dimensions(int width, int height) {
    throw std::invalid_argument("image dimensions must be >= 1, got " + std::to_string(width) +
                                "x" + std::to_string(height));
}

BinaryMask::BinaryMask(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) throw_bad_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::int64_t BinaryMask::population() const {
    std::int64_t n = 0;
    for (std::uint8_t v : data_) n += v;
    return n;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
    const int ix_min = std::max(a.x_min, b.x_min);
    const int iy_min = std::max(a.y_min, b.y_min);
    const int ix_max = std::min(a.x_max, b.x_max);
    const int iy_max = std::min(a.y_max, b.y_max);
    const std::int64_t iw = std::max(0, ix_max - ix_min);
    const std::int64_t ih = std::max(0, iy_max - iy_min);
    const std::int64_t inter = iw * ih;
    const std::int64_t uni = a.area() + b.area() - inter;
    if (uni <= 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

inline std::uint8_t to_byte(float v) {
    const float scaled = std::round(v * 255.0f);
    return static_cast<std::uint8_t>(std::clamp(scaled, 0.0f, 255.0f));
}

// Shared hue computation; returns degrees in [0,360), 0 for achromatic pixels.
inline float hue_of(float r, float g, float b, float maxc, float delta) {
    if (delta <= 0.0f) return 0.0f;
    float h;
    if (maxc == r)
        h = 60.0f * (g - b) / delta;
    else if (maxc == g)
        h = 60.0f * ((b - r) / delta + 2.0f);
    else
        h = 60.0f * ((r - g) / delta + 4.0f);
    if (h < 0.0f) h += 360.0f;
    if (h >= 360.0f) h -= 360.0f;
    return h;
}

}  // namespace

HsvPixel rgb_to_hsv(Rgb8 p) {
    const float r = p.r / 255.0f, g = p.g / 255.0f, b = p.b / 255.0f;
    const float maxc = std::max({r, g, b});
    const float minc = std::min({r, g, b});
    const float delta = maxc - minc;
    HsvPixel out;
    out.v = maxc;
    out.s = maxc > 0.0f ? delta / maxc : 0.0f;
    out.h = hue_of(r, g, b, maxc, delta);
    return out;
}

Rgb8 hsv_to_rgb(HsvPixel p) {
    const float c = p.v * p.s;
    const float hp = p.h / 60.0f;
    const float x = c * (1.0f - std::fabs(std::fmod(hp, 2.0f) - 1.0f));
    float r = 0, g = 0, b = 0;
    if (hp < 1)      { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else             { r = c; b = x; }
    const float m = p.v - c;
    return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

HlsPixel rgb_to_hls(Rgb8 p) {
    const float r = p.r / 255.0f, g = p.g / 255.0f, b = p.b / 255.0f;
    const float maxc = std::max({r, g, b});
    const float minc = std::min({r, g, b});
    const float delta = maxc - minc;
    HlsPixel out;
    out.l = (maxc + minc) / 2.0f;
    if (delta <= 0.0f) {
        out.s = 0.0f;
    } else {
        const float denom = 1.0f - std::fabs(2.0f * out.l - 1.0f);
        out.s = denom > 0.0f ? std::min(delta / denom, 1.0f) : 0.0f;
    }
    out.h = hue_of(r, g, b, maxc, delta);
    return out;
}

Rgb8 hls_to_rgb(HlsPixel p) {
    const float c = (1.0f - std::fabs(2.0f * p.l - 1.0f)) * p.s;
    const float hp = p.h / 60.0f;
    const float x = c * (1.0f - std::fabs(std::fmod(hp, 2.0f) - 1.0f));
    float r = 0, g = 0, b = 0;
    if (hp < 1)      { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else             { r = c; b = x; }
    const float m = p.l - c / 2.0f;
    return {to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

ImageHsv rgb_to_hsv(const ImageRgb& img) {
    ImageHsv out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) out.data()[i] = rgb_to_hsv(img.data()[i]);
    return out;
}

ImageRgb hsv_to_rgb(const ImageHsv& img) {
    ImageRgb out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) out.data()[i] = hsv_to_rgb(img.data()[i]);
    return out;
}

ImageHls rgb_to_hls(const ImageRgb& img) {
    ImageHls out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) out.data()[i] = rgb_to_hls(img.data()[i]);
    return out;
}

ImageRgb hls_to_rgb(const ImageHls& img) {
    ImageRgb out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) out.data()[i] = hls_to_rgb(img.data()[i]);
    return out;
}

namespace {

inline float median9(float* v) {
    std::nth_element(v, v + 4, v + 9);
    return v[4];
}

}  // namespace

ImageHsv denoise(const ImageHsv& img) {
    ImageHsv out(img.width(), img.height());
    const int w = img.width(), h = img.height();
    float hs[9], ss[9], vs[9];
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int sx = std::clamp(x + dx, 0, w - 1);
                    const int sy = std::clamp(y + dy, 0, h - 1);
                    const HsvPixel& p = img.at(sx, sy);
                    hs[n] = p.h;
                    ss[n] = p.s;
                    vs[n] = p.v;
                    ++n;
                }
            }
            out.at(x, y) = {median9(hs), median9(ss), median9(vs)};
        }
    }
    return out;
}

ImageRgb crop(const ImageRgb& img, const BoundingBox& box) {
    if (!box.valid() || box.x_min < 0 || box.y_min < 0 || box.x_max > img.width() ||
        box.y_max > img.height()) {
        throw std::invalid_argument("crop box out of image bounds");
    }
    ImageRgb out(box.width(), box.height());
    for (int y = 0; y < box.height(); ++y)
        for (int x = 0; x < box.width(); ++x)
            out.at(x, y) = img.at(box.x_min + x, box.y_min + y);
    return out;
}

GrayImage value_channel(const ImageHsv& img) {
    GrayImage out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) out.data()[i] = img.data()[i].v * 255.0f;
    return out;
}

}  // namespace aerotarget
