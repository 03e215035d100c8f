#include "aerotarget/assets.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "aerotarget/glyphs.hpp"
#include "aerotarget/numerics.hpp"
#include "aerotarget/synthgen.hpp"

namespace aerotarget::assets {

namespace {

// Glyphs are rendered well above template resolution so normalization, not
// rasterization, decides the template's pixels.
constexpr int kGlyphRenderHeight = 64;

constexpr int kShapeSizes[] = {64, 112};
constexpr int kShapeRotationsPerSize = 24;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

struct Reader {
    const std::string& data;
    std::size_t pos = 0;

    std::uint32_t u32() {
        if (pos + 4 > data.size()) throw std::runtime_error("asset file truncated");
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= std::uint32_t(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        if (pos + 8 > data.size()) throw std::runtime_error("asset file truncated");
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= std::uint64_t(static_cast<unsigned char>(data[pos++])) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

ClassifierAssets build_assets(std::uint64_t seed) {
    ClassifierAssets assets;
    assets.seed = seed;

    for (int c = 0; c < kNumCharClasses; ++c) {
        const char label = char_class_label(c);
        for (int r = 0; r < cls::kTemplateRotations; ++r) {
            const BinaryMask glyph =
                glyphs::render_glyph(label, kGlyphRenderHeight, r * cls::kRotationStepDeg);
            assets.char_bank.templates[c][r] = cls::pack_template(cls::normalize_mask(glyph));
        }
    }

    num::SplitMix64 rng(num::derive_seed(seed, 0x5a7e));
    std::array<std::vector<cls::ShapeFeatureVec>, kNumShapeClasses> samples;
    for (int s = 0; s < kNumShapeClasses; ++s) {
        const ShapeClass shape = shape_class_from_index(s);
        for (const int size : kShapeSizes) {
            for (int k = 0; k < kShapeRotationsPerSize; ++k) {
                const double step = 360.0 / kShapeRotationsPerSize;
                const double rot = k * step + rng.next_double() * step;
                samples[s].push_back(cls::shape_features(synth::render_mask(shape, size, rot)));
            }
        }
        cls::ShapeFeatureVec sum{};
        for (const auto& f : samples[s])
            for (int i = 0; i < cls::kNumShapeFeatures; ++i) sum[i] += f[i];
        for (int i = 0; i < cls::kNumShapeFeatures; ++i)
            assets.shape_table.centroids[s][i] = sum[i] / samples[s].size();
    }

    // Whitening by the per-class deviation: a feature that is stable for a
    // given class pulls that class's distance sharply when it mismatches.
    // Floors keep segmentation noise on real crops from exploding a distance
    // through a near-zero scale, and damp the wide-class bias a per-class
    // metric would otherwise have.
    constexpr cls::ShapeFeatureVec kScaleFloor = {0.015, 0.015, 0.5, 0.02, 0.015};
    for (int s = 0; s < kNumShapeClasses; ++s) {
        cls::ShapeFeatureVec var{};
        for (const auto& f : samples[s]) {
            for (int i = 0; i < cls::kNumShapeFeatures; ++i) {
                const double d = f[i] - assets.shape_table.centroids[s][i];
                var[i] += d * d;
            }
        }
        for (int i = 0; i < cls::kNumShapeFeatures; ++i)
            assets.shape_table.scales[s][i] =
                std::max(std::sqrt(var[i] / samples[s].size()), kScaleFloor[i]);
    }

    return assets;
}

void save_assets(const ClassifierAssets& assets, const std::string& path) {
    std::string out;
    out.reserve(4 + 4 + 8 + std::size_t(kNumCharClasses) * cls::kTemplateRotations *
                                cls::kTemplateWords * 8 +
                2 * kNumShapeClasses * cls::kNumShapeFeatures * 8);
    out += "ATCA";
    put_u32(out, kAssetVersion);
    put_u64(out, assets.seed);
    for (int c = 0; c < kNumCharClasses; ++c)
        for (int r = 0; r < cls::kTemplateRotations; ++r)
            for (int w = 0; w < cls::kTemplateWords; ++w)
                put_u64(out, assets.char_bank.templates[c][r][w]);
    for (int s = 0; s < kNumShapeClasses; ++s)
        for (int i = 0; i < cls::kNumShapeFeatures; ++i)
            put_f64(out, assets.shape_table.centroids[s][i]);
    for (int s = 0; s < kNumShapeClasses; ++s)
        for (int i = 0; i < cls::kNumShapeFeatures; ++i)
            put_f64(out, assets.shape_table.scales[s][i]);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot write asset file: " + path);
    file.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!file) throw std::runtime_error("write failed for asset file: " + path);
}

ClassifierAssets load_assets(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open asset file: " + path);
    std::string data((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

    if (data.size() < 8 || data.compare(0, 4, "ATCA") != 0)
        throw std::runtime_error("not an asset file: " + path);
    Reader r{data, 4};
    const std::uint32_t version = r.u32();
    if (version != kAssetVersion)
        throw std::runtime_error("asset version mismatch: found " + std::to_string(version) +
                                 ", expected " + std::to_string(kAssetVersion));

    ClassifierAssets assets;
    assets.seed = r.u64();
    for (int c = 0; c < kNumCharClasses; ++c)
        for (int rot = 0; rot < cls::kTemplateRotations; ++rot)
            for (int w = 0; w < cls::kTemplateWords; ++w)
                assets.char_bank.templates[c][rot][w] = r.u64();
    for (int s = 0; s < kNumShapeClasses; ++s)
        for (int i = 0; i < cls::kNumShapeFeatures; ++i)
            assets.shape_table.centroids[s][i] = r.f64();
    for (int s = 0; s < kNumShapeClasses; ++s)
        for (int i = 0; i < cls::kNumShapeFeatures; ++i) assets.shape_table.scales[s][i] = r.f64();
    if (r.pos != data.size())
        throw std::runtime_error("asset file has trailing bytes: " + path);
    return assets;
}

}  // namespace aerotarget::assets
