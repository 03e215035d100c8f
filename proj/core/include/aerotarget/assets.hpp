#pragma once

#include <cstdint>
#include <string>

#include "aerotarget/classify.hpp"

namespace aerotarget::assets {

inline constexpr std::uint32_t kAssetVersion = 1;

/// Everything the baseline classifiers need: the rotated character template
/// bank and the shape feature centroids with their whitening scales.
struct ClassifierAssets {
    std::uint64_t seed = 0;
    cls::CharacterTemplateBank char_bank;
    cls::ShapeCentroidTable shape_table;
};

/// Builds the assets from the bundled glyph set and rendered shape masks.
/// Pure function of the seed (the seed jitters the shape-sampling rotations).
ClassifierAssets build_assets(std::uint64_t seed);

/// Versioned little-endian binary format; byte-identical for equal assets.
void save_assets(const ClassifierAssets& assets, const std::string& path);

/// Loads a saved asset file. A bad magic or version mismatch throws with the
/// found and expected versions in the message.
ClassifierAssets load_assets(const std::string& path);

}  // namespace aerotarget::assets
