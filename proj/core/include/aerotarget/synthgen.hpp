#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerotarget/image.hpp"
#include "aerotarget/labels.hpp"

namespace aerotarget::synth {

/// One target to render: a colored shape with a differently colored
/// character cut out of it. `size` is the shape's bounding extent in pixels;
/// (x, y) is the placement center in scene coordinates.
struct TargetSpec {
    ShapeClass shape = ShapeClass::Square;
    ColorClass shape_color = ColorClass::Red;
    char character = 'A';
    ColorClass character_color = ColorClass::Yellow;
    double rotation_deg = 0.0;
    int size = 64;
    int x = 0;
    int y = 0;
};

/// Procedural background families: a flat color, blurred two-tone noise, or
/// a two-tone checker "grass" texture with the given cell size.
struct Background {
    enum class Kind : std::uint8_t { Flat, Noise2, Checker };

    Kind kind = Kind::Flat;
    Rgb8 color_a{60, 110, 55};
    Rgb8 color_b{40, 80, 40};
    int cell = 24;
};

std::string to_string(const Background& bg);
Background background_from_string(const std::string& text);

struct GroundTruth {
    TargetSpec spec;
    BoundingBox box;  // tight bounds of the composited shape raster
};

struct SceneManifest {
    std::string scene_id;
    std::string image_path;
    int width = 0;
    int height = 0;
    Background background;
    double noise_sigma = 0.0;
    double blur_radius = 0.0;
    std::uint64_t seed = 0;
    std::vector<GroundTruth> targets;
};

std::string manifest_to_json(const SceneManifest& manifest);
SceneManifest manifest_from_json(const std::string& text);
SceneManifest load_manifest(const std::string& path);

/// Rasterizes the ideal shape at the given rotation, no anti-aliasing. The
/// canvas tightly bounds the rotated shape; size must be >= 16.
BinaryMask render_mask(ShapeClass shape, int size, double rotation_deg);

struct RenderedTarget {
    ImageRgb image;        // shape color + character color; elsewhere black
    BinaryMask shape_mask; // shape raster minus the character hole
    BinaryMask char_mask;  // the character, disjoint from shape_mask
};

/// Renders spec's shape with its character cut out. The character is scaled
/// down until it fits strictly inside the shape raster. Equal shape and
/// character colors, or a character that cannot fit, throw.
RenderedTarget render_target(const TargetSpec& spec);

/// Composites targets over a procedural background, then applies Gaussian
/// blur and seeded additive Gaussian pixel noise (sigma on the 0..1 scale).
/// Targets whose rasters overlap or leave the image throw.
std::pair<ImageRgb, SceneManifest> generate_scene(int width, int height,
                                                  const std::vector<TargetSpec>& specs,
                                                  const Background& bg, double noise_sigma,
                                                  double blur_radius, std::uint64_t seed);

struct DatasetConfig {
    std::string out_dir;
    int scene_count = 20;
    int width = 1280;
    int height = 960;
    int min_size = 40;
    int max_size = 120;
    int targets_per_scene = 1;     // 0 renders background-only scenes
    bool ensure_coverage = true;   // cycle classes so all appear once counts allow
    double noise_sigma = 6.0 / 255.0;
    double blur_radius = 1.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Writes scenes/<id>.png + scenes/<id>.json per scene and an index.json.
/// Pure function of (config, seed): every scene derives its RNG stream from
/// (seed, scene index). Returns the manifests in scene order.
std::vector<SceneManifest> generate_dataset(const DatasetConfig& cfg);

}  // namespace aerotarget::synth
