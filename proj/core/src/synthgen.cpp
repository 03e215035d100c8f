#include "aerotarget/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "aerotarget/glyphs.hpp"
#include "aerotarget/imageio.hpp"
#include "aerotarget/numerics.hpp"

namespace aerotarget::synth {

namespace {

constexpr double kPi = std::numbers::pi;

struct Vec2 {
    double x = 0.0, y = 0.0;
};

Vec2 rotate(const Vec2& p, double deg) {
    const double rad = deg * kPi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    return {p.x * c - p.y * s, p.x * s + p.y * c};
}

// Canonical outlines live in the unit box [-0.5, 0.5]^2 with y pointing
// down; regular polygons put their first vertex at the top.
std::vector<Vec2> regular_polygon(int n, double radius, double inner = 0.0) {
    std::vector<Vec2> pts;
    const int count = inner > 0.0 ? 2 * n : n;
    for (int k = 0; k < count; ++k) {
        const double r = (inner > 0.0 && k % 2 == 1) ? inner : radius;
        const double a = -kPi / 2.0 + k * 2.0 * kPi / count;
        pts.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return pts;
}

std::vector<Vec2> canonical_polygon(ShapeClass shape) {
    switch (shape) {
        case ShapeClass::Square:
            return {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
        case ShapeClass::Rectangle:
            return {{-0.5, -0.325}, {0.5, -0.325}, {0.5, 0.325}, {-0.5, 0.325}};
        case ShapeClass::Triangle:
            return {{0.0, -0.433}, {0.5, 0.433}, {-0.5, 0.433}};
        case ShapeClass::Trapezoid:
            return {{-0.28, -0.3}, {0.28, -0.3}, {0.5, 0.3}, {-0.5, 0.3}};
        case ShapeClass::Hexagon:
            return regular_polygon(6, 0.5);
        case ShapeClass::Heptagon:
            return regular_polygon(7, 0.5);
        case ShapeClass::Octagon:
            return regular_polygon(8, 0.5);
        case ShapeClass::Star:
            return regular_polygon(5, 0.5, 0.191);
        case ShapeClass::Cross: {
            const double a = 0.17;
            return {{-a, -0.5}, {a, -0.5},  {a, -a},  {0.5, -a}, {0.5, a},  {a, a},
                    {a, 0.5},  {-a, 0.5},  {-a, a},  {-0.5, a}, {-0.5, -a}, {-a, -a}};
        }
        case ShapeClass::Pentagon:
            return regular_polygon(5, 0.5);
        default:
            return {};  // circle family is handled analytically
    }
}

bool in_polygon(const std::vector<Vec2>& poly, double x, double y) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        if ((poly[i].y > y) != (poly[j].y > y)) {
            const double t = (y - poly[i].y) / (poly[j].y - poly[i].y);
            const double xi = poly[i].x + t * (poly[j].x - poly[i].x);
            if (x < xi) inside = !inside;
        }
    }
    return inside;
}

// Point-in-shape test in canonical pixel units (canonical coords * size).
bool in_canonical(ShapeClass shape, const std::vector<Vec2>& poly, double s, double x, double y) {
    switch (shape) {
        case ShapeClass::Circle:
            return x * x + y * y <= 0.25 * s * s;
        case ShapeClass::SemiCircle: {
            const double dy = y - 0.25 * s;
            return y <= 0.25 * s && x * x + dy * dy <= 0.25 * s * s;
        }
        case ShapeClass::QuarterCircle: {
            const double dx = x + 0.5 * s, dy = y - 0.5 * s;
            return x >= -0.5 * s && y <= 0.5 * s && dx * dx + dy * dy <= s * s;
        }
        default:
            return in_polygon(poly, x / s, y / s);
    }
}

// Dense boundary sample of the canonical outline, for the rotated canvas box.
std::vector<Vec2> boundary_points(ShapeClass shape, const std::vector<Vec2>& poly) {
    switch (shape) {
        case ShapeClass::Circle:
        case ShapeClass::SemiCircle:
        case ShapeClass::QuarterCircle: {
            std::vector<Vec2> pts;
            for (int k = 0; k < 360; ++k) {
                const double a = k * kPi / 180.0;
                switch (shape) {
                    case ShapeClass::Circle:
                        pts.push_back({0.5 * std::cos(a), 0.5 * std::sin(a)});
                        break;
                    case ShapeClass::SemiCircle:
                        if (std::sin(a) <= 0.0)
                            pts.push_back({0.5 * std::cos(a), 0.25 + 0.5 * std::sin(a)});
                        break;
                    case ShapeClass::QuarterCircle:
                        if (std::cos(a) >= 0.0 && std::sin(a) <= 0.0)
                            pts.push_back({-0.5 + std::cos(a), 0.5 + std::sin(a)});
                        break;
                    default:
                        break;
                }
            }
            if (shape == ShapeClass::SemiCircle) {
                pts.push_back({-0.5, 0.25});
                pts.push_back({0.5, 0.25});
            }
            if (shape == ShapeClass::QuarterCircle) {
                pts.push_back({-0.5, 0.5});
                pts.push_back({-0.5, -0.5});
                pts.push_back({0.5, 0.5});
            }
            return pts;
        }
        default:
            return poly;
    }
}

struct PlacedMask {
    BinaryMask mask;
    double origin_x = 0.0;  // pixel (i, j) center = origin + (i, j) + 0.5
    double origin_y = 0.0;
};

PlacedMask render_mask_impl(ShapeClass shape, int size, double rotation_deg) {
    if (size < 16) throw std::invalid_argument("render_mask: size must be >= 16");
    const std::vector<Vec2> poly = canonical_polygon(shape);

    double min_x = 1e18, min_y = 1e18, max_x = -1e18, max_y = -1e18;
    for (const Vec2& b : boundary_points(shape, poly)) {
        const Vec2 r = rotate({b.x * size, b.y * size}, rotation_deg);
        min_x = std::min(min_x, r.x);
        min_y = std::min(min_y, r.y);
        max_x = std::max(max_x, r.x);
        max_y = std::max(max_y, r.y);
    }

    PlacedMask out;
    out.origin_x = std::floor(min_x);
    out.origin_y = std::floor(min_y);
    const int w = std::max(1, static_cast<int>(std::ceil(max_x - out.origin_x)));
    const int h = std::max(1, static_cast<int>(std::ceil(max_y - out.origin_y)));
    out.mask = BinaryMask(w, h);
    for (int j = 0; j < h; ++j) {
        for (int i = 0; i < w; ++i) {
            const Vec2 q = rotate({out.origin_x + i + 0.5, out.origin_y + j + 0.5}, -rotation_deg);
            if (in_canonical(shape, poly, size, q.x, q.y)) out.mask.set(i, j, true);
        }
    }
    return out;
}

// Character anchor inside the canonical shape (roughly its centroid) and the
// starting glyph height as a fraction of the shape size.
Vec2 interior_anchor(ShapeClass shape) {
    switch (shape) {
        case ShapeClass::Triangle: return {0.0, 0.144};
        case ShapeClass::Trapezoid: return {0.0, 0.028};
        case ShapeClass::QuarterCircle: return {-0.076, 0.076};
        case ShapeClass::SemiCircle: return {0.0, 0.038};
        default: return {0.0, 0.0};
    }
}

double glyph_fraction(ShapeClass shape) {
    switch (shape) {
        case ShapeClass::Square: return 0.50;
        case ShapeClass::Rectangle: return 0.40;
        case ShapeClass::Triangle: return 0.28;
        case ShapeClass::Trapezoid: return 0.30;
        case ShapeClass::Hexagon: return 0.45;
        case ShapeClass::Heptagon: return 0.45;
        case ShapeClass::Octagon: return 0.46;
        case ShapeClass::QuarterCircle: return 0.32;
        case ShapeClass::SemiCircle: return 0.27;
        case ShapeClass::Star: return 0.20;
        case ShapeClass::Cross: return 0.26;
        case ShapeClass::Circle: return 0.48;
        case ShapeClass::Pentagon: return 0.40;
    }
    return 0.3;
}

// True when every character pixel sits strictly inside the shape raster
// (all 8 neighbors are foreground too), so the hole never opens the outline.
bool strictly_inside(const BinaryMask& ch, const BinaryMask& raster) {
    for (int y = 0; y < ch.height(); ++y) {
        for (int x = 0; x < ch.width(); ++x) {
            if (!ch.at(x, y)) continue;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const int nx = x + dx, ny = y + dy;
                    if (!raster.in_bounds(nx, ny) || !raster.at(nx, ny)) return false;
                }
            }
        }
    }
    return true;
}

std::string hex_color(Rgb8 c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rgb8 parse_hex_color(const std::string& s) {
    if (s.size() != 6) throw std::invalid_argument("background: bad color '" + s + "'");
    const auto byte = [&](int i) {
        return static_cast<std::uint8_t>(std::stoi(s.substr(i, 2), nullptr, 16));
    };
    return {byte(0), byte(2), byte(4)};
}

ImageRgb render_background(int width, int height, const Background& bg, num::SplitMix64& rng) {
    ImageRgb img(width, height, bg.color_a);
    switch (bg.kind) {
        case Background::Kind::Flat:
            break;
        case Background::Kind::Noise2:
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    const double t = rng.next_double();
                    const auto mix = [&](int a, int b) {
                        return static_cast<std::uint8_t>(std::lround(a + t * (b - a)));
                    };
                    img.at(x, y) = {mix(bg.color_a.r, bg.color_b.r), mix(bg.color_a.g, bg.color_b.g),
                                    mix(bg.color_a.b, bg.color_b.b)};
                }
            }
            break;
        case Background::Kind::Checker:
            for (int y = 0; y < height; ++y) {
                for (int x = 0; x < width; ++x) {
                    if (((x / bg.cell) + (y / bg.cell)) % 2) img.at(x, y) = bg.color_b;
                }
            }
            break;
    }
    return img;
}

void gaussian_blur_rgb(ImageRgb& img, double sigma) {
    if (sigma <= 0.0) return;
    const int half = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(2 * half + 1);
    double total = 0.0;
    for (int i = -half; i <= half; ++i) {
        kernel[i + half] = std::exp(-0.5 * i * i / (sigma * sigma));
        total += kernel[i + half];
    }
    for (double& k : kernel) k /= total;

    const int w = img.width(), h = img.height();
    std::vector<std::array<double, 3>> tmp(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::array<double, 3> acc{};
            for (int i = -half; i <= half; ++i) {
                const int sx = std::clamp(x + i, 0, w - 1);
                const Rgb8 p = img.at(sx, y);
                acc[0] += kernel[i + half] * p.r;
                acc[1] += kernel[i + half] * p.g;
                acc[2] += kernel[i + half] * p.b;
            }
            tmp[static_cast<std::size_t>(y) * w + x] = acc;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::array<double, 3> acc{};
            for (int i = -half; i <= half; ++i) {
                const int sy = std::clamp(y + i, 0, h - 1);
                const auto& p = tmp[static_cast<std::size_t>(sy) * w + x];
                acc[0] += kernel[i + half] * p[0];
                acc[1] += kernel[i + half] * p[1];
                acc[2] += kernel[i + half] * p[2];
            }
            const auto to8 = [](double v) {
                return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            };
            img.at(x, y) = {to8(acc[0]), to8(acc[1]), to8(acc[2])};
        }
    }
}

std::string scene_id_of(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d", index);
    return buf;
}

nlohmann::ordered_json manifest_json(const SceneManifest& m) {
    nlohmann::ordered_json j;
    j["scene"] = m.scene_id;
    j["image"] = m.image_path;
    j["width"] = m.width;
    j["height"] = m.height;
    j["background"] = to_string(m.background);
    j["noise_sigma"] = m.noise_sigma;
    j["blur_radius"] = m.blur_radius;
    j["seed"] = m.seed;
    j["targets"] = nlohmann::ordered_json::array();
    for (const GroundTruth& gt : m.targets) {
        nlohmann::ordered_json t;
        t["box"] = {{"x_min", gt.box.x_min},
                    {"y_min", gt.box.y_min},
                    {"x_max", gt.box.x_max},
                    {"y_max", gt.box.y_max}};
        t["shape"] = std::string(to_string(gt.spec.shape));
        t["shape_color"] = std::string(to_string(gt.spec.shape_color));
        t["character"] = std::string(1, gt.spec.character);
        t["character_color"] = std::string(to_string(gt.spec.character_color));
        t["rotation"] = gt.spec.rotation_deg;
        t["size"] = gt.spec.size;
        t["x"] = gt.spec.x;
        t["y"] = gt.spec.y;
        j["targets"].push_back(std::move(t));
    }
    return j;
}

}  // namespace

std::string to_string(const Background& bg) {
    switch (bg.kind) {
        case Background::Kind::Flat:
            return "flat:" + hex_color(bg.color_a);
        case Background::Kind::Noise2:
            return "noise2:" + hex_color(bg.color_a) + ":" + hex_color(bg.color_b);
        case Background::Kind::Checker:
            return "checker:" + hex_color(bg.color_a) + ":" + hex_color(bg.color_b) + ":" +
                   std::to_string(bg.cell);
    }
    throw std::logic_error("background: bad kind");
}

Background background_from_string(const std::string& text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string::npos) break;
        start = colon + 1;
    }
    Background bg;
    if (parts[0] == "flat" && parts.size() == 2) {
        bg.kind = Background::Kind::Flat;
        bg.color_a = parse_hex_color(parts[1]);
    } else if (parts[0] == "noise2" && parts.size() == 3) {
        bg.kind = Background::Kind::Noise2;
        bg.color_a = parse_hex_color(parts[1]);
        bg.color_b = parse_hex_color(parts[2]);
    } else if (parts[0] == "checker" && parts.size() == 4) {
        bg.kind = Background::Kind::Checker;
        bg.color_a = parse_hex_color(parts[1]);
        bg.color_b = parse_hex_color(parts[2]);
        bg.cell = std::stoi(parts[3]);
        if (bg.cell < 1) throw std::invalid_argument("background: bad cell size");
    } else {
        throw std::invalid_argument("background: cannot parse '" + text + "'");
    }
    return bg;
}

BinaryMask render_mask(ShapeClass shape, int size, double rotation_deg) {
    return render_mask_impl(shape, size, rotation_deg).mask;
}

RenderedTarget render_target(const TargetSpec& spec) {
    if (spec.shape_color == spec.character_color)
        throw std::invalid_argument("render_target: shape and character colors must differ");
    if (char_class_index(spec.character) < 0)
        throw std::invalid_argument("render_target: unknown character class");

    const PlacedMask placed = render_mask_impl(spec.shape, spec.size, spec.rotation_deg);
    const BinaryMask& raster = placed.mask;

    const Vec2 anchor = rotate({interior_anchor(spec.shape).x * spec.size,
                                interior_anchor(spec.shape).y * spec.size},
                               spec.rotation_deg);
    const double cx = anchor.x - placed.origin_x;
    const double cy = anchor.y - placed.origin_y;

    BinaryMask char_mask;
    double height = glyph_fraction(spec.shape) * spec.size;
    for (; height >= 6.0; height *= 0.88) {
        BinaryMask attempt(raster.width(), raster.height());
        glyphs::rasterize_glyph(spec.character, height, cx, cy, spec.rotation_deg, attempt);
        if (attempt.population() > 0 && strictly_inside(attempt, raster)) {
            char_mask = std::move(attempt);
            break;
        }
    }
    if (char_mask.pixel_count() == 0)
        throw std::invalid_argument("render_target: character does not fit inside shape");

    RenderedTarget out;
    out.char_mask = std::move(char_mask);
    out.shape_mask = BinaryMask(raster.width(), raster.height());
    out.image = ImageRgb(raster.width(), raster.height(), Rgb8{0, 0, 0});
    const Rgb8 shape_rgb = reference_rgb(spec.shape_color);
    const Rgb8 char_rgb = reference_rgb(spec.character_color);
    for (int y = 0; y < raster.height(); ++y) {
        for (int x = 0; x < raster.width(); ++x) {
            if (out.char_mask.at(x, y)) {
                out.image.at(x, y) = char_rgb;
            } else if (raster.at(x, y)) {
                out.shape_mask.set(x, y, true);
                out.image.at(x, y) = shape_rgb;
            }
        }
    }
    return out;
}

std::pair<ImageRgb, SceneManifest> generate_scene(int width, int height,
                                                  const std::vector<TargetSpec>& specs,
                                                  const Background& bg, double noise_sigma,
                                                  double blur_radius, std::uint64_t seed) {
    num::SplitMix64 rng(seed);
    ImageRgb img = render_background(width, height, bg, rng);

    SceneManifest manifest;
    manifest.width = width;
    manifest.height = height;
    manifest.background = bg;
    manifest.noise_sigma = noise_sigma;
    manifest.blur_radius = blur_radius;
    manifest.seed = seed;

    struct Placed {
        RenderedTarget target;
        int tlx = 0, tly = 0;
        BoundingBox box;
    };
    std::vector<Placed> placed;
    for (const TargetSpec& spec : specs) {
        Placed p;
        p.target = render_target(spec);
        p.tlx = spec.x - p.target.image.width() / 2;
        p.tly = spec.y - p.target.image.height() / 2;

        int min_x = p.target.image.width(), min_y = p.target.image.height();
        int max_x = -1, max_y = -1;
        for (int y = 0; y < p.target.image.height(); ++y) {
            for (int x = 0; x < p.target.image.width(); ++x) {
                if (!p.target.shape_mask.at(x, y) && !p.target.char_mask.at(x, y)) continue;
                min_x = std::min(min_x, x);
                min_y = std::min(min_y, y);
                max_x = std::max(max_x, x);
                max_y = std::max(max_y, y);
            }
        }
        p.box = {p.tlx + min_x, p.tly + min_y, p.tlx + max_x + 1, p.tly + max_y + 1};
        if (p.box.x_min < 0 || p.box.y_min < 0 || p.box.x_max > width || p.box.y_max > height)
            throw std::invalid_argument("generate_scene: target leaves the image");
        for (const Placed& q : placed) {
            const bool apart = p.box.x_max <= q.box.x_min || q.box.x_max <= p.box.x_min ||
                               p.box.y_max <= q.box.y_min || q.box.y_max <= p.box.y_min;
            if (!apart) throw std::invalid_argument("generate_scene: overlapping targets");
        }
        placed.push_back(std::move(p));
    }

    for (std::size_t i = 0; i < placed.size(); ++i) {
        const Placed& p = placed[i];
        for (int y = 0; y < p.target.image.height(); ++y) {
            for (int x = 0; x < p.target.image.width(); ++x) {
                if (!p.target.shape_mask.at(x, y) && !p.target.char_mask.at(x, y)) continue;
                img.at(p.tlx + x, p.tly + y) = p.target.image.at(x, y);
            }
        }
        manifest.targets.push_back({specs[i], p.box});
    }

    gaussian_blur_rgb(img, blur_radius);

    if (noise_sigma > 0.0) {
        const double scale = noise_sigma * 255.0;
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                Rgb8& p = img.at(x, y);
                const auto jitter = [&](std::uint8_t v) {
                    const double nv = v + rng.next_gaussian() * scale;
                    return static_cast<std::uint8_t>(std::clamp(std::lround(nv), 0L, 255L));
                };
                p = {jitter(p.r), jitter(p.g), jitter(p.b)};
            }
        }
    }
    return {std::move(img), std::move(manifest)};
}

std::string manifest_to_json(const SceneManifest& manifest) {
    return manifest_json(manifest).dump(2) + "\n";
}

SceneManifest manifest_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SceneManifest m;
    m.scene_id = j.at("scene").get<std::string>();
    m.image_path = j.at("image").get<std::string>();
    m.width = j.at("width").get<int>();
    m.height = j.at("height").get<int>();
    m.background = background_from_string(j.at("background").get<std::string>());
    m.noise_sigma = j.at("noise_sigma").get<double>();
    m.blur_radius = j.at("blur_radius").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& t : j.at("targets")) {
        GroundTruth gt;
        const auto& box = t.at("box");
        gt.box = {box.at("x_min").get<int>(), box.at("y_min").get<int>(),
                  box.at("x_max").get<int>(), box.at("y_max").get<int>()};
        gt.spec.shape = shape_class_from_string(t.at("shape").get<std::string>());
        gt.spec.shape_color = color_class_from_string(t.at("shape_color").get<std::string>());
        gt.spec.character = t.at("character").get<std::string>().at(0);
        gt.spec.character_color =
            color_class_from_string(t.at("character_color").get<std::string>());
        gt.spec.rotation_deg = t.at("rotation").get<double>();
        gt.spec.size = t.at("size").get<int>();
        gt.spec.x = t.at("x").get<int>();
        gt.spec.y = t.at("y").get<int>();
        m.targets.push_back(std::move(gt));
    }
    return m;
}

SceneManifest load_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return manifest_from_json(text);
}

void DatasetConfig::validate() const {
    if (out_dir.empty()) throw std::invalid_argument("dataset: out_dir is empty");
    if (scene_count < 0) throw std::invalid_argument("dataset: scene_count < 0");
    if (width < 64 || height < 64) throw std::invalid_argument("dataset: frame too small");
    if (min_size < 16 || max_size < min_size)
        throw std::invalid_argument("dataset: bad size range");
    if (targets_per_scene < 0) throw std::invalid_argument("dataset: targets_per_scene < 0");
    if (noise_sigma < 0.0 || blur_radius < 0.0)
        throw std::invalid_argument("dataset: negative noise or blur");
    const int margin = static_cast<int>(std::ceil(0.75 * max_size)) + 2;
    if (targets_per_scene > 0 && (width <= 2 * margin || height <= 2 * margin))
        throw std::invalid_argument("dataset: max_size too large for the frame");
}

std::vector<SceneManifest> generate_dataset(const DatasetConfig& cfg) {
    cfg.validate();
    namespace fs = std::filesystem;
    const fs::path root(cfg.out_dir);
    fs::create_directories(root / "scenes");

    static const Background kBackgrounds[] = {
        {Background::Kind::Checker, {56, 100, 48}, {44, 84, 40}, 24},
        {Background::Kind::Flat, {70, 85, 60}, {0, 0, 0}, 24},
        {Background::Kind::Noise2, {60, 110, 55}, {40, 80, 40}, 24},
        {Background::Kind::Checker, {100, 100, 104}, {88, 88, 92}, 32},
        {Background::Kind::Flat, {120, 110, 90}, {0, 0, 0}, 24},
        {Background::Kind::Noise2, {110, 90, 60}, {90, 70, 50}, 24},
    };
    constexpr int kNumBackgrounds = 6;

    std::vector<SceneManifest> manifests;
    nlohmann::ordered_json index;
    index["seed"] = cfg.seed;
    index["count"] = cfg.scene_count;
    index["scenes"] = nlohmann::ordered_json::array();

    for (int i = 0; i < cfg.scene_count; ++i) {
        const std::uint64_t scene_seed = num::derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        num::SplitMix64 rng(num::derive_seed(scene_seed, 0xa11c));  // placement stream

        std::vector<TargetSpec> specs;
        std::vector<BoundingBox> reserved;
        for (int t = 0; t < cfg.targets_per_scene; ++t) {
            const int idx = i * cfg.targets_per_scene + t;
            TargetSpec spec;
            if (cfg.ensure_coverage) {
                spec.shape = shape_class_from_index(idx % kNumShapeClasses);
                spec.character = char_class_label(idx % kNumCharClasses);
                spec.shape_color = static_cast<ColorClass>(idx % kNumColorClasses);
                int cc = (idx * 7 + 3) % kNumColorClasses;
                if (cc == idx % kNumColorClasses) cc = (cc + 1) % kNumColorClasses;
                spec.character_color = static_cast<ColorClass>(cc);
            } else {
                spec.shape = shape_class_from_index(
                    static_cast<int>(rng.next_below(kNumShapeClasses)));
                spec.character =
                    char_class_label(static_cast<int>(rng.next_below(kNumCharClasses)));
                spec.shape_color =
                    static_cast<ColorClass>(rng.next_below(kNumColorClasses));
                int cc = static_cast<int>(rng.next_below(kNumColorClasses));
                if (cc == static_cast<int>(spec.shape_color)) cc = (cc + 1) % kNumColorClasses;
                spec.character_color = static_cast<ColorClass>(cc);
            }
            spec.size = cfg.min_size +
                        static_cast<int>(rng.next_below(cfg.max_size - cfg.min_size + 1));
            spec.rotation_deg = rng.next_double() * 360.0;

            // Conservative reservation: half the worst-case rotated extent.
            const int c = static_cast<int>(std::ceil(0.75 * spec.size)) + 2;
            bool placed_ok = false;
            for (int attempt = 0; attempt < 100 && !placed_ok; ++attempt) {
                spec.x = c + static_cast<int>(rng.next_below(cfg.width - 2 * c));
                spec.y = c + static_cast<int>(rng.next_below(cfg.height - 2 * c));
                const BoundingBox box{spec.x - c, spec.y - c, spec.x + c, spec.y + c};
                placed_ok = std::none_of(reserved.begin(), reserved.end(), [&](const BoundingBox& r) {
                    return box.x_min < r.x_max && r.x_min < box.x_max && box.y_min < r.y_max &&
                           r.y_min < box.y_max;
                });
                if (placed_ok) reserved.push_back(box);
            }
            if (placed_ok) specs.push_back(spec);
        }

        auto [image, manifest] =
            generate_scene(cfg.width, cfg.height, specs, kBackgrounds[i % kNumBackgrounds],
                           cfg.noise_sigma, cfg.blur_radius, scene_seed);
        manifest.scene_id = scene_id_of(i);
        manifest.image_path = "scenes/" + manifest.scene_id + ".png";

        save_png(image, (root / manifest.image_path).string());
        std::ofstream out(root / "scenes" / (manifest.scene_id + ".json"), std::ios::binary);
        if (!out) throw std::runtime_error("dataset: cannot write manifest");
        out << manifest_to_json(manifest);
        out.close();

        index["scenes"].push_back({{"id", manifest.scene_id},
                                   {"image", manifest.image_path},
                                   {"manifest", "scenes/" + manifest.scene_id + ".json"}});
        manifests.push_back(std::move(manifest));
    }

    std::ofstream out(root / "index.json", std::ios::binary);
    if (!out) throw std::runtime_error("dataset: cannot write index.json");
    out << index.dump(2) << "\n";
    return manifests;
}

}  // namespace aerotarget::synth
