#include "aerotarget/classify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace aerotarget::cls {

namespace {

constexpr double kPi = std::numbers::pi;

ClassDistribution softmax_distribution(std::vector<std::string> labels,
                                       const std::vector<double>& scores, double temperature) {
    ClassDistribution dist;
    dist.labels = std::move(labels);
    dist.probabilities.resize(scores.size());
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double e = std::exp((scores[i] - top) / temperature);
        dist.probabilities[i] = e;
        total += e;
    }
    for (double& p : dist.probabilities) p /= total;
    return dist;
}

std::vector<std::string> char_label_strings() {
    std::vector<std::string> labels;
    labels.reserve(kNumCharClasses);
    for (int i = 0; i < kNumCharClasses; ++i) labels.emplace_back(1, char_class_label(i));
    return labels;
}

std::vector<std::string> shape_label_strings() {
    std::vector<std::string> labels;
    labels.reserve(kNumShapeClasses);
    for (int i = 0; i < kNumShapeClasses; ++i)
        labels.emplace_back(to_string(shape_class_from_index(i)));
    return labels;
}

}  // namespace

BinaryMask normalize_mask(const BinaryMask& mask) {
    int min_x = mask.width(), min_y = mask.height(), max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    if (max_x < 0) throw std::invalid_argument("normalize_mask: empty mask");

    const int w = max_x - min_x + 1;
    const int h = max_y - min_y + 1;
    const int side = std::max(w, h);
    const int off_x = (side - w) / 2;
    const int off_y = (side - h) / 2;

    BinaryMask out(kTemplateSide, kTemplateSide);
    for (int y = 0; y < kTemplateSide; ++y) {
        for (int x = 0; x < kTemplateSide; ++x) {
            const int sx = static_cast<int>((x + 0.5) * side / kTemplateSide) - off_x;
            const int sy = static_cast<int>((y + 0.5) * side / kTemplateSide) - off_y;
            if (sx < 0 || sx >= w || sy < 0 || sy >= h) continue;
            out.set(x, y, mask.at(min_x + sx, min_y + sy) != 0);
        }
    }
    return out;
}

BinaryMask superimpose(const BinaryMask& char_mask, const BinaryMask& other_mask) {
    if (char_mask.width() != other_mask.width() || char_mask.height() != other_mask.height())
        throw std::invalid_argument("superimpose: mask dimensions differ");
    BinaryMask out = char_mask;
    auto& dst = out.data();
    const auto& src = other_mask.data();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    return out;
}

ColorClass classify_color(const HlsPixel& center_hls) {
    const Rgb8 rgb = hls_to_rgb(center_hls);
    int best = 0;
    int best_dist = std::numeric_limits<int>::max();
    for (int c = 0; c < kNumColorClasses; ++c) {
        const Rgb8 ref = reference_rgb(static_cast<ColorClass>(c));
        const int d = std::abs(int(rgb.r) - int(ref.r)) + std::abs(int(rgb.g) - int(ref.g)) +
                      std::abs(int(rgb.b) - int(ref.b));
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return static_cast<ColorClass>(best);
}

TemplateBits pack_template(const BinaryMask& normalized) {
    if (normalized.width() != kTemplateSide || normalized.height() != kTemplateSide)
        throw std::invalid_argument("pack_template: mask is not 32x32");
    TemplateBits bits{};
    const auto& data = normalized.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (data[i]) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    }
    return bits;
}

BinaryMask unpack_template(const TemplateBits& bits) {
    BinaryMask mask(kTemplateSide, kTemplateSide);
    auto& data = mask.data();
    for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = (bits[i / 64] >> (i % 64)) & 1;
    }
    return mask;
}

double jaccard_agreement(const TemplateBits& a, const TemplateBits& b) {
    int inter = 0, uni = 0;
    for (int w = 0; w < kTemplateWords; ++w) {
        inter += std::popcount(a[w] & b[w]);
        uni += std::popcount(a[w] | b[w]);
    }
    return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

CharacterTemplateModel::CharacterTemplateModel(CharacterTemplateBank bank)
    : bank_(std::make_shared<const CharacterTemplateBank>(std::move(bank))),
      labels_(char_label_strings()) {}

ClassDistribution CharacterTemplateModel::predict(const BinaryMask& mask) const {
    const TemplateBits bits = pack_template(normalize_mask(mask));
    std::vector<double> scores(kNumCharClasses, 0.0);
    for (int c = 0; c < kNumCharClasses; ++c) {
        double best = 0.0;
        for (int r = 0; r < kTemplateRotations; ++r)
            best = std::max(best, jaccard_agreement(bits, bank_->templates[c][r]));
        scores[c] = best;
    }
    return softmax_distribution(labels_, scores, kCharSoftmaxTemperature);
}

// ---------------------------------------------------------------------------
// Shape features.

namespace {

struct Pt {
    int x = 0, y = 0;
    bool operator==(const Pt&) const = default;
};

double dist(const Pt& a, const Pt& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

double point_segment_dist(const Pt& p, const Pt& a, const Pt& b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double wx = p.x - a.x, wy = p.y - a.y;
    const double len_sq = vx * vx + vy * vy;
    double t = len_sq > 0.0 ? (wx * vx + wy * vy) / len_sq : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double dx = wx - t * vx, dy = wy - t * vy;
    return std::sqrt(dx * dx + dy * dy);
}

struct ComponentInfo {
    BinaryMask mask;  // input dimensions, largest component only
    std::int64_t population = 0;
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;  // inclusive extents
    Pt start;                                        // first pixel in raster order
};

// Largest 8-connected component; ties go to the first in raster order.
ComponentInfo largest_component(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<std::int32_t> label(static_cast<std::size_t>(w) * h, -1);
    std::vector<std::int64_t> sizes;
    std::vector<Pt> seeds;
    std::vector<Pt> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y) || label[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const auto id = static_cast<std::int32_t>(sizes.size());
            std::int64_t count = 0;
            queue.clear();
            queue.push_back({x, y});
            label[static_cast<std::size_t>(y) * w + x] = id;
            while (!queue.empty()) {
                const Pt p = queue.back();
                queue.pop_back();
                ++count;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = p.x + dx, ny = p.y + dy;
                        if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) continue;
                        auto& cell = label[static_cast<std::size_t>(ny) * w + nx];
                        if (cell >= 0) continue;
                        cell = id;
                        queue.push_back({nx, ny});
                    }
                }
            }
            sizes.push_back(count);
            seeds.push_back({x, y});
        }
    }
    if (sizes.empty()) throw std::invalid_argument("shape_features: empty mask");

    std::int32_t best = 0;
    for (std::int32_t id = 1; id < static_cast<std::int32_t>(sizes.size()); ++id)
        if (sizes[id] > sizes[best]) best = id;

    ComponentInfo info;
    info.mask = BinaryMask(w, h);
    info.population = sizes[best];
    info.min_x = w;
    info.min_y = h;
    info.max_x = -1;
    info.max_y = -1;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (label[static_cast<std::size_t>(y) * w + x] != best) continue;
            info.mask.set(x, y, true);
            info.min_x = std::min(info.min_x, x);
            info.min_y = std::min(info.min_y, y);
            info.max_x = std::max(info.max_x, x);
            info.max_y = std::max(info.max_y, y);
        }
    }
    info.start = seeds[best];
    return info;
}

// Moore-neighbor boundary trace from the component's raster-first pixel.
// Revisits are possible across one-pixel necks; that is correct for the
// perimeter. Stops when the initial (pixel, backtrack) state recurs.
std::vector<Pt> trace_boundary(const BinaryMask& comp, Pt start) {
    static constexpr int DX[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
    static constexpr int DY[8] = {0, -1, -1, -1, 0, 1, 1, 1};
    const auto fg = [&](int x, int y) { return comp.in_bounds(x, y) && comp.at(x, y) != 0; };

    std::vector<Pt> contour{start};
    Pt p = start;
    int back = 0;  // ring index of the backtrack cell; west of the start is background
    const std::int64_t cap = 8 * comp.population() + 8;
    for (std::int64_t step = 0; step < cap; ++step) {
        int found = -1;
        for (int k = 1; k <= 8; ++k) {
            const int idx = (back + k) % 8;
            if (fg(p.x + DX[idx], p.y + DY[idx])) {
                found = idx;
                break;
            }
        }
        if (found < 0) break;  // isolated pixel

        const Pt prev_cell{p.x + DX[(found + 7) % 8], p.y + DY[(found + 7) % 8]};
        const Pt next{p.x + DX[found], p.y + DY[found]};
        int next_back = -1;
        for (int idx = 0; idx < 8; ++idx) {
            if (next.x + DX[idx] == prev_cell.x && next.y + DY[idx] == prev_cell.y) {
                next_back = idx;
                break;
            }
        }
        p = next;
        back = next_back;
        if (p == start && back == 0) break;
        contour.push_back(p);
    }
    return contour;
}

double chain_length(const std::vector<Pt>& contour) {
    if (contour.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < contour.size(); ++i) len += dist(contour[i], contour[i + 1]);
    len += dist(contour.back(), contour.front());
    return len;
}

void dp_open(const std::vector<Pt>& pts, std::size_t lo, std::size_t hi, double eps,
             std::vector<char>& keep) {
    if (hi <= lo + 1) return;
    double dmax = -1.0;
    std::size_t split = lo;
    for (std::size_t k = lo + 1; k < hi; ++k) {
        const double d = point_segment_dist(pts[k], pts[lo], pts[hi]);
        if (d > dmax) {
            dmax = d;
            split = k;
        }
    }
    if (dmax <= eps) return;
    keep[split] = 1;
    dp_open(pts, lo, split, eps, keep);
    dp_open(pts, split, hi, eps, keep);
}

// Ramer-Douglas-Peucker on a closed contour, anchored at point 0 and the
// point farthest from it.
std::vector<Pt> simplify_closed(const std::vector<Pt>& contour, double eps) {
    if (contour.size() < 3) return contour;
    std::size_t far = 0;
    double dmax = 0.0;
    for (std::size_t i = 1; i < contour.size(); ++i) {
        const double d = dist(contour[0], contour[i]);
        if (d > dmax) {
            dmax = d;
            far = i;
        }
    }
    if (far == 0) return {contour[0]};

    std::vector<Pt> ring(contour.begin(), contour.end());
    ring.push_back(contour[0]);  // close the loop
    std::vector<char> keep(ring.size(), 0);
    keep[0] = keep[far] = 1;
    dp_open(ring, 0, far, eps, keep);
    dp_open(ring, far, ring.size() - 1, eps, keep);

    std::vector<Pt> poly;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        if (keep[i]) poly.push_back(ring[i]);
    return poly;
}

double polygon_perimeter(const std::vector<Pt>& poly) {
    if (poly.size() < 2) return 0.0;
    double len = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) len += dist(poly[i], poly[(i + 1) % poly.size()]);
    return len;
}

double polygon_area(const std::vector<Pt>& poly) {
    if (poly.size() < 3) return 0.0;
    std::int64_t twice = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt& a = poly[i];
        const Pt& b = poly[(i + 1) % poly.size()];
        twice += std::int64_t(a.x) * b.y - std::int64_t(b.x) * a.y;
    }
    return std::abs(twice) / 2.0;
}

// Monotone-chain convex hull; collinear points dropped.
std::vector<Pt> convex_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const Pt& a, const Pt& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    const auto cross = [](const Pt& o, const Pt& a, const Pt& b) {
        return std::int64_t(a.x - o.x) * (b.y - o.y) - std::int64_t(a.y - o.y) * (b.x - o.x);
    };
    std::vector<Pt> hull(2 * pts.size());
    std::size_t k = 0;
    for (const Pt& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    const std::size_t lower = k + 1;
    for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

// Lattice points covered by the hull (Pick's theorem: A + B/2 + 1). Component
// pixel centers are a subset of these, so solidity stays <= 1.
double hull_covered_area(const std::vector<Pt>& hull) {
    if (hull.empty()) return 0.0;
    if (hull.size() == 1) return 1.0;
    std::int64_t boundary = 0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const Pt& a = hull[i];
        const Pt& b = hull[(i + 1) % hull.size()];
        boundary += std::gcd(std::abs(a.x - b.x), std::abs(a.y - b.y));
    }
    return polygon_area(hull) + boundary / 2.0 + 1.0;
}

}  // namespace

ShapeFeatureVec shape_features(const BinaryMask& mask) {
    const ComponentInfo comp = largest_component(mask);
    const std::vector<Pt> contour = trace_boundary(comp.mask, comp.start);

    ShapeFeatureVec f{};

    // Circularity from a lightly smoothed outline polygon; the smoothing
    // removes the pixel staircase so a disk measures close to 1.
    const std::vector<Pt> outline = simplify_closed(contour, 1.5);
    const double poly_p = polygon_perimeter(outline);
    const double poly_a = polygon_area(outline);
    if (poly_p > 0.0 && poly_a > 0.0) {
        f[kFeatCircularity] = std::min(1.0, 4.0 * kPi * poly_a / (poly_p * poly_p));
    } else {
        const double chain = chain_length(contour);
        f[kFeatCircularity] =
            chain > 0.0 ? std::min(1.0, 4.0 * kPi * comp.population / (chain * chain)) : 1.0;
    }

    const double hull_area = hull_covered_area(convex_hull(contour));
    f[kFeatSolidity] = hull_area > 0.0 ? comp.population / hull_area : 1.0;

    const double vertex_eps = std::max(1.0, 0.02 * chain_length(contour));
    f[kFeatVertexCount] = static_cast<double>(simplify_closed(contour, vertex_eps).size());

    const std::int64_t extent = std::int64_t(comp.max_x - comp.min_x + 1) *
                                std::int64_t(comp.max_y - comp.min_y + 1);
    f[kFeatBoxFill] = static_cast<double>(comp.population) / extent;

    // Rotation-free aspect from central second moments; the 1/12 term is the
    // moment of a unit pixel, keeping thin shapes away from zero.
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (int y = comp.min_y; y <= comp.max_y; ++y) {
        for (int x = comp.min_x; x <= comp.max_x; ++x) {
            if (!comp.mask.at(x, y)) continue;
            sx += x;
            sy += y;
            sxx += double(x) * x;
            syy += double(y) * y;
            sxy += double(x) * y;
        }
    }
    const double n = static_cast<double>(comp.population);
    const double mxx = sxx / n - (sx / n) * (sx / n) + 1.0 / 12.0;
    const double myy = syy / n - (sy / n) * (sy / n) + 1.0 / 12.0;
    const double mxy = sxy / n - (sx / n) * (sy / n);
    const double tr = mxx + myy;
    const double det = std::sqrt(std::max(0.0, (mxx - myy) * (mxx - myy) + 4.0 * mxy * mxy));
    const double lmax = (tr + det) / 2.0;
    const double lmin = std::max(0.0, (tr - det) / 2.0);
    f[kFeatAspect] = lmax > 0.0 ? std::sqrt(lmin / lmax) : 1.0;

    return f;
}

ShapeFeatureModel::ShapeFeatureModel(ShapeCentroidTable table)
    : table_(table), labels_(shape_label_strings()) {}

ClassDistribution ShapeFeatureModel::predict(const BinaryMask& mask) const {
    const ShapeFeatureVec f = shape_features(mask);
    std::vector<double> scores(kNumShapeClasses, 0.0);
    for (int c = 0; c < kNumShapeClasses; ++c) {
        double sum = 0.0;
        for (int i = 0; i < kNumShapeFeatures; ++i) {
            const double scale = std::max(table_.scales[c][i], 1e-12);
            const double d = (f[i] - table_.centroids[c][i]) / scale;
            sum += d * d;
        }
        scores[c] = -std::sqrt(sum);
    }
    return softmax_distribution(labels_, scores, kShapeSoftmaxTemperature);
}

ClassDistribution classify_character(const BinaryMask& mask, const ClassifierModel& model) {
    return model.predict(mask);
}

ClassDistribution classify_shape(const BinaryMask& mask, const ClassifierModel& model) {
    return model.predict(mask);
}

std::optional<TargetReport> classify_target(const BoundingBox& box,
                                            const std::vector<seg::Segment>& segments,
                                            const ClassifierModel& char_model,
                                            const ClassifierModel& shape_model,
                                            const fpr::FprConfig& cfg) {
    if (segments.empty()) return std::nullopt;

    int char_idx = -1;
    ClassDistribution char_dist;
    double char_top = -1.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].mask.population() == 0) continue;
        ClassDistribution dist = char_model.predict(segments[i].mask);
        if (!fpr::passes_probability_gate(dist, cfg)) continue;
        const double top = dist.max_probability();
        if (top > char_top) {
            char_top = top;
            char_idx = static_cast<int>(i);
            char_dist = std::move(dist);
        }
    }
    if (char_idx < 0) return std::nullopt;
    const BinaryMask& char_mask = segments[char_idx].mask;

    int shape_idx = -1;
    ClassDistribution shape_dist;
    double shape_top = -1.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (static_cast<int>(i) == char_idx || segments[i].mask.population() == 0) continue;
        ClassDistribution dist = shape_model.predict(superimpose(char_mask, segments[i].mask));
        if (!fpr::passes_probability_gate(dist, cfg)) continue;
        const double top = dist.max_probability();
        if (top > shape_top) {
            shape_top = top;
            shape_idx = static_cast<int>(i);
            shape_dist = std::move(dist);
        }
    }
    if (shape_idx < 0) return std::nullopt;

    TargetReport report;
    report.box = box;
    report.character = char_dist.argmax_label()[0];
    report.character_color = classify_color(segments[char_idx].center_hls);
    report.shape = shape_class_from_string(shape_dist.argmax_label());
    report.shape_color = classify_color(segments[shape_idx].center_hls);
    report.char_confidence = char_top;
    report.shape_confidence = shape_top;
    return report;
}

}  // namespace aerotarget::cls
