#include "aerotarget/roi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "aerotarget/numerics.hpp"

namespace aerotarget::roi {

void RoiConfig::validate() const {
    if (quantize_k < 2) throw std::invalid_argument("roi.quantize_k must be >= 2");
    if (!(canny_low < canny_high))
        throw std::invalid_argument("roi.canny_low must be < roi.canny_high");
    if (canny_low < 0.0f) throw std::invalid_argument("roi.canny_low must be >= 0");
    if (!(min_box_area > 0.0) || !(min_box_area < max_box_area) || max_box_area > 1.0)
        throw std::invalid_argument("roi box area bounds must satisfy 0 < min < max <= 1");
    if (!(iou_suppress_threshold > 0.0) || !(iou_suppress_threshold < 1.0))
        throw std::invalid_argument("roi.iou_suppress_threshold must be in (0,1)");
    if (suppress_max_rounds < 1) throw std::invalid_argument("roi.suppress_max_rounds must be >= 1");
    if (box_dilation < 0.0) throw std::invalid_argument("roi.box_dilation must be >= 0");
}

ImageRgb quantize_colors(const ImageRgb& img, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("quantize_colors: k must be >= 2");

    // Distinct colors with multiplicities; Lloyd on the weighted color set is
    // exactly Lloyd on the pixel multiset, and weighted k-means++ sampling
    // matches per-pixel sampling in distribution.
    std::unordered_map<std::uint32_t, std::pair<int, double>> palette;  // color -> (index, count)
    std::vector<std::uint32_t> colors;
    std::vector<double> counts;
    for (const Rgb8& p : img.data()) {
        const std::uint32_t key = (std::uint32_t(p.r) << 16) | (std::uint32_t(p.g) << 8) | p.b;
        auto [it, inserted] = palette.try_emplace(key, std::pair<int, double>{0, 0.0});
        if (inserted) {
            it->second.first = static_cast<int>(colors.size());
            colors.push_back(key);
            counts.push_back(0.0);
        }
        counts[it->second.first] += 1.0;
        it->second.second += 1.0;
    }

    const int distinct = static_cast<int>(colors.size());
    const int eff_k = std::min(k, distinct);
    if (eff_k == distinct) {
        return img;  // every color already a center; clustering is the identity
    }

    num::FeatureMatrix data(distinct, 3);
    for (int i = 0; i < distinct; ++i) {
        data.at(i, 0) = static_cast<double>((colors[i] >> 16) & 0xFF);
        data.at(i, 1) = static_cast<double>((colors[i] >> 8) & 0xFF);
        data.at(i, 2) = static_cast<double>(colors[i] & 0xFF);
    }
    const num::KMeansResult km = num::kmeans_fit_weighted(data, counts, eff_k, seed, 25);

    std::vector<Rgb8> center_rgb(eff_k);
    for (int c = 0; c < eff_k; ++c) {
        const auto row = km.centers.row(c);
        center_rgb[c] = {
            static_cast<std::uint8_t>(std::clamp(std::lround(row[0]), 0L, 255L)),
            static_cast<std::uint8_t>(std::clamp(std::lround(row[1]), 0L, 255L)),
            static_cast<std::uint8_t>(std::clamp(std::lround(row[2]), 0L, 255L)),
        };
    }

    ImageRgb out(img.width(), img.height());
    for (std::size_t i = 0; i < img.data().size(); ++i) {
        const Rgb8& p = img.data()[i];
        const std::uint32_t key = (std::uint32_t(p.r) << 16) | (std::uint32_t(p.g) << 8) | p.b;
        out.data()[i] = center_rgb[km.assignments[palette.find(key)->second.first]];
    }
    return out;
}

namespace {

GrayImage gaussian_blur_5x5(const GrayImage& img, float sigma) {
    float kernel[5];
    float sum = 0.0f;
    for (int i = 0; i < 5; ++i) {
        const float d = static_cast<float>(i - 2);
        kernel[i] = std::exp(-d * d / (2.0f * sigma * sigma));
        sum += kernel[i];
    }
    for (float& kv : kernel) kv /= sum;

    const int w = img.width(), h = img.height();
    GrayImage tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int i = -2; i <= 2; ++i)
                acc += kernel[i + 2] * img.at(std::clamp(x + i, 0, w - 1), y);
            tmp.at(x, y) = acc;
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            float acc = 0.0f;
            for (int i = -2; i <= 2; ++i)
                acc += kernel[i + 2] * tmp.at(x, std::clamp(y + i, 0, h - 1));
            out.at(x, y) = acc;
        }
    return out;
}

}  // namespace

CannyStages detect_edges_stages(const GrayImage& gray, float low, float high) {
    if (!(low < high)) throw std::invalid_argument("detect_edges: low must be < high");
    const int w = gray.width(), h = gray.height();
    const GrayImage blurred = gaussian_blur_5x5(gray, 1.4f);

    GrayImage gx(w, h), gy(w, h), mag(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto px = [&](int dx, int dy) {
                return blurred.at(std::clamp(x + dx, 0, w - 1), std::clamp(y + dy, 0, h - 1));
            };
            const float sx = (px(1, -1) + 2.0f * px(1, 0) + px(1, 1)) -
                             (px(-1, -1) + 2.0f * px(-1, 0) + px(-1, 1));
            const float sy = (px(-1, 1) + 2.0f * px(0, 1) + px(1, 1)) -
                             (px(-1, -1) + 2.0f * px(0, -1) + px(1, -1));
            gx.at(x, y) = sx;
            gy.at(x, y) = sy;
            mag.at(x, y) = std::hypot(sx, sy);
        }
    }

    CannyStages st{GrayImage(w, h), BinaryMask(w, h), BinaryMask(w, h), BinaryMask(w, h)};
    st.magnitude = mag;

    // Non-maximum suppression along the quantized gradient direction. Of two
    // equal adjacent peaks the earlier one (toward the negative direction)
    // survives, so clean step edges thin to a single line.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const float m = mag.at(x, y);
            if (m < low) continue;
            const float dx = gx.at(x, y), dy = gy.at(x, y);
            int nx = 1, ny = 0;
            const float adx = std::fabs(dx), ady = std::fabs(dy);
            if (ady > 2.414f * adx) {
                nx = 0;
                ny = 1;  // vertical gradient
            } else if (ady > 0.414f * adx) {
                nx = 1;
                ny = ((dx > 0) == (dy > 0)) ? 1 : -1;  // diagonal
            }
            auto mag_at = [&](int ax, int ay) {
                return mag.in_bounds(ax, ay) ? mag.at(ax, ay) : 0.0f;
            };
            const float before = mag_at(x - nx, y - ny);
            const float after = mag_at(x + nx, y + ny);
            if (m > before && m >= after) {
                if (m >= high)
                    st.nms_strong.set(x, y, true);
                else
                    st.nms_weak.set(x, y, true);
            }
        }
    }

    // hysteresis: BFS from strong pixels through weak neighbors
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (st.nms_strong.at(x, y)) {
                st.edges.set(x, y, true);
                stack.emplace_back(x, y);
            }
    while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                const int ax = cx + dx, ay = cy + dy;
                if (!st.edges.in_bounds(ax, ay) || st.edges.at(ax, ay)) continue;
                if (st.nms_weak.at(ax, ay)) {
                    st.edges.set(ax, ay, true);
                    stack.emplace_back(ax, ay);
                }
            }
    }
    return st;
}

BinaryMask detect_edges(const GrayImage& gray, float low, float high) {
    return detect_edges_stages(gray, low, high).edges;
}

std::vector<BoundingBox> extract_boxes(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<char> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<BoundingBox> boxes;
    std::vector<std::pair<int, int>> stack;

    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t idx0 = static_cast<std::size_t>(y0) * w + x0;
            if (!mask.at(x0, y0) || visited[idx0]) continue;
            visited[idx0] = 1;
            stack.emplace_back(x0, y0);
            int min_x = x0, max_x = x0, min_y = y0, max_y = y0;
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                min_x = std::min(min_x, cx);
                max_x = std::max(max_x, cx);
                min_y = std::min(min_y, cy);
                max_y = std::max(max_y, cy);
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int ax = cx + dx, ay = cy + dy;
                        if (!mask.in_bounds(ax, ay)) continue;
                        const std::size_t idx = static_cast<std::size_t>(ay) * w + ax;
                        if (visited[idx] || !mask.at(ax, ay)) continue;
                        visited[idx] = 1;
                        stack.emplace_back(ax, ay);
                    }
            }
            boxes.push_back({min_x, min_y, max_x + 1, max_y + 1});
        }
    }
    return boxes;
}

std::vector<BoundingBox> filter_boxes(const std::vector<BoundingBox>& boxes,
                                      const RoiConfig& cfg, std::int64_t frame_area) {
    std::vector<BoundingBox> kept;
    for (const BoundingBox& b : boxes) {
        const double frac = static_cast<double>(b.area()) / static_cast<double>(frame_area);
        if (frac >= cfg.min_box_area && frac <= cfg.max_box_area) kept.push_back(b);
    }
    return kept;
}

std::vector<BoundingBox> suppress_redundant(std::vector<BoundingBox> boxes,
                                            double iou_threshold, int max_rounds) {
    if (!(iou_threshold > 0.0) || !(iou_threshold < 1.0))
        throw std::invalid_argument("suppress_redundant: threshold must be in (0,1)");
    std::sort(boxes.begin(), boxes.end(), [](const BoundingBox& a, const BoundingBox& b) {
        if (a.area() != b.area()) return a.area() > b.area();
        if (a.x_min != b.x_min) return a.x_min < b.x_min;
        if (a.y_min != b.y_min) return a.y_min < b.y_min;
        if (a.x_max != b.x_max) return a.x_max < b.x_max;
        return a.y_max < b.y_max;
    });

    for (int round = 0; round < max_rounds; ++round) {
        std::vector<BoundingBox> kept;
        for (const BoundingBox& b : boxes) {
            bool redundant = false;
            for (const BoundingBox& k : kept) {
                if (iou(b, k) > iou_threshold) {
                    redundant = true;
                    break;
                }
            }
            if (!redundant) kept.push_back(b);
        }
        const bool stable = kept.size() == boxes.size();
        boxes = std::move(kept);
        if (stable) break;
    }
    return boxes;
}

BoundingBox dilate_box(const BoundingBox& box, double per_side, int frame_w, int frame_h) {
    const int dx = static_cast<int>(std::lround(per_side * box.width()));
    const int dy = static_cast<int>(std::lround(per_side * box.height()));
    return {std::max(0, box.x_min - dx), std::max(0, box.y_min - dy),
            std::min(frame_w, box.x_max + dx), std::min(frame_h, box.y_max + dy)};
}

std::vector<RegionProposal> propose_regions(const ImageRgb& frame, const RoiConfig& cfg,
                                            std::uint64_t seed) {
    cfg.validate();
    if (frame.width() < 32 || frame.height() < 32) return {};

    const ImageRgb quantized = quantize_colors(frame, cfg.quantize_k, seed);
    const ImageHsv hsv = denoise(rgb_to_hsv(quantized));
    const GrayImage gray = value_channel(hsv);
    const BinaryMask edges = detect_edges(gray, cfg.canny_low, cfg.canny_high);

    std::vector<BoundingBox> boxes = extract_boxes(edges);
    for (BoundingBox& b : boxes) b = dilate_box(b, cfg.box_dilation, frame.width(), frame.height());
    boxes = filter_boxes(boxes, cfg, frame.pixel_count());
    boxes = suppress_redundant(std::move(boxes), cfg.iou_suppress_threshold,
                               cfg.suppress_max_rounds);

    std::vector<RegionProposal> proposals;
    proposals.reserve(boxes.size());
    for (const BoundingBox& b : boxes) proposals.push_back({b, crop(frame, b)});
    return proposals;
}

}  // namespace aerotarget::roi
