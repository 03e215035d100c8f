#include "aerotarget/fpr.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace aerotarget::fpr {

void FprConfig::validate() const {
    if (max_regions < 1) throw std::invalid_argument("fpr.max_regions must be >= 1");
    if (!(min_top_probability > 0.0) || !(min_top_probability < 1.0))
        throw std::invalid_argument("fpr.min_top_probability must be in (0,1)");
    if (min_mask_fill < 0.0 || min_mask_fill > 1.0)
        throw std::invalid_argument("fpr.min_mask_fill must be in [0,1]");
}

int count_regions(const BinaryMask& mask) {
    const int w = mask.width(), h = mask.height();
    std::vector<char> visited(static_cast<std::size_t>(w) * h, 0);
    std::vector<std::pair<int, int>> stack;
    int regions = 0;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t idx0 = static_cast<std::size_t>(y0) * w + x0;
            if (!mask.at(x0, y0) || visited[idx0]) continue;
            ++regions;
            visited[idx0] = 1;
            stack.emplace_back(x0, y0);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
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
        }
    }
    return regions;
}

std::vector<seg::Segment> filter_by_structure(const std::vector<seg::Segment>& segments,
                                              const FprConfig& cfg, std::int64_t crop_area) {
    cfg.validate();
    std::vector<seg::Segment> kept;
    for (const seg::Segment& s : segments) {
        if (count_regions(s.mask) > cfg.max_regions) continue;
        const double fill = static_cast<double>(s.population) / static_cast<double>(crop_area);
        if (fill < cfg.min_mask_fill) continue;
        kept.push_back(s);
    }
    return kept;
}

bool passes_probability_gate(const ClassDistribution& dist, const FprConfig& cfg) {
    cfg.validate();
    if (dist.probabilities.empty())
        throw std::invalid_argument("probability gate: empty distribution");
    double sum = 0.0;
    for (double p : dist.probabilities) {
        if (p < 0.0 || !std::isfinite(p))
            throw std::invalid_argument("probability gate: negative or non-finite probability");
        sum += p;
    }
    if (std::fabs(sum - 1.0) > 1e-6)
        throw std::invalid_argument("probability gate: distribution does not sum to 1");
    return dist.max_probability() >= cfg.min_top_probability;
}

}  // namespace aerotarget::fpr
