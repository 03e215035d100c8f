#pragma once

#include <cstdint>
#include <vector>

#include "aerotarget/image.hpp"
#include "aerotarget/labels.hpp"
#include "aerotarget/segmentation.hpp"

namespace aerotarget::fpr {

struct FprConfig {
    int max_regions = 2;              // structural stage: discard masks with more regions
    double min_top_probability = 0.35;  // statistical stage: out-of-distribution gate
    double min_mask_fill = 0.01;      // fraction of crop area a mask must occupy

    void validate() const;
};

/// Number of 8-connected foreground components.
int count_regions(const BinaryMask& mask);

/// Structural stage: keeps segments whose region count does not exceed
/// max_regions and whose population covers at least min_mask_fill of the crop.
/// Input order is preserved.
std::vector<seg::Segment> filter_by_structure(const std::vector<seg::Segment>& segments,
                                              const FprConfig& cfg, std::int64_t crop_area);

/// Statistical stage: true iff the distribution's top probability reaches
/// min_top_probability (closed bound). Malformed distributions throw.
bool passes_probability_gate(const ClassDistribution& dist, const FprConfig& cfg);

}  // namespace aerotarget::fpr
