#pragma once

#include <cstdint>
#include <vector>

#include "aerotarget/image.hpp"

namespace aerotarget::roi {

struct RoiConfig {
    int quantize_k = 16;
    float canny_low = 40.0f;
    float canny_high = 120.0f;
    double min_box_area = 1e-4;   // fraction of frame area
    double max_box_area = 0.25;   // fraction of frame area
    double iou_suppress_threshold = 0.5;
    int suppress_max_rounds = 5;
    double box_dilation = 0.10;   // per-side growth before cropping

    void validate() const;  // throws std::invalid_argument on bad values
};

struct RegionProposal {
    BoundingBox box;
    ImageRgb crop;  // taken from the original, un-quantized frame
};

/// K-means color reduction: every pixel is replaced by its cluster center
/// (rounded to 8 bits), so the output has at most k distinct colors. k is
/// clamped to the number of distinct input colors.
ImageRgb quantize_colors(const ImageRgb& img, int k, std::uint64_t seed);

/// Canny edge detection: 5x5 Gaussian blur (sigma 1.4), Sobel gradients,
/// non-maximum suppression, double-threshold hysteresis.
BinaryMask detect_edges(const GrayImage& gray, float low, float high);

/// Intermediate Canny stages, for inspection and oracle tests.
struct CannyStages {
    GrayImage magnitude;
    BinaryMask nms_strong;  // NMS survivors at or above `high`
    BinaryMask nms_weak;    // NMS survivors in [low, high)
    BinaryMask edges;       // after hysteresis
};
CannyStages detect_edges_stages(const GrayImage& gray, float low, float high);

/// One tight box per 8-connected component of foreground pixels, in
/// first-encounter raster order.
std::vector<BoundingBox> extract_boxes(const BinaryMask& edges);

std::vector<BoundingBox> filter_boxes(const std::vector<BoundingBox>& boxes,
                                      const RoiConfig& cfg, std::int64_t frame_area);

/// Greedy IOU suppression, largest boxes first, iterated to a fixpoint or
/// max_rounds. Output pairwise IOU never exceeds the threshold.
std::vector<BoundingBox> suppress_redundant(std::vector<BoundingBox> boxes,
                                            double iou_threshold, int max_rounds);

BoundingBox dilate_box(const BoundingBox& box, double per_side, int frame_w, int frame_h);

/// Full detector: quantize, HSV + denoise, value-channel edges, boxes,
/// dilation, size filter, IOU suppression. Crops come from the original frame.
/// Frames smaller than 32x32 yield an empty list.
std::vector<RegionProposal> propose_regions(const ImageRgb& frame, const RoiConfig& cfg,
                                            std::uint64_t seed);

}  // namespace aerotarget::roi
