#pragma once

#include <string>
#include <vector>

#include "aerotarget/classify.hpp"
#include "aerotarget/fpr.hpp"
#include "aerotarget/image.hpp"
#include "aerotarget/roi.hpp"
#include "aerotarget/segmentation.hpp"

namespace aerotarget::pipe {

struct PipelineConfig {
    roi::RoiConfig roi;
    seg::SegmentationConfig seg;
    fpr::FprConfig fpr;
    std::string assets_path;  // empty: build the classifier assets in-process
    bool debug_masks = false;

    void validate() const;
};

/// Full detection pass over one frame: propose regions, segment each crop,
/// drop structurally implausible masks, then classify what remains. With a
/// non-empty debug_dir, crops and surviving segment masks are dumped there
/// as PNGs named after `stem`.
std::vector<cls::TargetReport> detect_image(const ImageRgb& frame, const PipelineConfig& cfg,
                                            const cls::ClassifierModel& char_model,
                                            const cls::ClassifierModel& shape_model,
                                            const std::string& debug_dir = {},
                                            const std::string& stem = "frame");

/// Per-scene detection results, as serialized by cmd_detect.
struct SceneDetections {
    std::string scene_id;
    std::vector<cls::TargetReport> reports;
};

/// Stable-key-order JSON document for one scene's reports.
std::string detections_to_json(const SceneDetections& detections);
SceneDetections detections_from_json(const std::string& text);
SceneDetections load_detections(const std::string& path);

}  // namespace aerotarget::pipe
