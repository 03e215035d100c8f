#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aerotarget/pipeline.hpp"
#include "aerotarget/synthgen.hpp"

namespace aerotarget::eval {

inline constexpr double kMatchIouThreshold = 0.3;

/// Ground-truth label -> (predicted label -> count), over matched detections.
using ConfusionTable = std::map<std::string, std::map<std::string, std::int64_t>>;

struct EvalSummary {
    std::int64_t total_targets = 0;
    std::int64_t matched_targets = 0;
    std::int64_t total_detections = 0;
    std::int64_t unmatched_detections = 0;

    double detected_fraction = 0.0;
    std::optional<double> char_accuracy_on_detected;   // undefined with no matches
    std::optional<double> shape_accuracy_on_detected;  // undefined with no matches
    std::optional<double> false_positive_fraction;     // undefined with no detections

    ConfusionTable char_confusion;
    ConfusionTable shape_confusion;
};

/// Matches detections to ground truth per scene, greedily by descending IOU
/// with a fixed threshold. Scene id sets must coincide; missing ids on either
/// side throw with the ids listed.
EvalSummary evaluate(const std::vector<synth::SceneManifest>& manifests,
                     const std::vector<pipe::SceneDetections>& detections,
                     double iou_threshold = kMatchIouThreshold);

/// Stable-key-order JSON rendering; undefined metrics serialize as null.
std::string summary_to_json(const EvalSummary& summary);

}  // namespace aerotarget::eval
