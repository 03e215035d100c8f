#include "aerotarget/eval.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace aerotarget::eval {

namespace {

struct Candidate {
    double overlap = 0.0;
    std::size_t det = 0;
    std::size_t gt = 0;
};

}  // namespace

EvalSummary evaluate(const std::vector<synth::SceneManifest>& manifests,
                     const std::vector<pipe::SceneDetections>& detections,
                     double iou_threshold) {
    std::map<std::string, const pipe::SceneDetections*> by_id;
    for (const pipe::SceneDetections& d : detections) by_id[d.scene_id] = &d;

    std::set<std::string> manifest_ids;
    std::vector<std::string> missing;
    for (const synth::SceneManifest& m : manifests) {
        manifest_ids.insert(m.scene_id);
        if (!by_id.count(m.scene_id)) missing.push_back(m.scene_id);
    }
    for (const pipe::SceneDetections& d : detections)
        if (!manifest_ids.count(d.scene_id)) missing.push_back(d.scene_id);
    if (!missing.empty()) {
        std::string list;
        for (const std::string& id : missing) list += (list.empty() ? "" : ", ") + id;
        throw std::invalid_argument("eval: scene ids do not match, missing: " + list);
    }

    EvalSummary s;
    std::int64_t char_correct = 0, shape_correct = 0;
    for (const synth::SceneManifest& m : manifests) {
        const pipe::SceneDetections& dets = *by_id.at(m.scene_id);
        s.total_targets += static_cast<std::int64_t>(m.targets.size());
        s.total_detections += static_cast<std::int64_t>(dets.reports.size());

        std::vector<Candidate> candidates;
        for (std::size_t d = 0; d < dets.reports.size(); ++d) {
            for (std::size_t g = 0; g < m.targets.size(); ++g) {
                const double overlap = iou(dets.reports[d].box, m.targets[g].box);
                if (overlap >= iou_threshold) candidates.push_back({overlap, d, g});
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.overlap != b.overlap) return a.overlap > b.overlap;
            if (a.det != b.det) return a.det < b.det;
            return a.gt < b.gt;
        });

        std::vector<char> det_used(dets.reports.size(), 0), gt_used(m.targets.size(), 0);
        for (const Candidate& c : candidates) {
            if (det_used[c.det] || gt_used[c.gt]) continue;
            det_used[c.det] = gt_used[c.gt] = 1;
            ++s.matched_targets;

            const cls::TargetReport& r = dets.reports[c.det];
            const synth::TargetSpec& gt = m.targets[c.gt].spec;
            const std::string gt_char(1, gt.character);
            const std::string pred_char(1, r.character);
            ++s.char_confusion[gt_char][pred_char];
            ++s.shape_confusion[std::string(to_string(gt.shape))][std::string(to_string(r.shape))];
            if (r.character == gt.character) ++char_correct;
            if (r.shape == gt.shape) ++shape_correct;
        }
        for (std::size_t d = 0; d < dets.reports.size(); ++d)
            if (!det_used[d]) ++s.unmatched_detections;
    }

    s.detected_fraction =
        s.total_targets > 0 ? static_cast<double>(s.matched_targets) / s.total_targets : 0.0;
    if (s.matched_targets > 0) {
        s.char_accuracy_on_detected = static_cast<double>(char_correct) / s.matched_targets;
        s.shape_accuracy_on_detected = static_cast<double>(shape_correct) / s.matched_targets;
    }
    if (s.total_detections > 0)
        s.false_positive_fraction =
            static_cast<double>(s.unmatched_detections) / s.total_detections;
    return s;
}

std::string summary_to_json(const EvalSummary& summary) {
    nlohmann::ordered_json j;
    j["total_targets"] = summary.total_targets;
    j["matched_targets"] = summary.matched_targets;
    j["total_detections"] = summary.total_detections;
    j["unmatched_detections"] = summary.unmatched_detections;
    j["detected_fraction"] = summary.detected_fraction;
    j["char_accuracy_on_detected"] =
        summary.char_accuracy_on_detected ? nlohmann::ordered_json(*summary.char_accuracy_on_detected)
                                          : nlohmann::ordered_json(nullptr);
    j["shape_accuracy_on_detected"] =
        summary.shape_accuracy_on_detected
            ? nlohmann::ordered_json(*summary.shape_accuracy_on_detected)
            : nlohmann::ordered_json(nullptr);
    j["false_positive_fraction"] =
        summary.false_positive_fraction ? nlohmann::ordered_json(*summary.false_positive_fraction)
                                        : nlohmann::ordered_json(nullptr);
    j["char_confusion"] = summary.char_confusion;
    j["shape_confusion"] = summary.shape_confusion;
    return j.dump(2) + "\n";
}

}  // namespace aerotarget::eval
