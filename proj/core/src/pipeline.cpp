#include "aerotarget/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "aerotarget/imageio.hpp"

namespace aerotarget::pipe {

namespace {

// Crops below the segmentation minimum carry no classifiable structure.
constexpr int kMinCropSide = 8;

void dump_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    ImageRgb img(mask.width(), mask.height(), Rgb8{0, 0, 0});
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.at(x, y)) img.at(x, y) = Rgb8{255, 255, 255};
    save_png(img, path);
}

}  // namespace

void PipelineConfig::validate() const {
    roi.validate();
    seg.validate();
    fpr.validate();
}

std::vector<cls::TargetReport> detect_image(const ImageRgb& frame, const PipelineConfig& cfg,
                                            const cls::ClassifierModel& char_model,
                                            const cls::ClassifierModel& shape_model,
                                            const std::string& debug_dir,
                                            const std::string& stem) {
    cfg.validate();
    const std::vector<roi::RegionProposal> proposals =
        roi::propose_regions(frame, cfg.roi, cfg.seg.seed);

    std::vector<cls::TargetReport> reports;
    for (std::size_t p = 0; p < proposals.size(); ++p) {
        const roi::RegionProposal& proposal = proposals[p];
        if (proposal.crop.width() < kMinCropSide || proposal.crop.height() < kMinCropSide)
            continue;

        const std::vector<seg::Segment> segments = seg::segment(proposal.crop, cfg.seg);
        const std::vector<seg::Segment> kept =
            fpr::filter_by_structure(segments, cfg.fpr, proposal.crop.pixel_count());

        if (!debug_dir.empty()) {
            const std::filesystem::path dir(debug_dir);
            std::filesystem::create_directories(dir);
            const std::string prefix = stem + "_p" + std::to_string(p);
            save_png(proposal.crop, dir / (prefix + "_crop.png"));
            for (std::size_t s = 0; s < kept.size(); ++s)
                dump_mask(kept[s].mask, dir / (prefix + "_seg" + std::to_string(s) + ".png"));
        }

        if (auto report = cls::classify_target(proposal.box, kept, char_model, shape_model, cfg.fpr))
            reports.push_back(*report);
    }
    return reports;
}

std::string detections_to_json(const SceneDetections& detections) {
    nlohmann::ordered_json j;
    j["scene"] = detections.scene_id;
    j["targets"] = nlohmann::ordered_json::array();
    for (const cls::TargetReport& r : detections.reports) {
        nlohmann::ordered_json t;
        t["box"] = {{"x_min", r.box.x_min},
                    {"y_min", r.box.y_min},
                    {"x_max", r.box.x_max},
                    {"y_max", r.box.y_max}};
        t["character"] = std::string(1, r.character);
        t["character_color"] = std::string(to_string(r.character_color));
        t["shape"] = std::string(to_string(r.shape));
        t["shape_color"] = std::string(to_string(r.shape_color));
        t["char_confidence"] = r.char_confidence;
        t["shape_confidence"] = r.shape_confidence;
        j["targets"].push_back(std::move(t));
    }
    return j.dump(2) + "\n";
}

SceneDetections detections_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    SceneDetections out;
    out.scene_id = j.at("scene").get<std::string>();
    for (const auto& t : j.at("targets")) {
        cls::TargetReport r;
        const auto& box = t.at("box");
        r.box = {box.at("x_min").get<int>(), box.at("y_min").get<int>(),
                 box.at("x_max").get<int>(), box.at("y_max").get<int>()};
        r.character = t.at("character").get<std::string>().at(0);
        r.character_color = color_class_from_string(t.at("character_color").get<std::string>());
        r.shape = shape_class_from_string(t.at("shape").get<std::string>());
        r.shape_color = color_class_from_string(t.at("shape_color").get<std::string>());
        r.char_confidence = t.at("char_confidence").get<double>();
        r.shape_confidence = t.at("shape_confidence").get<double>();
        out.reports.push_back(r);
    }
    return out;
}

SceneDetections load_detections(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open detections: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return detections_from_json(text);
}

}  // namespace aerotarget::pipe
