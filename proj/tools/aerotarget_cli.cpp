// Command-line front end: detect targets in images, generate synthetic
// datasets, rebuild classifier assets, and evaluate detections against
// ground-truth manifests.
//
// Exit codes: 0 success, 1 partial or total processing failure, 2 invalid
// configuration or usage.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "aerotarget/assets.hpp"
#include "aerotarget/config.hpp"
#include "aerotarget/eval.hpp"
#include "aerotarget/imageio.hpp"
#include "aerotarget/pipeline.hpp"
#include "aerotarget/synthgen.hpp"

namespace fs = std::filesystem;
using namespace aerotarget;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void write_file_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

bool has_image_extension(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// Directories expand to their image files; plain paths pass through so a
// missing file surfaces as a per-file error, not a usage error.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const std::string& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && has_image_extension(entry.path()))
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else {
            files.push_back(p);
        }
    }
    return files;
}

pipe::PipelineConfig resolve_config(const std::string& config_flag) {
    std::string path = config_flag;
    if (path.empty()) {
        if (const char* env = std::getenv("AEROTARGET_CONFIG")) path = env;
    }
    if (path.empty()) return {};
    return cfg::load_config(path);
}

struct DetectOptions {
    std::vector<std::string> inputs;
    std::string config_path;
    std::string out_dir = "detections";
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    bool debug_masks = false;
};

int run_detect(const DetectOptions& opt) {
    pipe::PipelineConfig config = resolve_config(opt.config_path);
    if (opt.seed) config.seg.seed = *opt.seed;
    if (opt.debug_masks) config.debug_masks = true;
    config.validate();

    const assets::ClassifierAssets bundle = config.assets_path.empty()
                                                ? assets::build_assets(0)
                                                : assets::load_assets(config.assets_path);
    const cls::CharacterTemplateModel char_model(bundle.char_bank);
    const cls::ShapeFeatureModel shape_model(bundle.shape_table);

    const std::vector<fs::path> files = expand_inputs(opt.inputs);
    if (files.empty()) {
        std::cerr << "detect: no input images\n";
        return kExitUsage;
    }
    fs::create_directories(opt.out_dir);
    const std::string debug_dir =
        config.debug_masks ? (fs::path(opt.out_dir) / "debug").string() : std::string{};

    std::atomic<std::size_t> next{0};
    std::atomic<int> failures{0};
    std::mutex log_mutex;
    const int jobs = std::max(1, opt.jobs);

    const auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= files.size()) return;
            const fs::path& file = files[i];
            const std::string stem = file.stem().string();
            try {
                const ImageRgb frame = load_image(file);
                pipe::SceneDetections result;
                result.scene_id = stem;
                result.reports =
                    pipe::detect_image(frame, config, char_model, shape_model, debug_dir, stem);
                write_file_atomic(fs::path(opt.out_dir) / (stem + ".json"),
                                  pipe::detections_to_json(result));
            } catch (const std::exception& e) {
                failures.fetch_add(1);
                const std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "detect: " << file.string() << ": " << e.what() << "\n";
            }
        }
    };

    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    return failures.load() == static_cast<int>(files.size()) ? kExitFailure : kExitOk;
}

std::vector<synth::SceneManifest> load_manifest_dir(const fs::path& dir) {
    std::vector<fs::path> files;
    const fs::path scenes = fs::is_directory(dir / "scenes") ? dir / "scenes" : dir;
    for (const auto& entry : fs::directory_iterator(scenes))
        if (entry.is_regular_file() && entry.path().extension() == ".json" &&
            entry.path().filename() != "index.json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<synth::SceneManifest> manifests;
    for (const fs::path& f : files) manifests.push_back(synth::load_manifest(f.string()));
    return manifests;
}

int run_eval(const std::string& detections_dir, const std::string& manifests_dir,
             const std::string& out_path) {
    std::vector<fs::path> det_files;
    for (const auto& entry : fs::directory_iterator(detections_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            det_files.push_back(entry.path());
    std::sort(det_files.begin(), det_files.end());

    std::vector<pipe::SceneDetections> detections;
    for (const fs::path& f : det_files) detections.push_back(pipe::load_detections(f.string()));
    const std::vector<synth::SceneManifest> manifests = load_manifest_dir(manifests_dir);

    const eval::EvalSummary summary = eval::evaluate(manifests, detections);
    const std::string text = eval::summary_to_json(summary);
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file_atomic(out_path, text);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"character-on-shape aerial target detection toolkit"};
    app.require_subcommand(1);

    DetectOptions detect_opt;
    CLI::App* detect = app.add_subcommand("detect", "detect targets in images");
    detect->add_option("inputs", detect_opt.inputs, "image files or directories")->required();
    detect->add_option("--config", detect_opt.config_path,
                       "pipeline config file (or env AEROTARGET_CONFIG)");
    detect->add_option("--out", detect_opt.out_dir, "output directory for detection JSON");
    detect->add_option("--jobs", detect_opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    std::uint64_t detect_seed = 0;
    CLI::Option* seed_opt = detect->add_option("--seed", detect_seed, "pipeline RNG seed");
    detect->add_flag("--debug-masks", detect_opt.debug_masks, "dump crops and segment masks");

    std::string eval_detections, eval_manifests, eval_out;
    CLI::App* eval_cmd = app.add_subcommand("eval", "score detections against manifests");
    eval_cmd->add_option("detections", eval_detections, "directory of detection JSON")->required();
    eval_cmd->add_option("manifests", eval_manifests, "dataset directory with manifests")
        ->required();
    eval_cmd->add_option("--out", eval_out, "write the summary here instead of stdout");

    synth::DatasetConfig gen_cfg;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic labeled dataset");
    gen->add_option("--out", gen_cfg.out_dir, "output dataset directory")->required();
    gen->add_option("--count", gen_cfg.scene_count, "number of scenes");
    gen->add_option("--width", gen_cfg.width, "scene width");
    gen->add_option("--height", gen_cfg.height, "scene height");
    gen->add_option("--min-size", gen_cfg.min_size, "minimum target extent");
    gen->add_option("--max-size", gen_cfg.max_size, "maximum target extent");
    gen->add_option("--targets", gen_cfg.targets_per_scene, "targets per scene (0 = background)");
    gen->add_flag("--coverage,!--no-coverage", gen_cfg.ensure_coverage,
                  "cycle classes so all appear once counts allow");
    gen->add_option("--noise", gen_cfg.noise_sigma, "additive Gaussian noise sigma (0..1 scale)");
    gen->add_option("--blur", gen_cfg.blur_radius, "Gaussian blur radius in pixels");
    gen->add_option("--seed", gen_cfg.seed, "master seed");

    std::string assets_out = "classifier.assets";
    std::uint64_t assets_seed = 0;
    CLI::App* build = app.add_subcommand("build-assets", "rebuild the classifier asset file");
    build->add_option("--out", assets_out, "asset file path");
    build->add_option("--seed", assets_seed, "generation seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*detect) {
            if (seed_opt->count() > 0) detect_opt.seed = detect_seed;
            return run_detect(detect_opt);
        }
        if (*eval_cmd) return run_eval(eval_detections, eval_manifests, eval_out);
        if (*gen) {
            synth::generate_dataset(gen_cfg);
            std::cout << "wrote " << gen_cfg.scene_count << " scenes to " << gen_cfg.out_dir
                      << "\n";
            return kExitOk;
        }
        if (*build) {
            assets::save_assets(assets::build_assets(assets_seed), assets_out);
            std::cout << "wrote " << assets_out << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
