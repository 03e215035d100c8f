#include "aerotarget/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace aerotarget::cfg {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

int parse_int(const std::string& v) {
    std::size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return out;
}

double parse_double(const std::string& v) {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return out;
}

std::uint64_t parse_u64(const std::string& v) {
    std::size_t used = 0;
    const unsigned long long out = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing characters");
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("expected true/false");
}

using Setter = std::function<void(pipe::PipelineConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"roi.quantize_k", [](auto& c, const auto& v) { c.roi.quantize_k = parse_int(v); }},
        {"roi.canny_low",
         [](auto& c, const auto& v) { c.roi.canny_low = static_cast<float>(parse_double(v)); }},
        {"roi.canny_high",
         [](auto& c, const auto& v) { c.roi.canny_high = static_cast<float>(parse_double(v)); }},
        {"roi.min_box_area", [](auto& c, const auto& v) { c.roi.min_box_area = parse_double(v); }},
        {"roi.max_box_area", [](auto& c, const auto& v) { c.roi.max_box_area = parse_double(v); }},
        {"roi.iou_suppress_threshold",
         [](auto& c, const auto& v) { c.roi.iou_suppress_threshold = parse_double(v); }},
        {"roi.suppress_max_rounds",
         [](auto& c, const auto& v) { c.roi.suppress_max_rounds = parse_int(v); }},
        {"roi.box_dilation", [](auto& c, const auto& v) { c.roi.box_dilation = parse_double(v); }},
        {"seg.k", [](auto& c, const auto& v) { c.seg.k = parse_int(v); }},
        {"seg.variance_target",
         [](auto& c, const auto& v) { c.seg.variance_target = parse_double(v); }},
        {"seg.seed", [](auto& c, const auto& v) { c.seg.seed = parse_u64(v); }},
        {"fpr.max_regions", [](auto& c, const auto& v) { c.fpr.max_regions = parse_int(v); }},
        {"fpr.min_top_probability",
         [](auto& c, const auto& v) { c.fpr.min_top_probability = parse_double(v); }},
        {"fpr.min_mask_fill", [](auto& c, const auto& v) { c.fpr.min_mask_fill = parse_double(v); }},
        {"assets", [](auto& c, const auto& v) { c.assets_path = v; }},
        {"debug_masks", [](auto& c, const auto& v) { c.debug_masks = parse_bool(v); }},
    };
    return table;
}

}  // namespace

pipe::PipelineConfig parse_config_text(const std::string& text) {
    pipe::PipelineConfig config;
    std::set<std::string> seen;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        const auto where = [&] { return " (line " + std::to_string(line_no) + ": '" + stripped + "')"; };
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: missing '='" + where());
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        const auto it = setters().find(key);
        if (it == setters().end())
            throw std::invalid_argument("config: unknown key '" + key + "'" + where());
        if (!seen.insert(key).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'" + where());
        try {
            it->second(config, value);
        } catch (const std::exception& e) {
            throw std::invalid_argument("config: bad value for '" + key + "': " + e.what() +
                                        where());
        }
    }
    config.validate();
    return config;
}

pipe::PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config_text(text);
}

std::string config_key_help() {
    std::string out;
    for (const auto& [key, setter] : setters()) out += key + "\n";
    return out;
}

}  // namespace aerotarget::cfg
