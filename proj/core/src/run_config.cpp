#include "sinir/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sinir/errors.hpp"

namespace sinir {

struct RunConfig::Impl {
    nlohmann::json data;
};

namespace {

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys = {
        "antialias",   "corruption",  "feather",      "intensity",
        "iters",       "lr",          "max_dim",      "min_dim",
        "patch_count", "preset",      "scale_factor", "seed",
        "sr_factor",   "ssim_weight", "start_scale",  "width",
    };
    return keys;
}

template <typename T>
void take(const nlohmann::json& j, const char* key, T& dst) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            dst = it->get<T>();
        } catch (const nlohmann::json::exception&) {
            throw FormatError(std::string("config: key '") + key +
                              "' has the wrong type");
        }
    }
}

}  // namespace

bool RunConfig::has(const std::string& key) const {
    return impl && impl->data.contains(key);
}

void RunConfig::apply(TrainConfig& cfg) const {
    if (!impl) return;
    const nlohmann::json& j = impl->data;
    // Preset first so explicit keys in the same file override it, matching
    // the flag precedence on the command line.
    if (j.contains("preset")) {
        cfg = apply_preset(cfg, parse_preset(j.at("preset").get<std::string>()));
    }
    take(j, "max_dim", cfg.max_dim);
    take(j, "min_dim", cfg.min_dim);
    take(j, "scale_factor", cfg.scale_factor);
    take(j, "iters", cfg.iters_per_scale);
    take(j, "lr", cfg.lr);
    take(j, "width", cfg.width);
    take(j, "seed", cfg.seed);
    take(j, "antialias", cfg.antialias_downsample);
    take(j, "ssim_weight", cfg.ssim_weight);
    take(j, "intensity", cfg.corruption.intensity);
    take(j, "patch_count", cfg.corruption.patch_count);
    if (j.contains("corruption")) {
        cfg.corruption.scheme =
            parse_scheme(j.at("corruption").get<std::string>());
    }
}

void RunConfig::apply(InferConfig& cfg) const {
    if (!impl) return;
    const nlohmann::json& j = impl->data;
    take(j, "start_scale", cfg.start_scale);
    take(j, "sr_factor", cfg.sr_factor);
    take(j, "feather", cfg.feather_sigma);
}

RunConfig parse_run_config(const std::string& json_text) {
    nlohmann::json data;
    try {
        data = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("config: not valid JSON: ") + e.what());
    }
    if (!data.is_object()) {
        throw FormatError("config: top level must be a JSON object");
    }
    for (auto it = data.begin(); it != data.end(); ++it) {
        if (allowed_keys().count(it.key()) == 0) {
            throw FormatError("config: unknown key '" + it.key() + "'");
        }
    }
    RunConfig cfg;
    cfg.raw = json_text;
    auto impl = std::make_shared<RunConfig::Impl>();
    impl->data = std::move(data);
    cfg.impl = std::move(impl);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace sinir
