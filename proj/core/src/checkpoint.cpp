#include "sinir/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <json.hpp>

#include "sinir/errors.hpp"

namespace sinir {

namespace {

constexpr char kMagic[8] = {'S', 'I', 'N', 'I', 'R', 'C', 'K', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

std::uint32_t get_u32(const std::vector<std::uint8_t>& b, size_t pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(b[pos + i]) << (8 * i);
    }
    return v;
}

nlohmann::json config_to_json(const TrainConfig& c) {
    return nlohmann::json{
        {"antialias_downsample", c.antialias_downsample},
        {"corruption",
         {{"intensity", c.corruption.intensity},
          {"patch_count", c.corruption.patch_count},
          {"scheme", scheme_name(c.corruption.scheme)}}},
        {"fixed_scales", c.fixed_scales},
        {"iters_per_scale", c.iters_per_scale},
        {"lr", c.lr},
        {"max_dim", c.max_dim},
        {"min_dim", c.min_dim},
        {"preset", preset_name(c.preset)},
        {"scale_factor", c.scale_factor},
        {"ssim_weight", c.ssim_weight},
        {"width", c.width},
    };
}

TrainConfig config_from_json(const nlohmann::json& j, std::uint64_t seed) {
    TrainConfig c;
    c.antialias_downsample = j.at("antialias_downsample").get<bool>();
    const auto& cor = j.at("corruption");
    c.corruption.intensity = cor.at("intensity").get<double>();
    c.corruption.patch_count = cor.at("patch_count").get<int>();
    c.corruption.scheme = parse_scheme(cor.at("scheme").get<std::string>());
    c.fixed_scales = j.at("fixed_scales").get<int>();
    c.iters_per_scale = j.at("iters_per_scale").get<int>();
    c.lr = j.at("lr").get<double>();
    c.max_dim = j.at("max_dim").get<int>();
    c.min_dim = j.at("min_dim").get<int>();
    c.preset = parse_preset(j.at("preset").get<std::string>());
    c.scale_factor = j.at("scale_factor").get<double>();
    c.ssim_weight = j.at("ssim_weight").get<double>();
    c.width = j.at("width").get<int>();
    c.seed = seed;
    return c;
}

void append_f32(std::vector<std::uint8_t>& out, double d) {
    const float f = static_cast<float>(d);
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof bits);
    put_u32(out, bits);
}

double read_f32(const std::vector<std::uint8_t>& b, size_t pos) {
    const std::uint32_t bits = get_u32(b, pos);
    float f;
    std::memcpy(&f, &bits, sizeof f);
    return static_cast<double>(f);
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const ModelCheckpoint& ckpt) {
    nlohmann::json header;
    header["config"] = config_to_json(ckpt.config);
    header["effective_r"] = ckpt.effective_r;
    header["seed"] = ckpt.config.seed;
    nlohmann::json scales = nlohmann::json::array();
    for (const auto& [h, w] : ckpt.scale_dims) {
        scales.push_back({h, w});
    }
    header["scales"] = scales;
    nlohmann::json nets = nlohmann::json::array();
    for (const RefineNet& net : ckpt.nets) {
        nlohmann::json table = nlohmann::json::array();
        for (const ConstParamRef& p : parameter_table(net)) {
            table.push_back({{"name", p.name}, {"shape", p.shape}});
        }
        nets.push_back(std::move(table));
    }
    header["nets"] = nets;

    const std::string hs = header.dump();
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 8);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(hs.size()));
    out.insert(out.end(), hs.begin(), hs.end());
    for (const RefineNet& net : ckpt.nets) {
        for (const ConstParamRef& p : parameter_table(net)) {
            for (double d : *p.values) append_f32(out, d);
        }
    }
    return out;
}

ModelCheckpoint parse_checkpoint(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 16 || std::memcmp(bytes.data(), kMagic, 8) != 0) {
        throw FormatError("checkpoint: bad magic, not a model file");
    }
    const std::uint32_t version = get_u32(bytes, 8);
    if (version != kVersion) {
        throw FormatError("checkpoint: unsupported format version " +
                          std::to_string(version));
    }
    const std::uint32_t header_len = get_u32(bytes, 12);
    if (16 + static_cast<size_t>(header_len) > bytes.size()) {
        throw FormatError("checkpoint: header extends past end of file");
    }

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.begin() + 16,
                                       bytes.begin() + 16 + header_len);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: header is not JSON: ") +
                          e.what());
    }

    ModelCheckpoint ckpt;
    try {
        ckpt.config = config_from_json(header.at("config"),
                                       header.at("seed").get<std::uint64_t>());
        ckpt.effective_r = header.at("effective_r").get<double>();
        for (const auto& s : header.at("scales")) {
            ckpt.scale_dims.emplace_back(s.at(0).get<int>(),
                                         s.at(1).get<int>());
        }

        size_t pos = 16 + header_len;
        for (const auto& table : header.at("nets")) {
            if (table.empty()) {
                throw FormatError("checkpoint: empty parameter table");
            }
            // in_proj.0.weight has shape [width, 3, 1, 1].
            const int width = table.at(0).at("shape").at(0).get<int>();
            RefineNet net = make_net(width);
            auto refs = parameter_table(net);
            if (refs.size() != table.size()) {
                throw FormatError("checkpoint: parameter table holds " +
                                  std::to_string(table.size()) +
                                  " tensors, expected " +
                                  std::to_string(refs.size()));
            }
            for (size_t i = 0; i < refs.size(); ++i) {
                const auto& entry = table.at(i);
                const std::string name = entry.at("name").get<std::string>();
                const std::vector<int> shape =
                    entry.at("shape").get<std::vector<int>>();
                if (name != refs[i].name || shape != refs[i].shape) {
                    throw FormatError("checkpoint: tensor '" + name +
                                      "' does not match expected '" +
                                      refs[i].name + "'");
                }
                std::vector<double>& dst = *refs[i].values;
                if (pos + 4 * dst.size() > bytes.size()) {
                    throw FormatError("checkpoint: payload truncated at '" +
                                      name + "'");
                }
                for (double& d : dst) {
                    d = read_f32(bytes, pos);
                    pos += 4;
                }
            }
            ckpt.nets.push_back(std::move(net));
        }
        if (pos != bytes.size()) {
            throw FormatError("checkpoint: " +
                              std::to_string(bytes.size() - pos) +
                              " trailing payload bytes");
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("checkpoint: malformed header field: ") +
                          e.what());
    }

    if (ckpt.nets.size() != ckpt.scale_dims.size()) {
        throw FormatError("checkpoint: " + std::to_string(ckpt.nets.size()) +
                          " nets but " +
                          std::to_string(ckpt.scale_dims.size()) + " scales");
    }
    if (!(ckpt.effective_r >= 1.0)) {
        throw FormatError("checkpoint: scale ratio must be at least 1");
    }
    return ckpt;
}

void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path) {
    const std::vector<std::uint8_t> bytes = serialize_checkpoint(ckpt);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out.flush()) {
        throw IoError("failed to write '" + path + "'");
    }
}

ModelCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    const std::streamsize size = in.tellg();
    in.seekg(0);
    std::vector<std::uint8_t> bytes(static_cast<size_t>(size));
    if (!in.read(reinterpret_cast<char*>(bytes.data()), size)) {
        throw IoError("failed to read '" + path + "'");
    }
    return parse_checkpoint(bytes);
}

}  // namespace sinir
