#ifndef SINIR_RUN_CONFIG_HPP
#define SINIR_RUN_CONFIG_HPP

#include <memory>
#include <string>

#include "sinir/inference.hpp"
#include "sinir/trainer.hpp"

namespace sinir {

/// JSON settings file shared by the subcommands. Every key mirrors one
/// training or inference field; unknown keys are rejected by name so typos
/// do not silently fall back to defaults. Values here override built-in
/// defaults but lose to explicit command-line flags.
struct RunConfig {
    /// Overlay onto cfg the training keys present in the file.
    void apply(TrainConfig& cfg) const;
    /// Overlay onto cfg the inference keys present in the file.
    void apply(InferConfig& cfg) const;

    /// True when the file set this key.
    bool has(const std::string& key) const;

    std::string raw;  // parsed JSON text (kept for diagnostics)

    struct Impl;
    std::shared_ptr<const Impl> impl;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

}  // namespace sinir

#endif
