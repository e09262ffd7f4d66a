#ifndef SINIR_TRAINER_HPP
#define SINIR_TRAINER_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sinir/corruption.hpp"
#include "sinir/nn.hpp"
#include "sinir/resample.hpp"
#include "sinir/tensor.hpp"

namespace sinir {

/// Named bundles of settings for the common tasks. photo_style trains two
/// nets at the image's native size (ratio 1); super_resolution trains two
/// scales an octave apart with a wider net, more iterations and a higher
/// learning rate, antialiasing the downsampled level.
enum class Preset { defaults, photo_style, super_resolution };

Preset parse_preset(const std::string& name);
std::string preset_name(Preset p);

struct TrainConfig {
    int max_dim = 250;
    int min_dim = 25;
    double scale_factor = 4.0 / 3.0;
    int iters_per_scale = 500;
    double lr = 1e-4;
    int width = 64;
    CorruptionSpec corruption;
    std::uint64_t seed = 0;
    bool antialias_downsample = false;
    double ssim_weight = 1.0;
    Preset preset = Preset::defaults;
    // When positive, the pyramid has exactly this many levels at ratio
    // scale_factor and skips the max_dim fit (used by presets).
    int fixed_scales = 0;
};

/// Overlay a preset's settings onto cfg. Fields a preset does not pin keep
/// their current values.
TrainConfig apply_preset(TrainConfig cfg, Preset preset);

/// Everything inference needs: one net per scale plus the geometry that
/// reproduces the cascade. Nets are stored coarsest first, matching the
/// order they were trained in; scale_dims aligns index-for-index.
struct ModelCheckpoint {
    std::uint32_t format_version = 1;
    std::vector<RefineNet> nets;
    std::vector<std::pair<int, int>> scale_dims;  // (height, width)
    double effective_r = 1.0;
    TrainConfig config;

    int num_scales() const { return static_cast<int>(nets.size()); }

    /// Net for pyramid level n (0 = finest).
    const RefineNet& net_for_level(int n) const {
        return nets[nets.size() - 1 - static_cast<size_t>(n)];
    }
};

/// Train the whole cascade, coarsest scale first. Each scale starts from a
/// fresh net and a fresh optimizer; its input is the frozen previous
/// scale's clean-input output, upsampled. Every iteration draws a fresh
/// corruption of that input and regresses the net's output onto the scale's
/// ground-truth image. When diagnostics is non-null, the running loss is
/// logged there every 50 iterations. iters_per_scale == 0 is allowed and
/// yields the freshly initialized (zero-map) nets.
ModelCheckpoint train(const ImageTensor& img, const TrainConfig& cfg,
                      std::ostream* diagnostics = nullptr);

/// Per-scale reconstruction losses of the clean cascade on a new image,
/// ordered coarsest first (finest last). The image must reproduce the
/// checkpoint's pyramid dimensions.
std::vector<double> reconstruction_report(const ModelCheckpoint& ckpt,
                                          const ImageTensor& img);

}  // namespace sinir

#endif
