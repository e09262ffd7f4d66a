#include "sinir/trainer.hpp"

#include <ostream>

#include "sinir/errors.hpp"
#include "sinir/loss.hpp"
#include "sinir/optim.hpp"

namespace sinir {

Preset parse_preset(const std::string& name) {
    if (name == "default") return Preset::defaults;
    if (name == "photo-style") return Preset::photo_style;
    if (name == "sr") return Preset::super_resolution;
    throw ParameterError("unknown preset '" + name + "'");
}

std::string preset_name(Preset p) {
    switch (p) {
        case Preset::defaults: return "default";
        case Preset::photo_style: return "photo-style";
        case Preset::super_resolution: return "sr";
    }
    throw ParameterError("unknown preset value");
}

TrainConfig apply_preset(TrainConfig cfg, Preset preset) {
    cfg.preset = preset;
    switch (preset) {
        case Preset::defaults:
            cfg.fixed_scales = 0;
            break;
        case Preset::photo_style:
            cfg.fixed_scales = 2;
            cfg.scale_factor = 1.0;
            break;
        case Preset::super_resolution:
            cfg.fixed_scales = 2;
            cfg.scale_factor = 2.0;
            cfg.width = 256;
            cfg.iters_per_scale = 1000;
            cfg.lr = 1e-3;
            cfg.antialias_downsample = true;
            break;
    }
    return cfg;
}

namespace {

ScalePyramid pyramid_for(const ImageTensor& img, const TrainConfig& cfg) {
    if (cfg.fixed_scales > 0) {
        return build_fixed_pyramid(img, cfg.fixed_scales, cfg.scale_factor,
                                   cfg.antialias_downsample);
    }
    return build_pyramid(img, cfg.max_dim, cfg.min_dim, cfg.scale_factor,
                         cfg.antialias_downsample);
}

void validate(const TrainConfig& cfg) {
    if (cfg.iters_per_scale < 0) {
        throw ParameterError("train: iterations must be non-negative");
    }
    if (cfg.width < 1) {
        throw ParameterError("train: net width must be positive");
    }
    if (!(cfg.lr > 0.0)) {
        throw ParameterError("train: learning rate must be positive");
    }
    if (cfg.ssim_weight < 0.0) {
        throw ParameterError("train: ssim weight must be non-negative");
    }
}

/// Cascade input for one scale: ground truth at the coarsest, otherwise the
/// previous frozen output upsampled to this scale's exact dims.
ImageTensor scale_input(const ScalePyramid& pyr, int n,
                        const ImageTensor& prev_out) {
    if (n == pyr.levels() - 1) {
        return pyr.level(n);
    }
    const ImageTensor& target = pyr.level(n);
    return upsample_by_r(prev_out, pyr.effective_r,
                         Dims{target.height(), target.width()});
}

}  // namespace

ModelCheckpoint train(const ImageTensor& img, const TrainConfig& cfg,
                      std::ostream* diagnostics) {
    validate(cfg);
    const ScalePyramid pyr = pyramid_for(img, cfg);
    Rng rng(cfg.seed);

    ModelCheckpoint ckpt;
    ckpt.config = cfg;
    ckpt.effective_r = pyr.effective_r;
    for (const ImageTensor& level : pyr.images) {
        ckpt.scale_dims.emplace_back(level.height(), level.width());
    }

    AdamConfig adam_cfg;
    adam_cfg.lr = cfg.lr;

    ImageTensor prev_out(1, 1, 1);
    for (int n = pyr.levels() - 1; n >= 0; --n) {
        const ImageTensor& target = pyr.level(n);
        const ImageTensor input = scale_input(pyr, n, prev_out);

        RefineNet net = net_init(cfg.width, rng);
        auto params = parameter_table(net);
        std::vector<size_t> sizes;
        std::vector<std::vector<double>*> values;
        for (auto& p : params) {
            sizes.push_back(p.values->size());
            values.push_back(p.values);
        }
        AdamState adam = make_adam_state(sizes, adam_cfg);

        for (int it = 1; it <= cfg.iters_per_scale; ++it) {
            const ImageTensor corrupted = corrupt(input, cfg.corruption, rng);
            NetTape tape;
            const ImageTensor pred = net_forward(corrupted, net, &tape);
            ImageTensor grad(1, 1, 1);
            const double loss = rec_loss(pred, target, &grad, cfg.ssim_weight);
            RefineNetGrads grads = make_net_grads(net);
            net_backward(grad, net, tape, grads);
            adam_step(values, gradient_table(grads), adam);
            if (diagnostics && it % 50 == 0) {
                (*diagnostics) << "scale " << n << " iter " << it << " loss "
                               << loss << "\n";
            }
        }

        // Freeze this scale: the next one consumes the clean-input output.
        prev_out = net_forward(input, net);
        ckpt.nets.push_back(std::move(net));
    }
    return ckpt;
}

std::vector<double> reconstruction_report(const ModelCheckpoint& ckpt,
                                          const ImageTensor& img) {
    const ScalePyramid pyr = pyramid_for(img, ckpt.config);
    if (pyr.levels() != ckpt.num_scales()) {
        throw ShapeError("reconstruction_report: image yields " +
                         std::to_string(pyr.levels()) +
                         " scales, checkpoint holds " +
                         std::to_string(ckpt.num_scales()));
    }
    for (int i = 0; i < pyr.levels(); ++i) {
        const auto& want = ckpt.scale_dims[i];
        if (pyr.images[i].height() != want.first ||
            pyr.images[i].width() != want.second) {
            throw ShapeError("reconstruction_report: scale " +
                             std::to_string(i) + " is " +
                             pyr.images[i].shape_string() +
                             ", checkpoint expects " +
                             std::to_string(want.first) + "x" +
                             std::to_string(want.second));
        }
    }

    std::vector<double> losses;
    ImageTensor prev_out(1, 1, 1);
    for (int n = pyr.levels() - 1; n >= 0; --n) {
        const ImageTensor input = scale_input(pyr, n, prev_out);
        prev_out = net_forward(input, ckpt.net_for_level(n));
        losses.push_back(rec_loss(prev_out, pyr.level(n), nullptr,
                                  ckpt.config.ssim_weight));
    }
    return losses;
}

}  // namespace sinir
