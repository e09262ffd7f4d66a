// Command-line front end: train / infer / sr / metrics / pyramid.
//
// Settings resolve in fixed precedence: built-in defaults, then the
// --config file, then --preset, then explicit flags.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sinir/checkpoint.hpp"
#include "sinir/errors.hpp"
#include "sinir/image_io.hpp"
#include "sinir/inference.hpp"
#include "sinir/metrics.hpp"
#include "sinir/run_config.hpp"
#include "sinir/trainer.hpp"

namespace {

struct TrainArgs {
    std::string image, out, config_path, preset, corruption;
    int max_dim = 0, min_dim = 0, iters = 0, width = 0, patch_count = 0;
    double scale_factor = 0, lr = 0, intensity = 0, ssim_weight = 0;
    std::uint64_t seed = 0;
    bool antialias = false;
};

struct InferArgs {
    std::string ckpt, image, out, mask, orig, config_path;
    int start_scale = 0;
    double feather = 2.0;
};

struct SrArgs {
    std::string ckpt, image, out, config_path;
    double factor = 4.0;
};

struct MetricsArgs {
    std::string ref, test;
};

struct PyramidArgs {
    std::string image;
    int max_dim = 250, min_dim = 25;
    double scale_factor = 4.0 / 3.0;
};

int run_train(const CLI::App& sub, const TrainArgs& a) {
    sinir::TrainConfig cfg;
    if (!a.config_path.empty()) {
        sinir::load_run_config(a.config_path).apply(cfg);
    }
    if (sub.count("--preset")) {
        cfg = sinir::apply_preset(cfg, sinir::parse_preset(a.preset));
    }
    if (sub.count("--max-dim")) cfg.max_dim = a.max_dim;
    if (sub.count("--min-dim")) cfg.min_dim = a.min_dim;
    if (sub.count("--scale-factor")) cfg.scale_factor = a.scale_factor;
    if (sub.count("--iters")) cfg.iters_per_scale = a.iters;
    if (sub.count("--width")) cfg.width = a.width;
    if (sub.count("--lr")) cfg.lr = a.lr;
    if (sub.count("--corruption")) {
        cfg.corruption.scheme = sinir::parse_scheme(a.corruption);
    }
    if (sub.count("--intensity")) cfg.corruption.intensity = a.intensity;
    if (sub.count("--patch-count")) cfg.corruption.patch_count = a.patch_count;
    if (sub.count("--seed")) cfg.seed = a.seed;
    if (sub.count("--antialias")) cfg.antialias_downsample = a.antialias;
    if (sub.count("--ssim-weight")) cfg.ssim_weight = a.ssim_weight;

    const sinir::ImageTensor img = sinir::load_png(a.image);
    const sinir::ModelCheckpoint ckpt = sinir::train(img, cfg, &std::cerr);
    sinir::save_checkpoint(ckpt, a.out);
    return 0;
}

int run_infer(const CLI::App& sub, const InferArgs& a) {
    sinir::InferConfig cfg;
    if (!a.config_path.empty()) {
        sinir::load_run_config(a.config_path).apply(cfg);
    }
    if (sub.count("--start-scale")) cfg.start_scale = a.start_scale;
    if (sub.count("--feather")) cfg.feather_sigma = a.feather;

    const sinir::ModelCheckpoint ckpt = sinir::load_checkpoint(a.ckpt);
    const sinir::ImageTensor img = sinir::load_png(a.image);
    sinir::ImageTensor result = sinir::manipulate(img, ckpt, cfg.start_scale);
    if (!a.mask.empty()) {
        const sinir::ImageTensor orig = sinir::load_png(a.orig);
        const sinir::ImageTensor mask = sinir::load_png_mask(a.mask);
        result = sinir::composite(result, orig, mask, cfg.feather_sigma);
    }
    sinir::save_png(result, a.out);
    return 0;
}

int run_sr(const CLI::App& sub, const SrArgs& a) {
    sinir::InferConfig cfg;
    if (!a.config_path.empty()) {
        sinir::load_run_config(a.config_path).apply(cfg);
    }
    if (sub.count("--factor")) cfg.sr_factor = a.factor;

    const sinir::ModelCheckpoint ckpt = sinir::load_checkpoint(a.ckpt);
    const sinir::ImageTensor img = sinir::load_png(a.image);
    sinir::save_png(sinir::super_resolve(img, ckpt, cfg.sr_factor), a.out);
    return 0;
}

int run_metrics(const MetricsArgs& a) {
    const sinir::ImageTensor ref = sinir::load_png(a.ref);
    const sinir::ImageTensor test = sinir::load_png(a.test);
    const sinir::MetricReport r = sinir::evaluate(ref, test);
    if (r.ms_ssim_levels < 5) {
        std::fprintf(stderr, "sinir metrics: ms_ssim reduced to %d levels\n",
                     r.ms_ssim_levels);
    }
    std::printf("ssim=%.6f ms_ssim=%.6f rmse=%.6f\n", r.ssim, r.ms_ssim,
                r.rmse);
    return 0;
}

int run_pyramid(const PyramidArgs& a) {
    const sinir::ImageTensor img = sinir::load_png(a.image);
    const sinir::ScalePyramid pyr =
        sinir::build_pyramid(img, a.max_dim, a.min_dim, a.scale_factor);
    std::printf("effective_r=%.6f\n", pyr.effective_r);
    for (int n = pyr.levels() - 1; n >= 0; --n) {
        const sinir::ImageTensor& level = pyr.level(n);
        std::printf("scale %d: %dx%d\n", n, level.height(), level.width());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-image reconstruction cascade"};
    app.require_subcommand(1);

    TrainArgs ta;
    CLI::App* train = app.add_subcommand("train", "fit a cascade to one image");
    train->add_option("--image", ta.image, "training image (PNG)")->required();
    train->add_option("--out", ta.out, "checkpoint output path")->required();
    train->add_option("--config", ta.config_path, "JSON settings file");
    train->add_option("--preset", ta.preset, "default|photo-style|sr");
    train->add_option("--max-dim", ta.max_dim, "longer side of the finest scale");
    train->add_option("--min-dim", ta.min_dim, "longer side of the coarsest scale");
    train->add_option("--scale-factor", ta.scale_factor, "target per-level ratio");
    train->add_option("--iters", ta.iters, "iterations per scale");
    train->add_option("--width", ta.width, "net channel width");
    train->add_option("--lr", ta.lr, "learning rate");
    train->add_option("--corruption", ta.corruption,
                      "pixel-shuffle|black|add-gauss|replace-gauss|patch-shuffle");
    train->add_option("--intensity", ta.intensity, "corruption intensity");
    train->add_option("--patch-count", ta.patch_count, "patches per draw");
    train->add_option("--seed", ta.seed, "RNG seed");
    train->add_option("--ssim-weight", ta.ssim_weight, "structural loss weight");
    train->add_flag("--antialias", ta.antialias, "antialias downsampling");

    InferArgs ia;
    CLI::App* infer = app.add_subcommand("infer", "run an image through the cascade");
    infer->add_option("--ckpt", ia.ckpt, "trained checkpoint")->required();
    infer->add_option("--image", ia.image, "input image (PNG)")->required();
    infer->add_option("--out", ia.out, "output path")->required();
    infer->add_option("--config", ia.config_path, "JSON settings file");
    infer->add_option("--start-scale", ia.start_scale,
                      "cascade entry scale (0 = finest)");
    CLI::Option* mask_opt =
        infer->add_option("--mask", ia.mask, "blend mask (PNG, luminance)");
    CLI::Option* orig_opt =
        infer->add_option("--orig", ia.orig, "original image to blend over");
    infer->add_option("--feather", ia.feather, "mask feather sigma (px)");
    mask_opt->needs(orig_opt);
    orig_opt->needs(mask_opt);

    SrArgs sa;
    CLI::App* sr = app.add_subcommand("sr", "super-resolve with the finest net");
    sr->add_option("--ckpt", sa.ckpt, "trained checkpoint")->required();
    sr->add_option("--image", sa.image, "input image (PNG)")->required();
    sr->add_option("--out", sa.out, "output path")->required();
    sr->add_option("--config", sa.config_path, "JSON settings file");
    sr->add_option("--factor", sa.factor, "total upscale factor");

    MetricsArgs ma;
    CLI::App* metrics = app.add_subcommand("metrics", "compare two images");
    metrics->add_option("--ref", ma.ref, "reference image")->required();
    metrics->add_option("--test", ma.test, "image under test")->required();

    PyramidArgs pa;
    CLI::App* pyramid = app.add_subcommand("pyramid", "print scale geometry");
    pyramid->add_option("--image", pa.image, "input image (PNG)")->required();
    pyramid->add_option("--max-dim", pa.max_dim, "longer side of the finest scale");
    pyramid->add_option("--min-dim", pa.min_dim, "longer side of the coarsest scale");
    pyramid->add_option("--scale-factor", pa.scale_factor, "target per-level ratio");

    CLI11_PARSE(app, argc, argv);

    const CLI::App* sub = app.get_subcommands().front();
    try {
        if (sub == train) return run_train(*train, ta);
        if (sub == infer) return run_infer(*infer, ia);
        if (sub == sr) return run_sr(*sr, sa);
        if (sub == metrics) return run_metrics(ma);
        return run_pyramid(pa);
    } catch (const sinir::Error& e) {
        std::cerr << "sinir " << sub->get_name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "sinir " << sub->get_name() << ": " << e.what() << "\n";
        return 1;
    }
}
