// Acceptance gate for the whole library: eight end-to-end contract checks,
// one [PASS]/[FAIL] line each, nonzero exit when anything fails. Bounds and
// tolerances are fixed here on purpose; loosening them is a library bug,
// not a test bug.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iterator>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sinir/checkpoint.hpp"
#include "sinir/corruption.hpp"
#include "sinir/image_io.hpp"
#include "sinir/inference.hpp"
#include "sinir/loss.hpp"
#include "sinir/metrics.hpp"
#include "sinir/nn.hpp"
#include "sinir/resample.hpp"
#include "sinir/trainer.hpp"

namespace {

// Finite-difference step shared by every gradient check below. Instances
// are screened (kink margins, norm conditioning) so that central
// differences at this step size are trustworthy to well under 1e-4.
constexpr double kFdStep = 1e-5;
constexpr double kGradRelTol = 1e-4;
constexpr int kGradInstances = 20;

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool fail(std::string& detail, const std::string& why) {
    if (!detail.empty()) detail += "; ";
    detail += why;
    return false;
}

// ---------------------------------------------------------------- 1 -----

bool grads_ok(const std::vector<double>& analytic,
              std::vector<double>& slot_vec,
              const std::function<double()>& eval) {
    const std::vector<double> numeric =
        oracle::numeric_grad(slot_vec, kFdStep, eval);
    return oracle::grads_match(analytic, numeric, kGradRelTol);
}

bool grads_ok(const sinir::ImageTensor& analytic, sinir::ImageTensor& slot,
              const std::function<double()>& eval) {
    const std::vector<double> numeric =
        oracle::numeric_grad(slot, kFdStep, eval);
    return oracle::grads_match(analytic.values(), numeric, kGradRelTol);
}

bool conv_layer_grads(int kernel, std::string& detail) {
    for (int inst = 0; inst < kGradInstances; ++inst) {
        const unsigned seed = 1000u * kernel + inst;
        const int ci = 1 + inst % 3, co = 1 + (inst / 3) % 3;
        const int h = 4 + inst % 5, w = 4 + (inst * 7) % 5;
        sinir::ImageTensor x(ci, h, w);
        oracle::fill_pseudo(x, seed, 0.8);
        sinir::Conv2dParams p = sinir::make_conv(co, ci, kernel);
        oracle::fill_pseudo(p.weight, seed + 31, 0.5);
        oracle::fill_pseudo(p.bias, seed + 57, 0.3);
        const sinir::ImageTensor proj =
            oracle::random_projection(co, h, w, seed + 91);
        const auto eval = [&] {
            return oracle::dot(sinir::conv_forward(x, p), proj);
        };

        sinir::ConvCache cache;
        (void)sinir::conv_forward(x, p, &cache);
        sinir::Conv2dGrads g{std::vector<double>(p.weight.size(), 0.0),
                             std::vector<double>(p.bias.size(), 0.0)};
        const sinir::ImageTensor gin = sinir::conv_backward(proj, cache, p, g);

        if (!grads_ok(g.weight, p.weight, eval) ||
            !grads_ok(g.bias, p.bias, eval) || !grads_ok(gin, x, eval)) {
            return fail(detail, "conv k=" + std::to_string(kernel) +
                                    " instance " + std::to_string(inst));
        }
    }
    return true;
}

bool norm_layer_grads(std::string& detail) {
    for (int inst = 0; inst < kGradInstances; ++inst) {
        const unsigned seed = 3000u + inst;
        const int c = 1 + inst % 3, h = 4 + inst % 6, w = 4 + (inst * 5) % 6;
        sinir::ImageTensor x(c, h, w);
        oracle::fill_pseudo(x, seed, 0.7);
        sinir::InstanceNormParams p = sinir::make_instance_norm(c);
        oracle::fill_pseudo(p.gamma, seed + 7, 0.3);
        for (double& gm : p.gamma) gm += 1.0;
        oracle::fill_pseudo(p.beta, seed + 13, 0.3);
        const sinir::ImageTensor proj =
            oracle::random_projection(c, h, w, seed + 19);
        const auto eval = [&] {
            return oracle::dot(sinir::instance_norm_forward(x, p), proj);
        };

        sinir::InstanceNormCache cache;
        (void)sinir::instance_norm_forward(x, p, &cache);
        sinir::InstanceNormGrads g{std::vector<double>(p.gamma.size(), 0.0),
                                   std::vector<double>(p.beta.size(), 0.0)};
        const sinir::ImageTensor gin =
            sinir::instance_norm_backward(proj, cache, p, g);

        if (!grads_ok(g.gamma, p.gamma, eval) ||
            !grads_ok(g.beta, p.beta, eval) || !grads_ok(gin, x, eval)) {
            return fail(detail, "instance norm instance " + std::to_string(inst));
        }
    }
    return true;
}

bool activation_grads(std::string& detail) {
    for (int inst = 0; inst < kGradInstances; ++inst) {
        const unsigned seed = 5000u + inst;
        const int c = 1 + inst % 3, h = 4 + inst % 6, w = 4 + (inst * 3) % 6;
        sinir::ImageTensor x(c, h, w);
        oracle::fill_pseudo(x, seed, 0.8);
        // Keep every input a safe distance from the leaky-relu kink.
        for (double& v : x.values()) v += (v >= 0.0 ? 0.05 : -0.05);
        const sinir::ImageTensor proj =
            oracle::random_projection(c, h, w, seed + 3);

        const auto eval_lrelu = [&] {
            return oracle::dot(sinir::leaky_relu(x), proj);
        };
        const sinir::ImageTensor g_lrelu = sinir::leaky_relu_backward(proj, x);
        if (!grads_ok(g_lrelu, x, eval_lrelu))
            return fail(detail, "leaky relu instance " + std::to_string(inst));

        const auto eval_tanh = [&] {
            return oracle::dot(sinir::tanh_forward(x), proj);
        };
        const sinir::ImageTensor y = sinir::tanh_forward(x);
        const sinir::ImageTensor g_tanh = sinir::tanh_backward(proj, y);
        if (!grads_ok(g_tanh, x, eval_tanh))
            return fail(detail, "tanh instance " + std::to_string(inst));
    }
    return true;
}

bool whole_net_grads(std::string& detail) {
    int accepted = 0;
    unsigned seed = 1;
    for (int attempt = 0; attempt < 400 && accepted < kGradInstances;
         ++attempt, ++seed) {
        const int width = 3 + accepted % 3;
        const int h = 5 + accepted % 4, w = 5 + (accepted * 3) % 4;
        sinir::RefineNet net = oracle::gradcheck_net(width, seed);
        sinir::ImageTensor x(3, h, w);
        oracle::fill_pseudo(x, 7000u + seed, 0.7);

        sinir::NetTape probe;
        (void)sinir::net_forward(x, net, &probe);
        // A finite step must not push any pre-activation across zero.
        if (oracle::min_kink_margin(probe) <= 2e-3) continue;
        ++accepted;

        const sinir::ImageTensor proj =
            oracle::random_projection(3, h, w, 7500u + seed);
        const auto eval = [&] {
            return oracle::dot(sinir::net_forward(x, net), proj);
        };

        sinir::NetTape tape;
        (void)sinir::net_forward(x, net, &tape);
        sinir::RefineNetGrads grads = sinir::make_net_grads(net);
        const sinir::ImageTensor gin =
            sinir::net_backward(proj, net, tape, grads);

        const std::vector<sinir::ParamRef> params = sinir::parameter_table(net);
        const std::vector<const std::vector<double>*> gvecs =
            sinir::gradient_table(grads);
        for (size_t i = 0; i < params.size(); ++i) {
            if (!grads_ok(*gvecs[i], *params[i].values, eval)) {
                return fail(detail, "net instance " + std::to_string(accepted) +
                                        " param " + params[i].name);
            }
        }
        if (!grads_ok(gin, x, eval))
            return fail(detail, "net instance " + std::to_string(accepted) +
                                    " input grad");
    }
    if (accepted < kGradInstances)
        return fail(detail, "only " + std::to_string(accepted) +
                                " well-conditioned net instances found");
    return true;
}

bool loss_grads(std::string& detail) {
    for (int inst = 0; inst < kGradInstances; ++inst) {
        const unsigned seed = 9000u + inst;
        const int side = 11 + inst % 3;
        sinir::ImageTensor a(3, side, side + 1), b(3, side, side + 1);
        oracle::fill_pseudo(a, seed, 0.8);
        oracle::fill_pseudo(b, seed + 1, 0.8);
        // Correlated pair: gradients of similarity are better exercised
        // away from the independent-noise regime.
        for (size_t i = 0; i < b.values().size(); ++i)
            b.values()[i] = 0.7 * a.values()[i] + 0.3 * b.values()[i];

        sinir::ImageTensor g(3, side, side + 1);
        (void)sinir::mse(a, b, &g);
        if (!grads_ok(g, a, [&] { return sinir::mse(a, b); }))
            return fail(detail, "mse instance " + std::to_string(inst));

        (void)sinir::ssim(a, b, &g);
        if (!grads_ok(g, a, [&] { return sinir::ssim(a, b); }))
            return fail(detail, "ssim instance " + std::to_string(inst));

        const double wgt = (inst % 2) ? 1.0 : 0.5;
        (void)sinir::rec_loss(a, b, &g, wgt);
        if (!grads_ok(g, a, [&] { return sinir::rec_loss(a, b, nullptr, wgt); }))
            return fail(detail, "rec_loss instance " + std::to_string(inst));
    }
    return true;
}

bool criterion_gradients(std::string& detail) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = conv_layer_grads(1, detail) && conv_layer_grads(3, detail) &&
              norm_layer_grads(detail) && activation_grads(detail) &&
              whole_net_grads(detail) && loss_grads(detail);
    const double dt = elapsed_s(t0);
    if (dt >= 120.0)
        ok = fail(detail, "gradient suite took " + fmt("%.1f", dt) + "s (>= 120s)");
    return ok;
}

// ---------------------------------------------------------------- 2 -----

bool criterion_oracles(std::string& detail) {
    double worst_conv = 0.0, worst_ssim = 0.0;
    for (int inst = 0; inst < 10; ++inst) {
        for (int kernel : {1, 3}) {
            const unsigned seed = 100u * kernel + inst;
            const int ci = 2 + inst % 3, co = 2 + (inst / 2) % 3;
            sinir::ImageTensor x(ci, 16, 16);
            oracle::fill_pseudo(x, seed, 0.9);
            sinir::Conv2dParams p = sinir::make_conv(co, ci, kernel);
            oracle::fill_pseudo(p.weight, seed + 11, 0.6);
            oracle::fill_pseudo(p.bias, seed + 23, 0.4);
            const sinir::ImageTensor got = sinir::conv_forward(x, p);
            const sinir::ImageTensor want = oracle::conv(x, p);
            for (size_t i = 0; i < got.values().size(); ++i)
                worst_conv = std::max(
                    worst_conv, std::abs(got.values()[i] - want.values()[i]));
        }
        sinir::ImageTensor a(3, 16, 16), b(3, 16, 16);
        oracle::fill_pseudo(a, 800u + inst, 0.9);
        oracle::fill_pseudo(b, 850u + inst, 0.9);
        for (size_t i = 0; i < b.values().size(); ++i)
            b.values()[i] = 0.6 * a.values()[i] + 0.4 * b.values()[i];
        worst_ssim = std::max(
            worst_ssim, std::abs(sinir::ssim(a, b) - oracle::ssim(a, b)));
    }
    detail = "max |conv diff| " + fmt("%.2e", worst_conv) +
             ", max |ssim diff| " + fmt("%.2e", worst_ssim);
    return worst_conv <= 1e-10 && worst_ssim <= 1e-10;
}

// ---------------------------------------------------------------- 3 -----

bool criterion_pyramid(std::string& detail) {
    // Square source so the coarsest scale's two sides agree; the level
    // count depends on the longer side only.
    const sinir::ImageTensor img = oracle::textured_image(3, 600, 600, 5);
    const struct {
        int max_dim;
        int want_levels;
    } cases[] = {{125, 8}, {250, 11}, {500, 13}};
    for (const auto& c : cases) {
        const sinir::ScalePyramid pyr =
            sinir::build_pyramid(img, c.max_dim, 25, 4.0 / 3.0);
        const sinir::ImageTensor& coarse = pyr.coarsest();
        const int coarse_min = std::min(coarse.height(), coarse.width());
        const int fine_long =
            std::max(pyr.finest().height(), pyr.finest().width());
        detail += (detail.empty() ? "" : ", ") + std::to_string(c.max_dim) +
                  "->" + std::to_string(pyr.levels()) + " levels, coarsest " +
                  std::to_string(coarse_min);
        if (pyr.levels() != c.want_levels) return fail(detail, "level count");
        if (fine_long != c.max_dim) return fail(detail, "finest size");
        if (coarse_min < 24 || coarse_min > 26)
            return fail(detail, "coarsest size outside 25 +- 1");
    }
    return true;
}

// ---------------------------------------------------------------- 4 -----

bool criterion_training(std::string& detail) {
    // Toy problem: degenerate single-size pyramid, default knobs.
    const sinir::ImageTensor toy = oracle::textured_image(3, 33, 33, 11);
    sinir::TrainConfig tcfg;
    tcfg.max_dim = 33;
    tcfg.min_dim = 33;
    tcfg.seed = 0;
    const sinir::ImageTensor zero(3, 33, 33);
    const double initial = sinir::rec_loss(zero, toy);
    const sinir::ModelCheckpoint toy_ckpt = sinir::train(toy, tcfg);
    const double final_loss = sinir::reconstruction_report(toy_ckpt, toy).back();
    detail = "toy " + fmt("%.4f", initial) + " -> " + fmt("%.4f", final_loss);
    if (!(final_loss <= initial / 10.0))
        return fail(detail, "toy loss did not drop 10x");

    // Desk-scale budget: a full multi-scale run on one core.
    const sinir::ImageTensor img = oracle::textured_image(3, 72, 96, 21);
    sinir::TrainConfig dcfg;
    dcfg.max_dim = 64;
    dcfg.min_dim = 25;
    dcfg.width = 32;
    dcfg.iters_per_scale = 100;
    dcfg.seed = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const sinir::ModelCheckpoint ckpt = sinir::train(img, dcfg);
    const double dt = elapsed_s(t0);
    detail += ", desk " + fmt("%.1f", dt) + "s/" +
              std::to_string(ckpt.num_scales()) + " scales";
    if (dt >= 600.0) return fail(detail, "desk run exceeded 10 minutes");

    // The trained cascade must beat plain bicubic upsampling of the next
    // coarser ground truth at reproducing the finest scale.
    const sinir::ScalePyramid pyr =
        sinir::build_pyramid(img, dcfg.max_dim, dcfg.min_dim, dcfg.scale_factor,
                             dcfg.antialias_downsample);
    const sinir::ImageTensor& x0 = pyr.level(0);
    const sinir::ImageTensor xhat =
        sinir::manipulate(x0, ckpt, ckpt.num_scales() - 1);
    const sinir::ImageTensor baseline =
        sinir::bicubic_resize(pyr.level(1), x0.height(), x0.width());
    const double s_net = sinir::ssim(xhat, x0);
    const double s_base = sinir::ssim(baseline, x0);
    detail += ", cascade ssim " + fmt("%.4f", s_net) + " vs bicubic " +
              fmt("%.4f", s_base);
    if (!(s_net > s_base)) return fail(detail, "cascade lost to bicubic");
    return true;
}

// ---------------------------------------------------------------- 5 -----

int changed_pixels(const sinir::ImageTensor& a, const sinir::ImageTensor& b) {
    int n = 0;
    for (int y = 0; y < a.height(); ++y)
        for (int x = 0; x < a.width(); ++x)
            for (int c = 0; c < a.channels(); ++c)
                if (a.at(c, y, x) != b.at(c, y, x)) {
                    ++n;
                    break;
                }
    return n;
}

std::vector<double> sorted_channel(const sinir::ImageTensor& t, int c) {
    std::vector<double> v(t.values().begin() + static_cast<long>(c) * t.height() * t.width(),
                          t.values().begin() + static_cast<long>(c + 1) * t.height() * t.width());
    std::sort(v.begin(), v.end());
    return v;
}

bool criterion_corruption(std::string& detail) {
    using sinir::CorruptionScheme;
    const CorruptionScheme pixel_schemes[] = {
        CorruptionScheme::pixel_shuffle, CorruptionScheme::black_noise,
        CorruptionScheme::additive_gaussian, CorruptionScheme::replacing_gaussian};

    // Value multisets survive shuffling exactly, at any rate.
    const sinir::ImageTensor img = oracle::textured_image(3, 30, 40, 3);
    for (double pct : {5e-2, 1.0, 25.0, 100.0}) {
        sinir::Rng rng(17);
        const sinir::ImageTensor out = sinir::corrupt(
            img, {CorruptionScheme::pixel_shuffle, pct, 50}, rng);
        for (int c = 0; c < 3; ++c)
            if (sorted_channel(img, c) != sorted_channel(out, c))
                return fail(detail, "multiset broken at pct " + fmt("%g", pct));
    }

    // Site budget: every pixel scheme touches at most k pixels.
    for (double pct : {5e-4, 1.0, 10.0}) {
        const int k = std::max(
            2, static_cast<int>(std::llround(pct / 100.0 * img.height() *
                                             img.width())));
        for (CorruptionScheme s : pixel_schemes) {
            sinir::Rng rng(29);
            const sinir::ImageTensor out = sinir::corrupt(img, {s, pct, 50}, rng);
            if (changed_pixels(img, out) > k)
                return fail(detail, sinir::scheme_name(s) + " changed > " +
                                        std::to_string(k) + " pixels");
        }
    }

    // Zero intensity is a byte-exact no-op for every scheme.
    const CorruptionScheme all[] = {
        CorruptionScheme::pixel_shuffle, CorruptionScheme::black_noise,
        CorruptionScheme::additive_gaussian,
        CorruptionScheme::replacing_gaussian, CorruptionScheme::patch_shuffle};
    for (CorruptionScheme s : all) {
        sinir::Rng rng(31);
        const sinir::ImageTensor out = sinir::corrupt(img, {s, 0.0, 50}, rng);
        if (out.values() != img.values())
            return fail(detail, sinir::scheme_name(s) + " not a no-op at 0");
    }

    // The vanishing-rate floor: 5e-4 percent of a 250x188 image is still
    // two sites.
    const sinir::ImageTensor big = oracle::textured_image(3, 188, 250, 9);
    sinir::Rng rng_a(41), rng_b(43);
    const sinir::ImageTensor blacked = sinir::corrupt(
        big, {CorruptionScheme::black_noise, 5e-4, 50}, rng_a);
    const sinir::ImageTensor shuffled = sinir::corrupt(
        big, {CorruptionScheme::pixel_shuffle, 5e-4, 50}, rng_b);
    const int black_changed = changed_pixels(big, blacked);
    detail = "k floor: black touched " + std::to_string(black_changed);
    if (black_changed != 2) return fail(detail, "expected exactly 2 sites");
    if (changed_pixels(big, shuffled) > 2)
        return fail(detail, "shuffle touched > 2 sites");
    return true;
}

// ---------------------------------------------------------------- 6 -----

bool criterion_distortion_trend(std::string& detail) {
    // x2 super-resolution on held-out high-resolution ground truth. Only
    // the direction of the sweep is asserted; absolute errors depend on
    // image content and budget.
    const sinir::ImageTensor hr = oracle::textured_image(3, 128, 128, 42);
    const sinir::ImageTensor lr = sinir::bicubic_resize(hr, 64, 64, true);
    std::vector<sinir::SweepEntry> points;
    for (double pct : {5e-4, 5e-2, 5e-1}) {
        std::vector<double> rmses;
        for (std::uint64_t seed : {1, 2, 3}) {
            sinir::TrainConfig cfg;
            cfg = sinir::apply_preset(cfg, sinir::Preset::super_resolution);
            cfg.width = 32;
            cfg.iters_per_scale = 100;
            cfg.seed = seed;
            cfg.corruption.scheme = sinir::CorruptionScheme::pixel_shuffle;
            cfg.corruption.intensity = pct;
            const sinir::ModelCheckpoint ckpt = sinir::train(lr, cfg);
            const sinir::ImageTensor up = sinir::super_resolve(lr, ckpt, 2.0);
            rmses.push_back(sinir::evaluate(hr, up).rmse);
        }
        std::sort(rmses.begin(), rmses.end());
        points.push_back({pct, rmses[1]});
        detail += (detail.empty() ? "median rmse " : ", ") + fmt("%g", pct) +
                  "%->" + fmt("%.3f", rmses[1]);
    }
    const sinir::TrendReport rep = sinir::trend_check(points);
    if (!rep.monotone_non_increasing) return fail(detail, rep.detail);
    return true;
}

// ---------------------------------------------------------------- 7 -----

bool all_zero(const sinir::ImageTensor& t) {
    for (double v : t.values())
        if (v != 0.0) return false;
    return true;
}

bool criterion_inference(std::string& detail) {
    // Untrained checkpoint: full geometry, zero-map nets.
    const sinir::ImageTensor base = oracle::textured_image(3, 30, 40, 13);
    sinir::TrainConfig cfg;
    cfg.max_dim = 40;
    cfg.min_dim = 20;
    cfg.width = 4;
    cfg.iters_per_scale = 0;
    cfg.seed = 9;
    const sinir::ModelCheckpoint ckpt = sinir::train(base, cfg);
    if (ckpt.num_scales() != 5) return fail(detail, "unexpected scale count");

    const int sizes[][2] = {{23, 37}, {41, 24}, {29, 29}};
    for (const auto& hw : sizes) {
        const sinir::ImageTensor img =
            oracle::textured_image(3, hw[0], hw[1], 17);
        for (int start = 0; start < ckpt.num_scales(); ++start) {
            const sinir::ImageTensor out = sinir::manipulate(img, ckpt, start);
            if (out.height() != hw[0] || out.width() != hw[1])
                return fail(detail, "manipulate changed dims at start " +
                                        std::to_string(start));
            if (!all_zero(out))
                return fail(detail, "untrained manipulate output not zero");
        }
    }

    const struct {
        double factor, r;
        int want;
    } steps[] = {{2, 2, 1},      {3, 2, 2}, {4, 2, 2},
                 {4.0001, 2, 3}, {8, 2, 3}, {1.0001, 2, 1}};
    for (const auto& s : steps)
        if (sinir::sr_step_count(s.factor, s.r) != s.want)
            return fail(detail, "sr_step_count(" + fmt("%g", s.factor) + ", " +
                                    fmt("%g", s.r) + ")");

    const sinir::ImageTensor small = oracle::textured_image(3, 17, 13, 19);
    const struct {
        double factor;
        int h, w;
    } dims[] = {{2.0, 34, 26}, {3.0, 51, 39}, {1.5, 26, 20}};
    for (const auto& d : dims) {
        const sinir::ImageTensor up = sinir::super_resolve(small, ckpt, d.factor);
        if (up.height() != d.h || up.width() != d.w)
            return fail(detail, "super_resolve x" + fmt("%g", d.factor) + " dims");
        if (!all_zero(up))
            return fail(detail, "untrained super_resolve output not zero");
    }

    // Composite stays a pixelwise convex combination for any feathering.
    sinir::ImageTensor a(3, 20, 24), b(3, 20, 24), mask(1, 20, 24);
    oracle::fill_pseudo(a, 23, 0.9);
    oracle::fill_pseudo(b, 29, 0.9);
    for (int y = 6; y < 14; ++y)
        for (int x = 8; x < 18; ++x) mask.at(0, y, x) = 1.0;
    mask.at(0, 2, 3) = 0.3;
    for (double sigma : {0.0, 1.0, 2.5}) {
        const sinir::ImageTensor out = sinir::composite(a, b, mask, sigma);
        for (size_t i = 0; i < out.values().size(); ++i) {
            const double lo = std::min(a.values()[i], b.values()[i]) - 1e-12;
            const double hi = std::max(a.values()[i], b.values()[i]) + 1e-12;
            if (out.values()[i] < lo || out.values()[i] > hi)
                return fail(detail,
                            "composite left the convex hull at sigma " +
                                fmt("%g", sigma));
        }
    }
    detail = "5 start scales x 3 sizes, zero maps, step counts, composite hull";
    return true;
}

// ---------------------------------------------------------------- 8 -----

std::vector<char> file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in),
                             std::istreambuf_iterator<char>());
}

int run_shell(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool criterion_reproducibility(std::string& detail) {
    sinir::save_png(oracle::textured_image(3, 32, 32, 33), "acc_repro_in.png");
    const std::string cli = SINIR_CLI_PATH;
    for (const char* tag : {"a", "b"}) {
        const std::string t = tag;
        if (run_shell("SINIR_THREADS=1 " + cli +
                      " train --image acc_repro_in.png --max-dim 32 "
                      "--min-dim 25 --iters 60 --width 16 --seed 7 "
                      "--out acc_repro_" + t + ".sinir > /dev/null 2>&1") != 0)
            return fail(detail, "train run " + t + " failed");
        if (run_shell("SINIR_THREADS=1 " + cli +
                      " infer --ckpt acc_repro_" + t +
                      ".sinir --image acc_repro_in.png --start-scale 2 "
                      "--out acc_repro_" + t + ".png > /dev/null 2>&1") != 0)
            return fail(detail, "infer run " + t + " failed");
    }
    const std::vector<char> ck_a = file_bytes("acc_repro_a.sinir");
    const std::vector<char> ck_b = file_bytes("acc_repro_b.sinir");
    const std::vector<char> im_a = file_bytes("acc_repro_a.png");
    const std::vector<char> im_b = file_bytes("acc_repro_b.png");
    detail = "ckpt " + std::to_string(ck_a.size()) + " bytes, png " +
             std::to_string(im_a.size()) + " bytes";
    if (ck_a.empty() || im_a.empty()) return fail(detail, "missing outputs");
    if (ck_a != ck_b) return fail(detail, "checkpoints differ");
    if (im_a != im_b) return fail(detail, "images differ");
    for (const char* f :
         {"acc_repro_in.png", "acc_repro_a.sinir", "acc_repro_b.sinir",
          "acc_repro_a.png", "acc_repro_b.png"})
        std::remove(f);
    return true;
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Entry> entries = {
        {1, "gradient-check", criterion_gradients},
        {2, "oracle-equivalence", criterion_oracles},
        {3, "pyramid-geometry", criterion_pyramid},
        {4, "training-convergence", criterion_training},
        {5, "corruption-invariants", criterion_corruption},
        {6, "distortion-trend", criterion_distortion_trend},
        {7, "inference-contracts", criterion_inference},
        {8, "reproducibility", criterion_reproducibility},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = e.run(detail);
        } catch (const std::exception& ex) {
            detail += std::string(detail.empty() ? "" : "; ") +
                      "exception: " + ex.what();
        }
        std::printf("[%s] %d %-22s (%6.1fs)%s%s\n", ok ? "PASS" : "FAIL", e.id,
                    e.name, elapsed_s(t0), detail.empty() ? "" : "  ",
                    detail.c_str());
        std::fflush(stdout);
        failures += ok ? 0 : 1;
    }
    return failures;
}
