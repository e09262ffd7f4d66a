#include "sinir/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sinir/errors.hpp"
#include "sinir/loss.hpp"

namespace sinir {

namespace {

// Relative weights of the five dyadic levels; when fewer levels fit, the
// leading entries are renormalized to sum 1.
constexpr double kLevelWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};
constexpr int kMinSide = 11;  // SSIM window footprint

struct LevelStats {
    double mean_ssim = 0.0;
    double mean_cs = 0.0;
};

LevelStats level_stats(const ImageTensor& a, const ImageTensor& b) {
    const SsimConfig cfg;
    const double c1 = cfg.k1 * cfg.dynamic_range * cfg.k1 * cfg.dynamic_range;
    const double c2 = cfg.k2 * cfg.dynamic_range * cfg.k2 * cfg.dynamic_range;
    const ImageTensor ma = gaussian_filter(a, cfg.window_size, cfg.sigma);
    const ImageTensor mb = gaussian_filter(b, cfg.window_size, cfg.sigma);
    const ImageTensor a2 = gaussian_filter(mul(a, a), cfg.window_size, cfg.sigma);
    const ImageTensor b2 = gaussian_filter(mul(b, b), cfg.window_size, cfg.sigma);
    const ImageTensor ab = gaussian_filter(mul(a, b), cfg.window_size, cfg.sigma);
    const size_t n = a.size();
    double ssim_sum = 0.0, cs_sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double ua = ma.data()[i], ub = mb.data()[i];
        const double va = a2.data()[i] - ua * ua;
        const double vb = b2.data()[i] - ub * ub;
        const double cov = ab.data()[i] - ua * ub;
        const double cs = (2.0 * cov + c2) / (va + vb + c2);
        const double lum = (2.0 * ua * ub + c1) / (ua * ua + ub * ub + c1);
        cs_sum += cs;
        ssim_sum += lum * cs;
    }
    return {ssim_sum / static_cast<double>(n), cs_sum / static_cast<double>(n)};
}

// 2x2 mean pooling with stride 2; odd trailing rows/columns are dropped.
ImageTensor half_pool(const ImageTensor& img) {
    const int h = img.height() / 2, w = img.width() / 2;
    ImageTensor out(img.channels(), h, w);
    for (int c = 0; c < img.channels(); ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                out.at(c, y, x) =
                    0.25 * (img.at(c, 2 * y, 2 * x) + img.at(c, 2 * y, 2 * x + 1) +
                            img.at(c, 2 * y + 1, 2 * x) +
                            img.at(c, 2 * y + 1, 2 * x + 1));
            }
        }
    }
    return out;
}

double multi_scale_ssim(const ImageTensor& a, const ImageTensor& b,
                        int* levels_used) {
    int levels = 1;
    {
        int th = a.height() / 2, tw = a.width() / 2;
        while (levels < 5 && std::min(th, tw) >= kMinSide) {
            ++levels;
            th /= 2;
            tw /= 2;
        }
    }
    double weight_sum = 0.0;
    for (int l = 0; l < levels; ++l) weight_sum += kLevelWeights[l];

    ImageTensor cur_a = a, cur_b = b;
    double value = 1.0;
    for (int l = 0; l < levels; ++l) {
        const LevelStats st = level_stats(cur_a, cur_b);
        // Slightly negative means can occur on adversarial pairs; clamp
        // before the fractional power.
        const double term =
            std::max(l + 1 == levels ? st.mean_ssim : st.mean_cs, 0.0);
        value *= std::pow(term, kLevelWeights[l] / weight_sum);
        if (l + 1 < levels) {
            cur_a = half_pool(cur_a);
            cur_b = half_pool(cur_b);
        }
    }
    if (levels_used) *levels_used = levels;
    return value;
}

}  // namespace

MetricReport evaluate(const ImageTensor& reference, const ImageTensor& test) {
    require_same_shape(reference, test, "evaluate");
    MetricReport r;
    r.ssim = ssim(reference, test);
    r.ms_ssim = multi_scale_ssim(reference, test, &r.ms_ssim_levels);
    // Report on the 8-bit scale: a unit step in [-1, 1] spans 127.5 counts.
    r.rmse = std::sqrt(mse(reference, test)) * 127.5;
    return r;
}

TrendReport trend_check(std::vector<SweepEntry> entries) {
    if (entries.size() < 3) {
        throw ParameterError("trend_check: need at least three sweep points");
    }
    std::sort(entries.begin(), entries.end(),
              [](const SweepEntry& a, const SweepEntry& b) {
                  return a.shuffle_pct < b.shuffle_pct;
              });
    TrendReport rep;
    rep.ordered = entries;
    rep.monotone_non_increasing = true;
    std::ostringstream detail;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (i > 0) {
            detail << " -> ";
            if (entries[i].rmse > entries[i - 1].rmse) {
                rep.monotone_non_increasing = false;
            }
        }
        detail << "rmse(" << entries[i].shuffle_pct << ")=" << entries[i].rmse;
    }
    rep.detail = detail.str();
    return rep;
}

}  // namespace sinir
