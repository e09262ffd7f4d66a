#include "sinir/resample.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sinir/errors.hpp"
#include "sinir/parallel.hpp"

namespace sinir {

namespace {

// Two-parameter cubic with a = -0.5 (Catmull-Rom). Zero outside |x| < 2.
double cubic_kernel(double x) {
    x = std::fabs(x);
    if (x < 1.0) {
        return (1.5 * x - 2.5) * x * x + 1.0;
    }
    if (x < 2.0) {
        return ((-0.5 * x + 2.5) * x - 4.0) * x + 2.0;
    }
    return 0.0;
}

struct AxisTaps {
    int first = 0;                 // index of the first source tap (clamped later)
    std::vector<double> weights;   // normalized to sum 1
};

// Tap table for one axis. Source coordinates use the center-aligned mapping
// src = (dst + 0.5) * in/out - 0.5. On a shrinking axis with antialias the
// kernel is evaluated at d * out/in, widening its footprint by in/out.
std::vector<AxisTaps> compute_taps(int in_size, int out_size, bool antialias) {
    const double step = static_cast<double>(in_size) / out_size;
    double kernel_scale = 1.0;
    if (antialias && out_size < in_size) {
        kernel_scale = static_cast<double>(out_size) / in_size;
    }
    const double support = 2.0 / kernel_scale;

    std::vector<AxisTaps> taps(out_size);
    for (int d = 0; d < out_size; ++d) {
        const double center = (d + 0.5) * step - 0.5;
        const int lo = static_cast<int>(std::ceil(center - support));
        const int hi = static_cast<int>(std::floor(center + support));
        AxisTaps t;
        t.first = lo;
        t.weights.resize(hi - lo + 1);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) {
            const double w = cubic_kernel((center - j) * kernel_scale);
            t.weights[j - lo] = w;
            sum += w;
        }
        for (double& w : t.weights) w /= sum;
        taps[d] = std::move(t);
    }
    return taps;
}

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

}  // namespace

int round_dim(double v) {
    return std::max(1, static_cast<int>(std::floor(v + 0.5)));
}

ImageTensor bicubic_resize(const ImageTensor& img, int out_h, int out_w,
                           bool antialias) {
    if (out_h < 1 || out_w < 1) {
        throw DimensionError("bicubic_resize: target " + std::to_string(out_h) +
                             "x" + std::to_string(out_w) +
                             " must be at least 1x1");
    }
    if (out_h == img.height() && out_w == img.width() && !antialias) {
        return img;
    }

    const int c_n = img.channels();
    const int in_h = img.height();
    const int in_w = img.width();
    const auto x_taps = compute_taps(in_w, out_w, antialias);
    const auto y_taps = compute_taps(in_h, out_h, antialias);

    // Horizontal pass, then vertical.
    ImageTensor mid(c_n, in_h, out_w);
    parallel_for(static_cast<int64_t>(c_n) * in_h, [&](int64_t row) {
        const int c = static_cast<int>(row / in_h);
        const int y = static_cast<int>(row % in_h);
        for (int x = 0; x < out_w; ++x) {
            const AxisTaps& t = x_taps[x];
            double acc = 0.0;
            for (size_t k = 0; k < t.weights.size(); ++k) {
                const int sx = clamp_index(t.first + static_cast<int>(k), in_w);
                acc += t.weights[k] * img.at(c, y, sx);
            }
            mid.at(c, y, x) = acc;
        }
    });

    ImageTensor out(c_n, out_h, out_w);
    parallel_for(static_cast<int64_t>(c_n) * out_h, [&](int64_t row) {
        const int c = static_cast<int>(row / out_h);
        const int y = static_cast<int>(row % out_h);
        const AxisTaps& t = y_taps[y];
        for (int x = 0; x < out_w; ++x) {
            double acc = 0.0;
            for (size_t k = 0; k < t.weights.size(); ++k) {
                const int sy = clamp_index(t.first + static_cast<int>(k), in_h);
                acc += t.weights[k] * mid.at(c, sy, x);
            }
            out.at(c, y, x) = acc;
        }
    });
    return out;
}

ImageTensor upsample_by_r(const ImageTensor& img, double r,
                          std::optional<Dims> target_dims) {
    if (r < 1.0) {
        throw ParameterError("upsample_by_r: factor " + std::to_string(r) +
                             " must be at least 1");
    }
    int out_h, out_w;
    if (target_dims) {
        out_h = target_dims->first;
        out_w = target_dims->second;
    } else {
        out_h = round_dim(img.height() * r);
        out_w = round_dim(img.width() * r);
    }
    return bicubic_resize(img, out_h, out_w, /*antialias=*/false);
}

namespace {

ScalePyramid build_levels(const ImageTensor& base, int num_scales,
                          double effective_r, bool antialias) {
    ScalePyramid pyr;
    pyr.num_scales = num_scales;
    pyr.effective_r = effective_r;
    pyr.images.resize(num_scales, ImageTensor(1, 1, 1));
    // images[0] is the coarsest level (n = num_scales - 1).
    pyr.images[num_scales - 1] = base;
    for (int n = 1; n < num_scales; ++n) {
        const double div = std::pow(effective_r, n);
        const int h = round_dim(base.height() / div);
        const int w = round_dim(base.width() / div);
        pyr.images[num_scales - 1 - n] = bicubic_resize(base, h, w, antialias);
    }
    return pyr;
}

}  // namespace

ScalePyramid build_pyramid(const ImageTensor& img, int max_dim, int min_dim,
                           double r_target, bool antialias) {
    if (min_dim < 1 || max_dim < min_dim) {
        throw ParameterError("build_pyramid: need max_dim >= min_dim >= 1, got " +
                             std::to_string(max_dim) + "/" +
                             std::to_string(min_dim));
    }
    if (!(r_target > 1.0)) {
        throw ParameterError("build_pyramid: scale factor must exceed 1");
    }

    // Fit the longer side to max_dim, preserving aspect ratio.
    ImageTensor base(1, 1, 1);
    const int longer = std::max(img.height(), img.width());
    if (longer == max_dim) {
        base = img;
    } else {
        const double s = static_cast<double>(max_dim) / longer;
        int h, w;
        if (img.height() >= img.width()) {
            h = max_dim;
            w = round_dim(img.width() * s);
        } else {
            w = max_dim;
            h = round_dim(img.height() * s);
        }
        base = bicubic_resize(img, h, w, antialias);
    }

    // Small backoff inside ceil absorbs float noise when the ratio is an
    // exact power of r_target.
    const double k = std::log(static_cast<double>(max_dim) / min_dim) /
                     std::log(r_target);
    const int num_scales = static_cast<int>(std::ceil(k - 1e-12)) + 2;
    const double effective_r =
        std::pow(static_cast<double>(max_dim) / min_dim,
                 1.0 / (num_scales - 1));

    ScalePyramid pyr = build_levels(base, num_scales, effective_r, antialias);
    pyr.max_dim = max_dim;
    pyr.min_dim = min_dim;
    return pyr;
}

ScalePyramid build_fixed_pyramid(const ImageTensor& img, int num_scales,
                                 double r, bool antialias) {
    if (num_scales < 1) {
        throw ParameterError("build_fixed_pyramid: need at least 1 scale");
    }
    if (r < 1.0) {
        throw ParameterError("build_fixed_pyramid: ratio must be at least 1");
    }
    ScalePyramid pyr = build_levels(img, num_scales, r, antialias);
    pyr.max_dim = std::max(img.height(), img.width());
    pyr.min_dim = std::min(pyr.coarsest().height(), pyr.coarsest().width());
    return pyr;
}

}  // namespace sinir
