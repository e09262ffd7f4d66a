#include "sinir/inference.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sinir/errors.hpp"
#include "sinir/loss.hpp"
#include "sinir/resample.hpp"

namespace sinir {

int sr_step_count(double factor, double r) {
    if (!(factor > 1.0)) {
        throw ParameterError("super-resolution factor must exceed 1");
    }
    if (!(r > 1.0)) {
        throw ParameterError(
            "super-resolution needs a checkpoint trained with ratio > 1");
    }
    // Backoff absorbs float noise when factor is an exact power of r.
    return static_cast<int>(std::ceil(std::log(factor) / std::log(r) - 1e-9));
}

ImageTensor manipulate(const ImageTensor& img, const ModelCheckpoint& ckpt,
                       int start_scale) {
    const int top = ckpt.num_scales() - 1;
    if (start_scale < 0 || start_scale > top) {
        throw ParameterError("manipulate: start scale " +
                             std::to_string(start_scale) +
                             " outside [0, " + std::to_string(top) + "]");
    }
    const double r = ckpt.effective_r;

    // Per-level dims follow the inference image, not the training image.
    std::vector<Dims> dims(start_scale + 1);
    for (int n = 0; n <= start_scale; ++n) {
        const double div = std::pow(r, n);
        dims[n] = {round_dim(img.height() / div), round_dim(img.width() / div)};
    }

    // The entry downsample mirrors the training pyramid's antialias choice
    // so the coarsest net sees the distribution it was trained on.
    ImageTensor x = (start_scale == 0)
                        ? img
                        : bicubic_resize(img, dims[start_scale].first,
                                         dims[start_scale].second,
                                         ckpt.config.antialias_downsample);
    x = net_forward(x, ckpt.net_for_level(start_scale));
    for (int n = start_scale - 1; n >= 0; --n) {
        x = net_forward(upsample_by_r(x, r, dims[n]), ckpt.net_for_level(n));
    }
    return x;
}

ImageTensor super_resolve(const ImageTensor& img, const ModelCheckpoint& ckpt,
                          double factor) {
    const double r = ckpt.effective_r;
    const int steps = sr_step_count(factor, r);
    const RefineNet& finest = ckpt.net_for_level(0);

    ImageTensor x = img;
    for (int s = 1; s <= steps; ++s) {
        // Cumulative growth after this step; the final step lands exactly
        // on the requested factor.
        const double grown = (s < steps) ? std::pow(r, s) : factor;
        const Dims target{round_dim(img.height() * grown),
                          round_dim(img.width() * grown)};
        const double step_r =
            static_cast<double>(target.first) / x.height();
        x = net_forward(upsample_by_r(x, std::max(step_r, 1.0), target),
                        finest);
    }
    return x;
}

ImageTensor composite(const ImageTensor& manipulated,
                      const ImageTensor& original, const ImageTensor& mask,
                      double feather_sigma) {
    require_same_shape(manipulated, original, "composite");
    if (mask.channels() != 1 || mask.height() != manipulated.height() ||
        mask.width() != manipulated.width()) {
        throw ShapeError("composite: mask " + mask.shape_string() +
                         " must be 1x" + std::to_string(manipulated.height()) +
                         "x" + std::to_string(manipulated.width()));
    }
    if (feather_sigma < 0.0) {
        throw ParameterError("composite: feather sigma must be non-negative");
    }

    ImageTensor blend = mask;
    if (feather_sigma > 0.0) {
        const int radius = static_cast<int>(std::ceil(3.0 * feather_sigma));
        blend = gaussian_filter(mask, 2 * radius + 1, feather_sigma);
    }

    ImageTensor out(manipulated.channels(), manipulated.height(),
                    manipulated.width());
    const size_t plane =
        static_cast<size_t>(manipulated.height()) * manipulated.width();
    for (int c = 0; c < manipulated.channels(); ++c) {
        const double* m = manipulated.data() + c * plane;
        const double* o = original.data() + c * plane;
        double* dst = out.data() + c * plane;
        for (size_t i = 0; i < plane; ++i) {
            const double a = blend.data()[i];
            dst[i] = a * m[i] + (1.0 - a) * o[i];
        }
    }
    return out;
}

}  // namespace sinir
