#include "sinir/loss.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "sinir/errors.hpp"

namespace sinir {

namespace {

// Multi-bounce mirror (border pixel not repeated); valid for any offset.
int reflect_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i = ((i % period) + period) % period;
    return i < n ? i : period - i;
}

std::vector<double> gaussian_taps(int size, double sigma) {
    std::vector<double> k(size);
    const double center = (size - 1) / 2.0;
    double sum = 0.0;
    for (int i = 0; i < size; ++i) {
        const double d = i - center;
        k[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
}

ImageTensor filter_axis(const ImageTensor& in, const std::vector<double>& k,
                        bool horizontal) {
    const int r = static_cast<int>(k.size()) / 2;
    const int h = in.height(), w = in.width();
    ImageTensor out(in.channels(), h, w);
    for (int c = 0; c < in.channels(); ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (size_t t = 0; t < k.size(); ++t) {
                    const int off = static_cast<int>(t) - r;
                    const double v =
                        horizontal
                            ? in.at(c, y, reflect_index(x + off, w))
                            : in.at(c, reflect_index(y + off, h), x);
                    acc += k[t] * v;
                }
                out.at(c, y, x) = acc;
            }
        }
    }
    return out;
}

// Adjoint of filter_axis: scatter each output-side weight back onto the
// mirrored source position.
ImageTensor filter_axis_adjoint(const ImageTensor& g,
                                const std::vector<double>& k,
                                bool horizontal) {
    const int r = static_cast<int>(k.size()) / 2;
    const int h = g.height(), w = g.width();
    ImageTensor out(g.channels(), h, w);
    for (int c = 0; c < g.channels(); ++c) {
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const double gv = g.at(c, y, x);
                for (size_t t = 0; t < k.size(); ++t) {
                    const int off = static_cast<int>(t) - r;
                    if (horizontal) {
                        out.at(c, y, reflect_index(x + off, w)) += k[t] * gv;
                    } else {
                        out.at(c, reflect_index(y + off, h), x) += k[t] * gv;
                    }
                }
            }
        }
    }
    return out;
}

ImageTensor filter2(const ImageTensor& img, const std::vector<double>& k) {
    return filter_axis(filter_axis(img, k, /*horizontal=*/true), k,
                       /*horizontal=*/false);
}

ImageTensor filter2_adjoint(const ImageTensor& g, const std::vector<double>& k) {
    return filter_axis_adjoint(filter_axis_adjoint(g, k, /*horizontal=*/false),
                               k, /*horizontal=*/true);
}

}  // namespace

ImageTensor gaussian_filter(const ImageTensor& img, int window_size,
                            double sigma) {
    if (window_size < 1 || window_size % 2 == 0) {
        throw ParameterError("gaussian_filter: window size must be odd");
    }
    if (!(sigma > 0.0)) {
        throw ParameterError("gaussian_filter: sigma must be positive");
    }
    return filter2(img, gaussian_taps(window_size, sigma));
}

double mse(const ImageTensor& a, const ImageTensor& b, ImageTensor* grad_a) {
    require_same_shape(a, b, "mse");
    const size_t n = a.size();
    const double* pa = a.data();
    const double* pb = b.data();
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double d = pa[i] - pb[i];
        sum += d * d;
    }
    const double value = sum / static_cast<double>(n);
    if (grad_a) {
        *grad_a = ImageTensor(a.channels(), a.height(), a.width());
        double* g = grad_a->data();
        const double scale = 2.0 / static_cast<double>(n);
        for (size_t i = 0; i < n; ++i) g[i] = scale * (pa[i] - pb[i]);
    }
    return value;
}

double ssim(const ImageTensor& a, const ImageTensor& b, ImageTensor* grad_a,
            const SsimConfig& cfg) {
    require_same_shape(a, b, "ssim");
    if (a.height() < cfg.window_size || a.width() < cfg.window_size) {
        throw DimensionError("ssim: image " + a.shape_string() +
                             " smaller than the " +
                             std::to_string(cfg.window_size) + "-tap window");
    }
    const double c1 = cfg.k1 * cfg.dynamic_range * cfg.k1 * cfg.dynamic_range;
    const double c2 = cfg.k2 * cfg.dynamic_range * cfg.k2 * cfg.dynamic_range;
    const auto taps = gaussian_taps(cfg.window_size, cfg.sigma);

    const ImageTensor ma = filter2(a, taps);
    const ImageTensor mb = filter2(b, taps);
    const ImageTensor a2 = filter2(mul(a, a), taps);
    const ImageTensor b2 = filter2(mul(b, b), taps);
    const ImageTensor ab = filter2(mul(a, b), taps);

    const size_t n = a.size();
    const double inv_n = 1.0 / static_cast<double>(n);
    double sum = 0.0;

    ImageTensor g_ma(a.channels(), a.height(), a.width());
    ImageTensor g_a2(a.channels(), a.height(), a.width());
    ImageTensor g_ab(a.channels(), a.height(), a.width());

    for (size_t i = 0; i < n; ++i) {
        const double ua = ma.data()[i], ub = mb.data()[i];
        const double va = a2.data()[i] - ua * ua;
        const double vb = b2.data()[i] - ub * ub;
        const double cov = ab.data()[i] - ua * ub;
        const double n1 = 2.0 * ua * ub + c1;
        const double n2 = 2.0 * cov + c2;
        const double d1 = ua * ua + ub * ub + c1;
        const double d2 = va + vb + c2;
        const double denom = d1 * d2;
        const double s = n1 * n2 / denom;
        sum += s;
        if (grad_a) {
            const double dn1 = inv_n * n2 / denom;
            const double dn2 = inv_n * n1 / denom;
            const double dd1 = -inv_n * s / d1;
            const double dd2 = -inv_n * s / d2;
            g_ma.data()[i] = dn1 * 2.0 * ub + dd1 * 2.0 * ua +
                             dn2 * (-2.0 * ub) + dd2 * (-2.0 * ua);
            g_a2.data()[i] = dd2;
            g_ab.data()[i] = 2.0 * dn2;
        }
    }
    const double value = sum * inv_n;

    if (grad_a) {
        const ImageTensor ta = filter2_adjoint(g_ma, taps);
        const ImageTensor t2 = filter2_adjoint(g_a2, taps);
        const ImageTensor tb = filter2_adjoint(g_ab, taps);
        *grad_a = ImageTensor(a.channels(), a.height(), a.width());
        double* g = grad_a->data();
        for (size_t i = 0; i < n; ++i) {
            g[i] = ta.data()[i] + 2.0 * a.data()[i] * t2.data()[i] +
                   b.data()[i] * tb.data()[i];
        }
    }
    return value;
}

double rec_loss(const ImageTensor& a, const ImageTensor& b,
                ImageTensor* grad_a, double ssim_weight) {
    if (!grad_a) {
        return mse(a, b) + ssim_weight * (1.0 - ssim(a, b));
    }
    ImageTensor mse_grad(1, 1, 1), ssim_grad(1, 1, 1);
    const double m = mse(a, b, &mse_grad);
    const double s = ssim(a, b, &ssim_grad);
    *grad_a = ImageTensor(a.channels(), a.height(), a.width());
    double* g = grad_a->data();
    for (size_t i = 0; i < a.size(); ++i) {
        g[i] = mse_grad.data()[i] - ssim_weight * ssim_grad.data()[i];
    }
    return m + ssim_weight * (1.0 - s);
}

}  // namespace sinir
