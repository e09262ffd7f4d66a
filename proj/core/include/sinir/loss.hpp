#ifndef SINIR_LOSS_HPP
#define SINIR_LOSS_HPP

#include "sinir/tensor.hpp"

namespace sinir {

/// Windowed-SSIM parameters. The window is an 11-tap Gaussian (sigma 1.5)
/// applied separably with reflected borders, so every pixel owns a local
/// statistic and the gradient covers the full image. Stabilizers use the
/// dynamic range of [-1, 1] data: c1 = (k1*L)^2, c2 = (k2*L)^2 with L = 2.
struct SsimConfig {
    int window_size = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 2.0;
};

/// Mean squared error over all values. When grad_a is given it receives
/// d(mse)/da.
double mse(const ImageTensor& a, const ImageTensor& b,
           ImageTensor* grad_a = nullptr);

/// Mean structural similarity between a and b, in [-1, 1], 1 iff a == b.
/// Statistics are per channel; the score averages the per-pixel similarity
/// map over channels and pixels. When grad_a is given it receives
/// d(ssim)/da, computed analytically through the windowed moments. Requires
/// both spatial dims >= window_size.
double ssim(const ImageTensor& a, const ImageTensor& b,
            ImageTensor* grad_a = nullptr, const SsimConfig& cfg = {});

/// Training objective: mse(a, b) + ssim_weight * (1 - ssim(a, b)).
/// grad_a receives the combined gradient wrt a.
double rec_loss(const ImageTensor& a, const ImageTensor& b,
                ImageTensor* grad_a = nullptr, double ssim_weight = 1.0);

/// Separable Gaussian filter with reflected borders; kernel length
/// window_size, standard deviation sigma. Exposed for the metric suite.
ImageTensor gaussian_filter(const ImageTensor& img, int window_size,
                            double sigma);

}  // namespace sinir

#endif
