#ifndef SINIR_RESAMPLE_HPP
#define SINIR_RESAMPLE_HPP

#include <optional>
#include <utility>
#include <vector>

#include "sinir/tensor.hpp"

namespace sinir {

/// Target height/width pair for resizes that must hit exact dimensions.
using Dims = std::pair<int, int>;

/// Round a fractional pixel count half-up, never below 1.
int round_dim(double v);

/// Separable bicubic interpolation (two-parameter cubic, a = -0.5).
///
/// Edges are handled by clamping sample coordinates. When antialias is set
/// and an axis shrinks, the kernel support on that axis is widened by the
/// inverse scale factor; tap weights are always renormalized to sum 1 per
/// output pixel. Resizing to the identical size with antialias off returns
/// the input unchanged.
ImageTensor bicubic_resize(const ImageTensor& img, int out_h, int out_w,
                           bool antialias = false);

/// Bicubic upsample by factor r (>= 1). When target dims are given, the
/// output hits them exactly; otherwise each axis is rounded half-up.
ImageTensor upsample_by_r(const ImageTensor& img, double r,
                          std::optional<Dims> target_dims = std::nullopt);

/// Ground-truth images for every training scale, ordered coarse to fine,
/// plus the effective per-level scale factor realized after fitting an
/// integer number of levels between min_dim and max_dim.
struct ScalePyramid {
    std::vector<ImageTensor> images;  // coarsest first, full resolution last
    double effective_r = 1.0;
    int num_scales = 0;
    int max_dim = 0;
    int min_dim = 0;

    int levels() const { return static_cast<int>(images.size()); }

    /// Image at a given level; level 0 is the full-resolution original.
    const ImageTensor& level(int n) const { return images[levels() - 1 - n]; }

    const ImageTensor& coarsest() const { return images.front(); }
    const ImageTensor& finest() const { return images.back(); }
};

/// Build the training pyramid. The input is first resized so its longer
/// side equals max_dim, giving the full-resolution level; the number of
/// levels is ceil(ln(max_dim/min_dim)/ln(r_target)) + 2 and the effective
/// scale factor is (max_dim/min_dim)^(1/(levels-1)). Level n is resized
/// directly from the full-resolution image, each axis divided by
/// effective_r^n and rounded half-up.
ScalePyramid build_pyramid(const ImageTensor& img, int max_dim, int min_dim,
                           double r_target, bool antialias = false);

/// Pyramid with a fixed level count and fixed ratio r >= 1, built on the
/// image at its native size (r = 1 repeats the same dimensions at every
/// level). Used by the task presets that bypass the min/max-dim fit.
ScalePyramid build_fixed_pyramid(const ImageTensor& img, int num_scales,
                                 double r, bool antialias = false);

}  // namespace sinir

#endif
