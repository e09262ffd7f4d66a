#ifndef SINIR_INFERENCE_HPP
#define SINIR_INFERENCE_HPP

#include <optional>

#include "sinir/tensor.hpp"
#include "sinir/trainer.hpp"

namespace sinir {

/// Inference-time settings the CLI can route in from a config file.
struct InferConfig {
    int start_scale = 0;
    double sr_factor = 4.0;
    double feather_sigma = 2.0;
};

/// Number of upsample+refine steps needed to reach `factor` when each step
/// grows the image by at most `r`.
int sr_step_count(double factor, double r);

/// Feed an image through the cascade starting at scale n (0 = finest =
/// identity-size refinement, larger n = stronger restructuring). Level
/// dimensions are recomputed from the given image's own size with the
/// checkpoint's ratio, so the image does not need the training dimensions.
/// Output always matches the input's dimensions.
ImageTensor manipulate(const ImageTensor& img, const ModelCheckpoint& ckpt,
                       int start_scale);

/// Grow an image by `factor` (> 1): repeated bicubic upsampling by the
/// checkpoint's ratio, each step refined by the finest net; the last step
/// shrinks its ratio so the cumulative growth lands exactly on factor.
ImageTensor super_resolve(const ImageTensor& img, const ModelCheckpoint& ckpt,
                          double factor);

/// Blend a manipulated image over the original under a mask (1 channel,
/// same spatial dims, values in [0, 1]; 1 selects `manipulated`). The mask
/// edge is feathered by a Gaussian of the given sigma; sigma 0 keeps hard
/// edges. Output is a pixelwise convex combination of the two inputs.
ImageTensor composite(const ImageTensor& manipulated,
                      const ImageTensor& original, const ImageTensor& mask,
                      double feather_sigma = 2.0);

}  // namespace sinir

#endif
