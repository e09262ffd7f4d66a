#ifndef SINIR_CORRUPTION_HPP
#define SINIR_CORRUPTION_HPP

#include <string>

#include "sinir/rng.hpp"
#include "sinir/tensor.hpp"

namespace sinir {

enum class CorruptionScheme {
    pixel_shuffle,       // permute the RGB values of the selected pixels
    black_noise,         // selected pixels forced to the bottom of range
    additive_gaussian,   // selected pixels += N(0, 0.5), clipped to range
    replacing_gaussian,  // selected pixels  = N(0, 0.5), clipped to range
    patch_shuffle,       // square patches swap contents
};

/// Parse the canonical scheme names used on the command line:
/// pixel-shuffle | black | add-gauss | replace-gauss | patch-shuffle.
CorruptionScheme parse_scheme(const std::string& name);
std::string scheme_name(CorruptionScheme scheme);

/// For the pixel schemes, intensity is the percentage of pixels touched:
/// the site count is max(2, round(intensity/100 * H * W)) once intensity is
/// nonzero, so even vanishing rates perturb two pixels. For patch_shuffle,
/// intensity divides the longer side to give the patch edge length.
/// intensity == 0 always leaves the image untouched.
struct CorruptionSpec {
    CorruptionScheme scheme = CorruptionScheme::pixel_shuffle;
    double intensity = 5e-4;
    int patch_count = 50;
};

/// Apply one fresh corruption draw. The input is never modified; RNG
/// consumption order is fixed (site selection, then per-site values in
/// selection order, channel-major within a site) so equal seeds reproduce
/// equal corruptions.
ImageTensor corrupt(const ImageTensor& img, const CorruptionSpec& spec,
                    Rng& rng);

}  // namespace sinir

#endif
