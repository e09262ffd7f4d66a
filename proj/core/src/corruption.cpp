#include "sinir/corruption.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sinir/errors.hpp"
#include "sinir/resample.hpp"

namespace sinir {

CorruptionScheme parse_scheme(const std::string& name) {
    if (name == "pixel-shuffle") return CorruptionScheme::pixel_shuffle;
    if (name == "black") return CorruptionScheme::black_noise;
    if (name == "add-gauss") return CorruptionScheme::additive_gaussian;
    if (name == "replace-gauss") return CorruptionScheme::replacing_gaussian;
    if (name == "patch-shuffle") return CorruptionScheme::patch_shuffle;
    throw ParameterError("unknown corruption scheme '" + name + "'");
}

std::string scheme_name(CorruptionScheme scheme) {
    switch (scheme) {
        case CorruptionScheme::pixel_shuffle: return "pixel-shuffle";
        case CorruptionScheme::black_noise: return "black";
        case CorruptionScheme::additive_gaussian: return "add-gauss";
        case CorruptionScheme::replacing_gaussian: return "replace-gauss";
        case CorruptionScheme::patch_shuffle: return "patch-shuffle";
    }
    throw ParameterError("unknown corruption scheme value");
}

namespace {

constexpr double kNoiseSigma = 0.7071067811865476;  // sqrt(1/2)

// k distinct pixel indices via a partial Fisher-Yates pass.
std::vector<int64_t> pick_sites(int64_t total, int64_t k, Rng& rng) {
    std::vector<int64_t> idx(total);
    for (int64_t i = 0; i < total; ++i) idx[i] = i;
    for (int64_t j = 0; j < k; ++j) {
        const int64_t swap_at =
            j + static_cast<int64_t>(rng.below(static_cast<uint64_t>(total - j)));
        std::swap(idx[j], idx[swap_at]);
    }
    idx.resize(k);
    return idx;
}

double clip_range(double v) { return std::clamp(v, -1.0, 1.0); }

ImageTensor shuffle_patches(const ImageTensor& img, const CorruptionSpec& spec,
                            Rng& rng) {
    const int h = img.height(), w = img.width();
    const int longer = std::max(h, w);
    const int side = round_dim(longer / spec.intensity);
    if (side > std::min(h, w)) {
        throw ParameterError("patch-shuffle: patch side " +
                             std::to_string(side) + " exceeds image " +
                             img.shape_string());
    }
    if (spec.patch_count < 1) {
        throw ParameterError("patch-shuffle: patch count must be positive");
    }

    // Prefer disjoint patches; after 1000 rejected draws, overlap is
    // tolerated rather than looping forever on crowded images.
    struct Pos { int top, left; };
    std::vector<Pos> pos;
    pos.reserve(spec.patch_count);
    int rejected = 0;
    while (static_cast<int>(pos.size()) < spec.patch_count) {
        const int top = static_cast<int>(rng.below(h - side + 1));
        const int left = static_cast<int>(rng.below(w - side + 1));
        bool overlaps = false;
        if (rejected < 1000) {
            for (const Pos& q : pos) {
                if (top < q.top + side && q.top < top + side &&
                    left < q.left + side && q.left < left + side) {
                    overlaps = true;
                    break;
                }
            }
        }
        if (overlaps) {
            ++rejected;
        } else {
            pos.push_back({top, left});
        }
    }

    std::vector<int> perm(pos.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    for (size_t j = 0; j + 1 < perm.size(); ++j) {
        const size_t swap_at = j + rng.below(perm.size() - j);
        std::swap(perm[j], perm[swap_at]);
    }

    // Snapshot every patch before writing so overlapping sources stay
    // consistent; writes land in ascending destination order.
    const size_t patch_values =
        static_cast<size_t>(img.channels()) * side * side;
    std::vector<std::vector<double>> contents(pos.size());
    for (size_t j = 0; j < pos.size(); ++j) {
        contents[j].reserve(patch_values);
        for (int c = 0; c < img.channels(); ++c) {
            for (int y = 0; y < side; ++y) {
                for (int x = 0; x < side; ++x) {
                    contents[j].push_back(
                        img.at(c, pos[j].top + y, pos[j].left + x));
                }
            }
        }
    }
    ImageTensor out = img;
    for (size_t j = 0; j < pos.size(); ++j) {
        const std::vector<double>& src = contents[perm[j]];
        size_t n = 0;
        for (int c = 0; c < img.channels(); ++c) {
            for (int y = 0; y < side; ++y) {
                for (int x = 0; x < side; ++x) {
                    out.at(c, pos[j].top + y, pos[j].left + x) = src[n++];
                }
            }
        }
    }
    return out;
}

}  // namespace

ImageTensor corrupt(const ImageTensor& img, const CorruptionSpec& spec,
                    Rng& rng) {
    if (spec.intensity < 0.0) {
        throw ParameterError("corrupt: intensity must be non-negative");
    }
    if (spec.intensity == 0.0) {
        return img;
    }
    if (spec.scheme == CorruptionScheme::patch_shuffle) {
        return shuffle_patches(img, spec, rng);
    }

    const int64_t total = static_cast<int64_t>(img.height()) * img.width();
    int64_t k = std::max<int64_t>(
        2, std::llround(spec.intensity / 100.0 * static_cast<double>(total)));
    if (k > total) k = total;
    if (spec.scheme == CorruptionScheme::pixel_shuffle && total < 2) {
        throw ParameterError(
            "pixel-shuffle: image must have at least two pixels");
    }

    const std::vector<int64_t> sites = pick_sites(total, k, rng);
    ImageTensor out = img;
    const int w = img.width();
    const size_t plane = static_cast<size_t>(img.height()) * w;

    switch (spec.scheme) {
        case CorruptionScheme::pixel_shuffle: {
            std::vector<int64_t> moved = sites;
            for (size_t j = 0; j + 1 < moved.size(); ++j) {
                const size_t swap_at = j + rng.below(moved.size() - j);
                std::swap(moved[j], moved[swap_at]);
            }
            for (size_t j = 0; j < sites.size(); ++j) {
                for (int c = 0; c < img.channels(); ++c) {
                    out.data()[c * plane + sites[j]] =
                        img.data()[c * plane + moved[j]];
                }
            }
            break;
        }
        case CorruptionScheme::black_noise:
            for (int64_t s : sites) {
                for (int c = 0; c < img.channels(); ++c) {
                    out.data()[c * plane + s] = -1.0;
                }
            }
            break;
        case CorruptionScheme::additive_gaussian:
            for (int64_t s : sites) {
                for (int c = 0; c < img.channels(); ++c) {
                    double& v = out.data()[c * plane + s];
                    v = clip_range(v + kNoiseSigma * rng.normal());
                }
            }
            break;
        case CorruptionScheme::replacing_gaussian:
            for (int64_t s : sites) {
                for (int c = 0; c < img.channels(); ++c) {
                    out.data()[c * plane + s] =
                        clip_range(kNoiseSigma * rng.normal());
                }
            }
            break;
        case CorruptionScheme::patch_shuffle:
            break;  // handled above
    }
    return out;
}

}  // namespace sinir
