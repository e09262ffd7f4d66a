#ifndef SINIR_OPTIM_HPP
#define SINIR_OPTIM_HPP

#include <cstdint>
#include <vector>

namespace sinir {

struct AdamConfig {
    double lr = 1e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First/second moment accumulators for one parameter group list. A state
/// is bound to the parameter shapes it was created with; training allocates
/// a fresh one per scale.
struct AdamState {
    AdamConfig config;
    std::int64_t step_count = 0;
    struct Moments {
        std::vector<double> m;
        std::vector<double> v;
    };
    std::vector<Moments> moments;
};

AdamState make_adam_state(const std::vector<size_t>& param_sizes,
                          const AdamConfig& config);

/// One bias-corrected update. params and grads must align index-for-index
/// with the sizes the state was created from.
void adam_step(const std::vector<std::vector<double>*>& params,
               const std::vector<const std::vector<double>*>& grads,
               AdamState& state);

/// Exact binary round-trip for optimizer state (doubles serialized
/// bit-for-bit, little-endian).
std::vector<std::uint8_t> serialize_adam_state(const AdamState& state);
AdamState parse_adam_state(const std::vector<std::uint8_t>& bytes);

}  // namespace sinir

#endif
