#ifndef SINIR_RNG_HPP
#define SINIR_RNG_HPP

#include <array>
#include <cstdint>
#include <vector>

namespace sinir {

/// Deterministic pseudo-random source: xoshiro256** seeded through splitmix64.
///
/// Both generators are fully specified by their published constants, so a
/// fixed seed reproduces the same draw sequence on every platform and
/// compiler. The standard library engines are deliberately not used here:
/// std::normal_distribution and friends are free to differ between
/// implementations, which would break bit-exact reproducibility of training.
///
/// A generator is single-owner. Use split() to derive an independent stream
/// instead of sharing one instance.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    /// Next raw 64-bit word.
    std::uint64_t next_u64();

    /// Uniform draw in [0, 1) with 53 bits of mantissa.
    double uniform();

    /// n uniform draws in [0, 1); advances state by exactly n words.
    std::vector<double> uniform_sequence(std::size_t n);

    /// Unbiased uniform integer in [0, bound). bound must be > 0.
    std::uint64_t below(std::uint64_t bound);

    /// Standard normal draw via Box-Muller; consumes exactly two words.
    double normal();

    /// Derive an independent generator. Consumes one word of this stream.
    Rng split();

private:
    std::array<std::uint64_t, 4> state_;
};

}  // namespace sinir

#endif
