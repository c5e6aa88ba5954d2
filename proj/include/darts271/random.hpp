#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

namespace darts271 {

/// Seeded random stream. Streams are keyed by (seed, stream id); equal keys
/// produce identical sequences and distinct keys are statistically independent.
/// Satisfies UniformRandomBitGenerator.
class RandomSource {
public:
    using result_type = std::uint64_t;

    RandomSource(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept;

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_[4];
};

/// Stable 64-bit mix of a string, for deriving seeds from identifiers.
std::uint64_t hash_seed(std::string_view text) noexcept;

/// Precomputed cumulative table for repeated categorical draws.
class CategoricalSampler {
public:
    /// Throws InvalidWeights unless weights are nonnegative, finite and sum to 1 within 1e-9.
    explicit CategoricalSampler(std::span<const double> weights);

    std::size_t operator()(RandomSource& source) const noexcept;
    std::size_t size() const noexcept { return cumulative_.size(); }

private:
    std::vector<double> cumulative_;
    std::size_t last_positive_ = 0;
};

std::size_t sample_categorical(RandomSource& source, std::span<const double> weights);

} // namespace darts271
