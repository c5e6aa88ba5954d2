#include "darts271/random.hpp"

#include "darts271/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string_view>

namespace darts271 {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

// xoshiro256** seeded through splitmix64 over (seed, stream).
RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {
    std::uint64_t x = seed;
    const std::uint64_t a = splitmix64(x);
    std::uint64_t y = stream ^ a;
    for (auto& s : state_) s = splitmix64(y) ^ splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

RandomSource::result_type RandomSource::operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
}

std::uint64_t hash_seed(std::string_view text) noexcept {
    // FNV-1a followed by a splitmix finalizer.
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return splitmix64(h);
}

CategoricalSampler::CategoricalSampler(std::span<const double> weights) {
    if (weights.empty()) throw Error(ErrorCode::InvalidWeights, "empty weight vector");
    double total = 0.0;
    cumulative_.reserve(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double w = weights[i];
        if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::InvalidWeights, "negative or non-finite weight");
        total += w;
        cumulative_.push_back(total);
        if (w > 0.0) last_positive_ = i;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidWeights, "weights do not sum to 1");
}

std::size_t CategoricalSampler::operator()(RandomSource& source) const noexcept {
    const double u = source.uniform() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto index = static_cast<std::size_t>(it - cumulative_.begin());
    // Rounding can push u past the last bucket or onto a zero-weight tail.
    return std::min(index, last_positive_);
}

std::size_t sample_categorical(RandomSource& source, std::span<const double> weights) {
    return CategoricalSampler{weights}(source);
}

} // namespace darts271
