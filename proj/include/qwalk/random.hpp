#pragma once

#include <cstdint>
#include <limits>

namespace qwalk {

using Seed = std::uint64_t;

namespace detail {

// SplitMix64 finalizer: a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator: the output is a pure function of (seed, a, b).
/// Used wherever draws must be replayable out of order, e.g. the j-th list
/// entry of vertex v, or the coin for pair (u, v) in G(n, p).
constexpr std::uint64_t counter_bits(Seed seed, std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t h = detail::mix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = detail::mix64(h ^ a);
    h = detail::mix64(h ^ (b * 0xd1b54a32d192ed03ULL));
    return h;
}

namespace detail {
__extension__ using uint128 = unsigned __int128;
}

/// Maps 64 random bits to [0, bound). Bias is at most bound / 2^64.
inline std::uint64_t bounded(std::uint64_t bits, std::uint64_t bound) noexcept {
    return static_cast<std::uint64_t>((static_cast<detail::uint128>(bits) * bound) >> 64);
}

/// Maps 64 random bits to a double in [0, 1).
constexpr double unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Seed for the index-th independent sub-experiment of a master seed.
constexpr Seed derive_seed(Seed master, std::uint64_t index, std::uint64_t stream = 0) noexcept {
    return counter_bits(master, 0x5eed0000ULL + stream, index);
}

/// Small sequential engine (SplitMix64). Satisfies UniformRandomBitGenerator
/// so it composes with <algorithm>, but the helpers below are used instead of
/// <random> distributions to keep streams identical across standard libraries.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(Seed seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t bound) noexcept { return bounded((*this)(), bound); }
    double uniform() noexcept { return unit_interval((*this)()); }

private:
    std::uint64_t state_;
};

}  // namespace qwalk
