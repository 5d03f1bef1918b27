#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cardinal {

// Purpose tag for counter-based substreams. Every random decision in a run
// draws from a stream keyed by (root seed, host, purpose, step), so results
// do not depend on the order hosts are evaluated in.
enum class StreamPurpose : std::uint64_t {
    Topology = 1,
    Propagation = 2,
    Symptoms = 3,
    Benign = 4,
    Migration = 5,
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
    return splitmix64(s);
}

} // namespace detail

// Deterministic substream: a splitmix64 sequence whose start state is a hash
// of (seed, host, purpose, step). Distinct tuples give independent streams.
class Substream {
public:
    // salt separates streams of the same purpose (e.g. one per worm profile).
    Substream(std::uint64_t seed, std::uint64_t host, StreamPurpose purpose,
              std::uint64_t step, std::uint64_t salt = 0)
        : state_(detail::mix_key(
              detail::mix_key(
                  detail::mix_key(detail::mix_key(seed, host),
                                  static_cast<std::uint64_t>(purpose)),
                  step),
              salt)) {}

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = (UINT64_MAX / n) * n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return v % n;
    }

    // Uniform in [lo, hi].
    double next_range(double lo, double hi) {
        return lo + (hi - lo) * next_unit();
    }

    // k distinct elements drawn without replacement, order randomized.
    std::vector<std::uint32_t> sample_without_replacement(
        std::span<const std::uint32_t> pool, std::size_t k) {
        std::vector<std::uint32_t> scratch(pool.begin(), pool.end());
        if (k > scratch.size()) k = scratch.size();
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(
                                          next_below(scratch.size() - i));
            std::swap(scratch[i], scratch[j]);
        }
        scratch.resize(k);
        return scratch;
    }

private:
    std::uint64_t state_;
};

} // namespace cardinal
