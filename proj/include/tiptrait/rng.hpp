#pragma once

#include <cstdint>
#include <initializer_list>

namespace tiptrait {

// SplitMix64 (Steele, Lea, Flood). Used for seeding and seed derivation.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
    std::uint64_t next() noexcept;

private:
    std::uint64_t state_;
};

// xoshiro256** (Blackman, Vigna) seeded by four SplitMix64 draws. Fixed
// algorithm so synthetic datasets reproduce bit-for-bit everywhere; the
// standard library's distributions are deliberately not used.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) noexcept;

    std::uint64_t next() noexcept;
    // 53-bit uniform in [0, 1).
    double uniform() noexcept;
    // Box-Muller, one variate per call (no caching), so the stream position
    // depends only on the number of calls.
    double normal() noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }
    result_type operator()() noexcept { return next(); }

private:
    std::uint64_t s_[4];
};

// Order-sensitive hash of a master seed with any number of indices.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) noexcept;

}  // namespace tiptrait
