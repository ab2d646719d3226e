#include "tiptrait/rng.hpp"

#include <cmath>
#include <numbers>

namespace tiptrait {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

constexpr std::uint64_t mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t SplitMix64::next() noexcept
{
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
}

Rng::Rng(std::uint64_t seed) noexcept
{
    SplitMix64 sm(seed);
    for (auto& s : s_) {
        s = sm.next();
    }
}

std::uint64_t Rng::next() noexcept
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() noexcept
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::normal() noexcept
{
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> indices) noexcept
{
    std::uint64_t h = mix(master + 0x9E3779B97F4A7C15ULL);
    for (auto i : indices) {
        h = mix(h ^ mix(i + 0x9E3779B97F4A7C15ULL));
    }
    return h;
}

}  // namespace tiptrait
