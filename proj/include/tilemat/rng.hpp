// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>

#include "tilemat/grid.hpp"

namespace tilemat {

// Seedable, platform-independent splitmix64 stream with explicit splitting.
//
// Stream-splitting rule: every Rng carries the immutable seed it was created
// with; split(key) derives a child whose seed is mix64(seed ^ mix64(key)), so
// child streams depend only on (root seed, path of keys), never on how much
// the parent has been consumed. The sampling code derives one substream per
// purpose, then per stage / per step / per patch index:
//
//   root(seed)
//     split(stream::init)                      initial latent noise
//     split(stream::roll).split(step)          per-step roll offsets
//     split(stream::step_noise).split(step).split(patch)   eta>0 noise
//     split(stream::renoise)                   multiscale restart noise
//     split(stream::stage).split(s)            per-stage root in multiscale
//     split(stream::mask)                      random area masks
//
// Gaussians use Box-Muller on 53-bit uniforms; std::normal_distribution is
// avoided because its output differs across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [lo, hi] inclusive
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    // standard normal draw
    double gaussian();

    Rng split(std::uint64_t key) const { return Rng(mix64(seed_ ^ mix64(key))); }

    static std::uint64_t mix64(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t seed_;
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

namespace stream {
inline constexpr std::uint64_t init = 1;
inline constexpr std::uint64_t roll = 2;
inline constexpr std::uint64_t step_noise = 3;
inline constexpr std::uint64_t renoise = 4;
inline constexpr std::uint64_t stage = 5;
inline constexpr std::uint64_t mask = 6;
}  // namespace stream

// h*w*c grid of standard normal draws, filled row-major then by channel
Grid gaussian_grid(GridShape shape, Rng rng);

}  // namespace tilemat
