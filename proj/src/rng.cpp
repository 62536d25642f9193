// SPDX-License-Identifier: MIT
#include "tilemat/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tilemat {

std::int64_t Rng::uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: hi < lo");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    return lo + static_cast<std::int64_t>(next_u64() % span);
}

double Rng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // u1 in (0, 1] so the log is finite
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
}

Grid gaussian_grid(GridShape shape, Rng rng) {
    Grid g(shape.h, shape.w, shape.c);
    double* p = g.data();
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = rng.gaussian();
    return g;
}

}  // namespace tilemat
