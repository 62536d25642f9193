// SPDX-License-Identifier: MIT
#include "tilemat/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace tilemat {

int NoiseSchedule::check(int t) const {
    if (t < 0 || t >= timesteps()) throw std::out_of_range("timestep out of range");
    return t;
}

NoiseSchedule NoiseSchedule::linear(int timesteps, double beta_start, double beta_end) {
    if (timesteps < 2) throw std::invalid_argument("schedule needs at least 2 timesteps");
    if (!(beta_start > 0.0) || !(beta_end < 1.0) || beta_end < beta_start)
        throw std::invalid_argument("betas must satisfy 0 < beta_start <= beta_end < 1");
    std::vector<double> betas(timesteps);
    for (int t = 0; t < timesteps; ++t) {
        double f = timesteps == 1 ? 0.0 : static_cast<double>(t) / (timesteps - 1);
        betas[t] = beta_start + (beta_end - beta_start) * f;
    }
    return from_betas(std::move(betas));
}

NoiseSchedule NoiseSchedule::from_betas(std::vector<double> betas) {
    if (betas.empty()) throw std::invalid_argument("schedule needs at least 2 timesteps");
    NoiseSchedule s;
    s.betas_ = std::move(betas);
    s.alphas_.resize(s.betas_.size());
    s.alpha_bars_.resize(s.betas_.size());
    double prod = 1.0;
    for (std::size_t t = 0; t < s.betas_.size(); ++t) {
        double b = s.betas_[t];
        if (!(b > 0.0) || !(b < 1.0))
            throw std::invalid_argument("betas must lie in (0, 1)");
        if (t > 0 && b < s.betas_[t - 1])
            throw std::invalid_argument("betas must be non-decreasing");
        s.alphas_[t] = 1.0 - b;
        prod *= s.alphas_[t];
        s.alpha_bars_[t] = prod;
        if (!(prod > 0.0) || !(prod < 1.0))
            throw std::invalid_argument("alpha_bar left (0, 1)");
    }
    return s;
}

std::vector<int> timestep_subsequence(int t_max, int steps) {
    if (t_max < 0) throw std::invalid_argument("t_max must be non-negative");
    if (steps < 1 || steps > t_max + 1)
        throw std::invalid_argument("steps must lie in [1, t_max + 1]");
    std::vector<int> ts(steps);
    if (steps == 1) {
        ts[0] = t_max;
        return ts;
    }
    for (int i = 0; i < steps; ++i) {
        double f = 1.0 - static_cast<double>(i) / (steps - 1);
        ts[i] = static_cast<int>(std::llround(t_max * f));
    }
    for (int i = 1; i < steps; ++i)
        if (ts[i] >= ts[i - 1]) throw std::logic_error("subsequence not strictly decreasing");
    return ts;
}

}  // namespace tilemat
