// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

namespace tilemat {

// Variance schedule for the diffusion process. alpha_bars[t] is the cumulative
// product of (1 - beta) up to and including t; it is strictly decreasing and
// stays in (0, 1).
class NoiseSchedule {
  public:
    static NoiseSchedule linear(int timesteps = 1000, double beta_start = 8.5e-4,
                                double beta_end = 0.012);
    static NoiseSchedule from_betas(std::vector<double> betas);

    int timesteps() const { return static_cast<int>(betas_.size()); }
    double beta(int t) const { return betas_[check(t)]; }
    double alpha(int t) const { return alphas_[check(t)]; }
    double alpha_bar(int t) const { return alpha_bars_[check(t)]; }
    const std::vector<double>& alpha_bars() const { return alpha_bars_; }

  private:
    NoiseSchedule() = default;
    int check(int t) const;
    std::vector<double> betas_, alphas_, alpha_bars_;
};

// Strictly decreasing timesteps for a sampling run: uniform stride over
// [0, t_max], both endpoints included, largest first.
// steps must be in [1, t_max + 1]; steps == 1 yields {0}.
std::vector<int> timestep_subsequence(int t_max, int steps);

}  // namespace tilemat
