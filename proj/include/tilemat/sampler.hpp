// SPDX-License-Identifier: MIT
#pragma once

#include <functional>

#include "tilemat/grid.hpp"
#include "tilemat/rng.hpp"
#include "tilemat/schedule.hpp"

namespace tilemat {

// Noise predictor: given a (possibly patch-sized) latent at timestep t,
// return the predicted noise, same shape. Must be a pure function of its
// arguments: no global coordinates, no mutable state. Patched samplers call
// it on bare patch contents.
using Denoiser = std::function<Grid(const Grid& z, int t)>;

struct SamplerConfig {
    int steps = 50;
    double eta = 0.0;  // 0 = deterministic
};

// closed-form q(z_t | z_0): sqrt(abar_t) z0 + sqrt(1 - abar_t) eps
Grid forward_diffuse(const Grid& z0, const Grid& eps, int t, const NoiseSchedule& sched);

// One DDIM update from t to t_prev (t_prev == -1 returns the clean estimate).
// eta > 0 adds scaled fresh noise and requires rng.
Grid ddim_step(const Grid& z, const Grid& eps_hat, int t, int t_prev,
               const NoiseSchedule& sched, double eta = 0.0, Rng* rng = nullptr);

// Full sampling loop from pure noise over a uniform timestep subsequence.
Grid ddim_sample(const Denoiser& denoiser, GridShape shape, const NoiseSchedule& sched,
                 const SamplerConfig& cfg, const Rng& rng);

// Shared inner loop: run the given timestep sequence on an existing latent.
// Used by ddim_sample and by the refinement stages.
Grid ddim_run(Grid z, const std::vector<int>& ts, const Denoiser& denoiser,
              const NoiseSchedule& sched, double eta, const Rng& rng);

}  // namespace tilemat
