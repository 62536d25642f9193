// SPDX-License-Identifier: MIT
#pragma once

#include <utility>
#include <vector>

#include "tilemat/tiling.hpp"

namespace tilemat {

// toroidal bilinear upsampling by an integer factor (half-pixel centers,
// wraparound): preserves per-channel means exactly and commutes with roll
Grid upsample_latent(const Grid& g, int factor);

// block-mean downsampling; factor must divide both dimensions
Grid downsample_latent(const Grid& g, int factor);

// Re-noise a clean latent to the restart level: picks
// t_restart = round(restart_strength * (T-1)) and applies the closed-form
// forward process with fresh seeded noise. Returns (latent, t_restart).
std::pair<Grid, int> renoise(const Grid& z, double restart_strength,
                             const NoiseSchedule& sched, const Rng& rng);

struct MultiscaleConfig {
    int base = 64;    // base-stage latent edge
    int target = 64;  // final latent edge; must be base * 2^k
    RolledSamplerConfig sampler;
    double restart_strength = 0.6;
    int channels = 14;
};

struct StageInfo {
    int size = 0;     // latent edge for the stage
    int t_start = 0;  // first timestep of the stage's schedule
    int steps = 0;
};

struct MultiscaleResult {
    Grid latent;                     // final stage output
    std::vector<Grid> stage_latents; // per-stage outputs, base first
    std::vector<StageInfo> stages;
};

// Per-stage denoiser factory: analytic oracles need shape-matched state
// (e.g. a target grid per resolution), so each stage asks for its own.
using DenoiserBank = std::function<Denoiser(int stage, GridShape shape)>;

// Coarse-to-fine synthesis: a full sampling run at the base resolution, then
// per doubling: bilinear upsample, renoise to the restart level, and a
// rolled-patched refinement over a schedule anchored at t_restart with a
// step budget proportional to the remaining trajectory.
MultiscaleResult multiscale_sample(const DenoiserBank& bank, const MultiscaleConfig& cfg,
                                   const NoiseSchedule& sched, const Rng& rng);

}  // namespace tilemat
