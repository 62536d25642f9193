// SPDX-License-Identifier: MIT
#pragma once

#include <vector>

#include "tilemat/sampler.hpp"

namespace tilemat {

// toroidal shift: out(y, x) = in(y - dy mod h, x - dx mod w)
Grid roll(const Grid& g, int dy, int dx);

// non-overlapping p*p tiles, row-major. p must divide both dimensions.
std::vector<Grid> patch_grid(const Grid& g, int p);
Grid unpatch_grid(const std::vector<Grid>& patches, int rows, int cols);

struct RolledSamplerConfig {
    int steps = 50;
    double eta = 0.0;
    int patch = 64;        // patch edge in latent cells
    int max_roll = -1;     // per-step roll bound, inclusive; -1 = grid dimension
    int max_parallel = 8;  // patches denoised concurrently within a step
};

// Noise-rolling patched sampling: each step shifts the latent by a random
// toroidal offset, denoises non-overlapping patches independently,
// reassembles, and shifts back. With max_roll = 0 and patch covering the
// whole grid this reduces bitwise to ddim_sample.
Grid rolled_patched_sample(const Denoiser& denoiser, GridShape shape,
                           const NoiseSchedule& sched, const RolledSamplerConfig& cfg,
                           const Rng& rng);

// Inner loop on an existing latent (used by refinement stages).
Grid rolled_patched_run(Grid z, const std::vector<int>& ts, const Denoiser& denoiser,
                        const NoiseSchedule& sched, const RolledSamplerConfig& cfg,
                        const Rng& rng);

enum class SeamAxis { both, horizontal, vertical };

// Mean squared difference across patch-boundary pixel pairs, including the
// toroidal wrap (column/row 0). p >= dim leaves only the wrap boundary.
// Zero iff the image is continuous across every boundary.
double seam_energy(const Grid& g, int p, SeamAxis axis = SeamAxis::both);

// Mean squared difference over adjacent pairs *not* crossing a boundary.
double interior_gradient_energy(const Grid& g, int p, SeamAxis axis = SeamAxis::both);

}  // namespace tilemat
