// SPDX-License-Identifier: MIT
#pragma once

#include "tilemat/sampler.hpp"

namespace tilemat {

// Analytic noise predictors with known closed-form behavior. They stand in
// for a trained network in tests and in the CLI, so every downstream result
// can be checked against a derivable expectation.

// Exact posterior noise estimate when the clean data is N(mu, sigma^2 I):
//   eps = sqrt(1-abar) * (z - sqrt(abar) mu) / (abar sigma^2 + (1-abar))
Grid gaussian_score_eps(const Grid& z, int t, const NoiseSchedule& sched, double mu,
                        double sigma_data);
Denoiser make_gaussian_denoiser(const NoiseSchedule& sched, double mu, double sigma_data);

// Pulls every sample toward a fixed target x*; the DDIM fixed point is x*
// and the final step (t_prev = -1) lands on it exactly:
//   eps = (z - sqrt(abar) x*) / sqrt(1-abar)
// Input shape must match the target shape.
Grid attractor_eps(const Grid& z, int t, const NoiseSchedule& sched, const Grid& target);
Denoiser make_attractor_denoiser(const NoiseSchedule& sched, Grid target);

// Predicts noise consistent with a smoothed clean estimate:
//   x0_naive = sqrt(abar) z          (unit-Gaussian posterior estimate)
//   x0_pred  = (1-lambda) x0_naive + lambda * blur(x0_naive)
//   eps      = (z - sqrt(abar) x0_pred) / sqrt(1-abar)
// blur is `radius` passes of a toroidal [1,2,1]/4 kernel per axis, so the
// denoiser is translation-covariant on the torus and position-agnostic.
// lambda = 0 reduces exactly to the mu=0, sigma=1 Gaussian denoiser.
Grid smoothing_eps(const Grid& z, int t, const NoiseSchedule& sched, int radius,
                   double lambda);
Denoiser make_smoothing_denoiser(const NoiseSchedule& sched, int radius, double lambda);

// toroidal separable binomial blur, `radius` passes of [1,2,1]/4 per axis
Grid toroidal_blur(const Grid& g, int radius);

}  // namespace tilemat
