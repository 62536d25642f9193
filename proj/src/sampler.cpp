// SPDX-License-Identifier: MIT
#include "tilemat/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace tilemat {

Grid forward_diffuse(const Grid& z0, const Grid& eps, int t, const NoiseSchedule& sched) {
    if (!z0.same_shape(eps)) throw std::invalid_argument("forward_diffuse: shape mismatch");
    double ab = sched.alpha_bar(t);
    double s0 = std::sqrt(ab);
    double s1 = std::sqrt(1.0 - ab);
    Grid out(z0.height(), z0.width(), z0.channels());
    const double* pz = z0.data();
    const double* pe = eps.data();
    double* po = out.data();
    for (std::size_t i = 0; i < out.size(); ++i) po[i] = s0 * pz[i] + s1 * pe[i];
    return out;
}

Grid ddim_step(const Grid& z, const Grid& eps_hat, int t, int t_prev,
               const NoiseSchedule& sched, double eta, Rng* rng) {
    if (!z.same_shape(eps_hat)) throw std::invalid_argument("ddim_step: shape mismatch");
    if (t_prev >= t) throw std::invalid_argument("ddim_step: t_prev must be below t");
    if (eta < 0.0) throw std::invalid_argument("ddim_step: eta must be non-negative");
    if (eta > 0.0 && rng == nullptr)
        throw std::invalid_argument("ddim_step: eta > 0 needs an rng");

    double ab_t = sched.alpha_bar(t);
    double ab_prev = t_prev < 0 ? 1.0 : sched.alpha_bar(t_prev);
    double inv_sq_ab = 1.0 / std::sqrt(ab_t);
    double sq_1m = std::sqrt(1.0 - ab_t);
    double sq_abp = std::sqrt(ab_prev);

    // eta scales between deterministic DDIM (0) and ancestral-style noise
    double sigma = 0.0;
    if (eta > 0.0 && t_prev >= 0) {
        double v = (1.0 - ab_prev) / (1.0 - ab_t) * (1.0 - ab_t / ab_prev);
        sigma = eta * std::sqrt(std::max(0.0, v));
    }
    double dir = std::sqrt(std::max(0.0, 1.0 - ab_prev - sigma * sigma));

    Grid out(z.height(), z.width(), z.channels());
    const double* pz = z.data();
    const double* pe = eps_hat.data();
    double* po = out.data();
    if (sigma > 0.0) {
        Rng noise = *rng;
        for (std::size_t i = 0; i < out.size(); ++i) {
            double x0 = (pz[i] - sq_1m * pe[i]) * inv_sq_ab;
            po[i] = sq_abp * x0 + dir * pe[i] + sigma * noise.gaussian();
        }
    } else {
        for (std::size_t i = 0; i < out.size(); ++i) {
            double x0 = (pz[i] - sq_1m * pe[i]) * inv_sq_ab;
            po[i] = sq_abp * x0 + dir * pe[i];
        }
    }
    return out;
}

Grid ddim_run(Grid z, const std::vector<int>& ts, const Denoiser& denoiser,
              const NoiseSchedule& sched, double eta, const Rng& rng) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
        int t = ts[k];
        int t_prev = k + 1 < ts.size() ? ts[k + 1] : -1;
        Grid eps = denoiser(z, t);
        Rng step_rng = rng.split(stream::step_noise).split(k);
        z = ddim_step(z, eps, t, t_prev, sched, eta, &step_rng);
    }
    return z;
}

Grid ddim_sample(const Denoiser& denoiser, GridShape shape, const NoiseSchedule& sched,
                 const SamplerConfig& cfg, const Rng& rng) {
    std::vector<int> ts = timestep_subsequence(sched.timesteps() - 1, cfg.steps);
    Grid z = gaussian_grid(shape, rng.split(stream::init));
    return ddim_run(std::move(z), ts, denoiser, sched, cfg.eta, rng);
}

}  // namespace tilemat
