// SPDX-License-Identifier: MIT
#include "tilemat/multiscale.hpp"

#include <cmath>
#include <stdexcept>

namespace tilemat {

Grid upsample_latent(const Grid& g, int factor) {
    if (factor < 1) throw std::invalid_argument("upsample factor must be positive");
    if (factor == 1) return g;
    int h = g.height(), w = g.width(), c = g.channels();
    int H = h * factor, W = w * factor;
    Grid out(H, W, c);
    for (int y = 0; y < H; ++y) {
        // source coordinate of this output center
        double sy = (y + 0.5) / factor - 0.5;
        int y0 = static_cast<int>(std::floor(sy));
        double fy = sy - y0;
        int ya = Grid::wrap(y0, h), yb = Grid::wrap(y0 + 1, h);
        for (int x = 0; x < W; ++x) {
            double sx = (x + 0.5) / factor - 0.5;
            int x0 = static_cast<int>(std::floor(sx));
            double fx = sx - x0;
            int xa = Grid::wrap(x0, w), xb = Grid::wrap(x0 + 1, w);
            for (int k = 0; k < c; ++k) {
                double top = (1.0 - fx) * g.at(ya, xa, k) + fx * g.at(ya, xb, k);
                double bot = (1.0 - fx) * g.at(yb, xa, k) + fx * g.at(yb, xb, k);
                out.at(y, x, k) = (1.0 - fy) * top + fy * bot;
            }
        }
    }
    return out;
}

Grid downsample_latent(const Grid& g, int factor) {
    if (factor < 1) throw std::invalid_argument("downsample factor must be positive");
    if (factor == 1) return g;
    if (g.height() % factor != 0 || g.width() % factor != 0)
        throw std::invalid_argument("downsample factor must divide grid dimensions");
    int h = g.height() / factor, w = g.width() / factor, c = g.channels();
    double inv = 1.0 / (static_cast<double>(factor) * factor);
    Grid out(h, w, c);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int k = 0; k < c; ++k) {
                double s = 0.0;
                for (int dy = 0; dy < factor; ++dy)
                    for (int dx = 0; dx < factor; ++dx)
                        s += g.at(y * factor + dy, x * factor + dx, k);
                out.at(y, x, k) = s * inv;
            }
    return out;
}

std::pair<Grid, int> renoise(const Grid& z, double restart_strength,
                             const NoiseSchedule& sched, const Rng& rng) {
    if (!(restart_strength > 0.0) || restart_strength > 1.0)
        throw std::invalid_argument("restart_strength must be in (0, 1]");
    int t_restart =
        static_cast<int>(std::llround(restart_strength * (sched.timesteps() - 1)));
    Grid eps = gaussian_grid({z.height(), z.width(), z.channels()}, rng);
    return {forward_diffuse(z, eps, t_restart, sched), t_restart};
}

MultiscaleResult multiscale_sample(const DenoiserBank& bank, const MultiscaleConfig& cfg,
                                   const NoiseSchedule& sched, const Rng& rng) {
    if (cfg.base < 1 || cfg.target < cfg.base)
        throw std::invalid_argument("target must be at least the base resolution");
    int ratio = cfg.target / cfg.base;
    if (cfg.base * ratio != cfg.target || (ratio & (ratio - 1)) != 0)
        throw std::invalid_argument("target must be base times a power of two");

    MultiscaleResult result;
    int stage = 0;
    GridShape shape{cfg.base, cfg.base, cfg.channels};
    RolledSamplerConfig scfg = cfg.sampler;
    scfg.patch = std::min(scfg.patch, cfg.base);

    Rng stage_rng = rng.split(stream::stage).split(stage);
    std::vector<int> ts = timestep_subsequence(sched.timesteps() - 1, scfg.steps);
    Grid z = rolled_patched_sample(bank(stage, shape), shape, sched, scfg, stage_rng);
    result.stages.push_back({cfg.base, ts.front(), static_cast<int>(ts.size())});
    result.stage_latents.push_back(z);

    int size = cfg.base;
    while (size < cfg.target) {
        ++stage;
        size *= 2;
        shape = {size, size, cfg.channels};
        stage_rng = rng.split(stream::stage).split(stage);
        z = upsample_latent(z, 2);
        auto [noised, t_restart] = renoise(z, cfg.restart_strength, sched,
                                           stage_rng.split(stream::renoise));
        // refinement budget: the stage step count scaled by the remaining
        // trajectory, schedule anchored exactly at the restart level
        int budget = std::max(
            1, static_cast<int>(std::llround(static_cast<double>(scfg.steps) *
                                             (t_restart + 1) / sched.timesteps())));
        budget = std::min(budget, t_restart + 1);
        std::vector<int> rts = timestep_subsequence(t_restart, budget);
        RolledSamplerConfig stage_cfg = scfg;
        stage_cfg.patch = std::min(cfg.sampler.patch, size);
        z = rolled_patched_run(std::move(noised), rts, bank(stage, shape), sched,
                               stage_cfg, stage_rng);
        result.stages.push_back({size, rts.front(), static_cast<int>(rts.size())});
        result.stage_latents.push_back(z);
    }
    result.latent = std::move(z);
    return result;
}

}  // namespace tilemat
