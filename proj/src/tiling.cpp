// SPDX-License-Identifier: MIT
#include "tilemat/tiling.hpp"

#include <algorithm>
#include <exception>
#include <stdexcept>
#include <thread>

namespace tilemat {

Grid roll(const Grid& g, int dy, int dx) {
    int h = g.height(), w = g.width(), c = g.channels();
    dy = Grid::wrap(dy, h);
    dx = Grid::wrap(dx, w);
    if (dy == 0 && dx == 0) return g;
    Grid out(h, w, c);
    for (int y = 0; y < h; ++y) {
        int sy = y - dy < 0 ? y - dy + h : y - dy;
        for (int x = 0; x < w; ++x) {
            int sx = x - dx < 0 ? x - dx + w : x - dx;
            for (int k = 0; k < c; ++k) out.at(y, x, k) = g.at(sy, sx, k);
        }
    }
    return out;
}

std::vector<Grid> patch_grid(const Grid& g, int p) {
    if (p <= 0) throw std::invalid_argument("patch size must be positive");
    if (g.height() % p != 0 || g.width() % p != 0)
        throw std::invalid_argument("patch size must divide grid dimensions");
    int rows = g.height() / p, cols = g.width() / p, c = g.channels();
    std::vector<Grid> patches;
    patches.reserve(static_cast<std::size_t>(rows) * cols);
    for (int r = 0; r < rows; ++r)
        for (int col = 0; col < cols; ++col) {
            Grid patch(p, p, c);
            for (int y = 0; y < p; ++y)
                for (int x = 0; x < p; ++x)
                    for (int k = 0; k < c; ++k)
                        patch.at(y, x, k) = g.at(r * p + y, col * p + x, k);
            patches.push_back(std::move(patch));
        }
    return patches;
}

Grid unpatch_grid(const std::vector<Grid>& patches, int rows, int cols) {
    if (patches.empty() || rows <= 0 || cols <= 0 ||
        patches.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("unpatch_grid: patch count does not match layout");
    int p = patches[0].height(), c = patches[0].channels();
    for (const Grid& g : patches)
        if (g.height() != p || g.width() != p || g.channels() != c)
            throw std::invalid_argument("unpatch_grid: patches must share one shape");
    Grid out(rows * p, cols * p, c);
    for (int r = 0; r < rows; ++r)
        for (int col = 0; col < cols; ++col) {
            const Grid& patch = patches[static_cast<std::size_t>(r) * cols + col];
            for (int y = 0; y < p; ++y)
                for (int x = 0; x < p; ++x)
                    for (int k = 0; k < c; ++k)
                        out.at(r * p + y, col * p + x, k) = patch.at(y, x, k);
        }
    return out;
}

namespace {

// denoise + step every patch, at most cfg.max_parallel in flight
void step_patches(std::vector<Grid>& patches, int t, int t_prev, const Denoiser& denoiser,
                  const NoiseSchedule& sched, const RolledSamplerConfig& cfg,
                  const Rng& rng, std::size_t step_index) {
    Rng step_root = rng.split(stream::step_noise).split(step_index);
    auto run_one = [&](std::size_t i) {
        Grid eps = denoiser(patches[i], t);
        Rng patch_rng = step_root.split(i);
        patches[i] = ddim_step(patches[i], eps, t, t_prev, sched, cfg.eta, &patch_rng);
    };
    int mp = std::max(1, cfg.max_parallel);
    if (mp == 1 || patches.size() == 1) {
        for (std::size_t i = 0; i < patches.size(); ++i) run_one(i);
        return;
    }
    for (std::size_t base = 0; base < patches.size(); base += mp) {
        std::size_t end = std::min(patches.size(), base + mp);
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(end - base);
        for (std::size_t i = base; i < end; ++i)
            pool.emplace_back([&, i] {
                try {
                    run_one(i);
                } catch (...) {
                    errors[i - base] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
}

}  // namespace

Grid rolled_patched_run(Grid z, const std::vector<int>& ts, const Denoiser& denoiser,
                        const NoiseSchedule& sched, const RolledSamplerConfig& cfg,
                        const Rng& rng) {
    int h = z.height(), w = z.width();
    int p = cfg.patch;
    if (h % p != 0 || w % p != 0)
        throw std::invalid_argument("patch size must divide grid dimensions");
    int max_roll = cfg.max_roll < 0 ? std::max(h, w) : cfg.max_roll;
    int rows = h / p, cols = w / p;
    Rng roll_root = rng.split(stream::roll);
    for (std::size_t k = 0; k < ts.size(); ++k) {
        int t = ts[k];
        int t_prev = k + 1 < ts.size() ? ts[k + 1] : -1;
        Rng roll_rng = roll_root.split(k);
        int dy = static_cast<int>(roll_rng.uniform_int(0, max_roll));
        int dx = static_cast<int>(roll_rng.uniform_int(0, max_roll));
        z = roll(z, dy, dx);
        std::vector<Grid> patches = patch_grid(z, p);
        step_patches(patches, t, t_prev, denoiser, sched, cfg, rng, k);
        z = unpatch_grid(patches, rows, cols);
        z = roll(z, -dy, -dx);
    }
    return z;
}

Grid rolled_patched_sample(const Denoiser& denoiser, GridShape shape,
                           const NoiseSchedule& sched, const RolledSamplerConfig& cfg,
                           const Rng& rng) {
    std::vector<int> ts = timestep_subsequence(sched.timesteps() - 1, cfg.steps);
    Grid z = gaussian_grid(shape, rng.split(stream::init));
    return rolled_patched_run(std::move(z), ts, denoiser, sched, cfg, rng);
}

namespace {

double boundary_sum(const Grid& g, int p, bool vertical, bool boundary_pairs, double* count) {
    int h = g.height(), w = g.width(), c = g.channels();
    double s = 0.0;
    double n = 0.0;
    int extent = vertical ? w : h;
    int other = vertical ? h : w;
    for (int i = 0; i < extent; ++i) {
        bool at_boundary = (i % p) == 0;
        if (at_boundary != boundary_pairs) continue;
        int prev = i == 0 ? extent - 1 : i - 1;
        for (int j = 0; j < other; ++j)
            for (int k = 0; k < c; ++k) {
                double a = vertical ? g.at(j, prev, k) : g.at(prev, j, k);
                double b = vertical ? g.at(j, i, k) : g.at(i, j, k);
                double d = b - a;
                s += d * d;
                n += 1.0;
            }
    }
    *count = n;
    return s;
}

double pair_energy(const Grid& g, int p, SeamAxis axis, bool boundary_pairs) {
    if (p <= 0) throw std::invalid_argument("patch size must be positive");
    double s = 0.0, n = 0.0, cnt = 0.0;
    if (axis == SeamAxis::both || axis == SeamAxis::vertical) {
        s += boundary_sum(g, p, true, boundary_pairs, &cnt);
        n += cnt;
    }
    if (axis == SeamAxis::both || axis == SeamAxis::horizontal) {
        s += boundary_sum(g, p, false, boundary_pairs, &cnt);
        n += cnt;
    }
    return n > 0.0 ? s / n : 0.0;
}

}  // namespace

double seam_energy(const Grid& g, int p, SeamAxis axis) {
    return pair_energy(g, p, axis, true);
}

double interior_gradient_energy(const Grid& g, int p, SeamAxis axis) {
    return pair_energy(g, p, axis, false);
}

}  // namespace tilemat
