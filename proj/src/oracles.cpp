// SPDX-License-Identifier: MIT
#include "tilemat/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace tilemat {

Grid gaussian_score_eps(const Grid& z, int t, const NoiseSchedule& sched, double mu,
                        double sigma_data) {
    if (sigma_data < 0.0) throw std::invalid_argument("sigma_data must be non-negative");
    double ab = sched.alpha_bar(t);
    double num = std::sqrt(1.0 - ab);
    double den = ab * sigma_data * sigma_data + (1.0 - ab);
    double smu = std::sqrt(ab) * mu;
    Grid out(z.height(), z.width(), z.channels());
    const double* pz = z.data();
    double* po = out.data();
    for (std::size_t i = 0; i < out.size(); ++i) po[i] = num * (pz[i] - smu) / den;
    return out;
}

Denoiser make_gaussian_denoiser(const NoiseSchedule& sched, double mu, double sigma_data) {
    return [sched, mu, sigma_data](const Grid& z, int t) {
        return gaussian_score_eps(z, t, sched, mu, sigma_data);
    };
}

Grid attractor_eps(const Grid& z, int t, const NoiseSchedule& sched, const Grid& target) {
    if (!z.same_shape(target))
        throw std::invalid_argument("attractor target shape must match input");
    double ab = sched.alpha_bar(t);
    if (!(ab < 1.0)) throw std::invalid_argument("alpha_bar must be below 1");
    double sab = std::sqrt(ab);
    double inv = 1.0 / std::sqrt(1.0 - ab);
    Grid out(z.height(), z.width(), z.channels());
    const double* pz = z.data();
    const double* pt = target.data();
    double* po = out.data();
    for (std::size_t i = 0; i < out.size(); ++i) po[i] = (pz[i] - sab * pt[i]) * inv;
    return out;
}

Denoiser make_attractor_denoiser(const NoiseSchedule& sched, Grid target) {
    return [sched, target = std::move(target)](const Grid& z, int t) {
        return attractor_eps(z, t, sched, target);
    };
}

Grid toroidal_blur(const Grid& g, int radius) {
    if (radius < 0) throw std::invalid_argument("blur radius must be non-negative");
    Grid cur = g;
    Grid tmp(g.height(), g.width(), g.channels());
    int h = g.height(), w = g.width(), c = g.channels();
    for (int pass = 0; pass < radius; ++pass) {
        // horizontal
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                int xl = x == 0 ? w - 1 : x - 1;
                int xr = x == w - 1 ? 0 : x + 1;
                for (int k = 0; k < c; ++k)
                    tmp.at(y, x, k) =
                        0.25 * cur.at(y, xl, k) + 0.5 * cur.at(y, x, k) + 0.25 * cur.at(y, xr, k);
            }
        // vertical
        for (int y = 0; y < h; ++y) {
            int yu = y == 0 ? h - 1 : y - 1;
            int yd = y == h - 1 ? 0 : y + 1;
            for (int x = 0; x < w; ++x)
                for (int k = 0; k < c; ++k)
                    cur.at(y, x, k) =
                        0.25 * tmp.at(yu, x, k) + 0.5 * tmp.at(y, x, k) + 0.25 * tmp.at(yd, x, k);
        }
    }
    return cur;
}

Grid smoothing_eps(const Grid& z, int t, const NoiseSchedule& sched, int radius,
                   double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("lambda must be in [0, 1]");
    double ab = sched.alpha_bar(t);
    double sab = std::sqrt(ab);
    double inv = 1.0 / std::sqrt(1.0 - ab);

    Grid x0(z.height(), z.width(), z.channels());
    const double* pz = z.data();
    double* px = x0.data();
    for (std::size_t i = 0; i < x0.size(); ++i) px[i] = sab * pz[i];

    Grid blurred = toroidal_blur(x0, radius);
    const double* pb = blurred.data();
    Grid out(z.height(), z.width(), z.channels());
    double* po = out.data();
    for (std::size_t i = 0; i < out.size(); ++i) {
        double pred = (1.0 - lambda) * px[i] + lambda * pb[i];
        po[i] = (pz[i] - sab * pred) * inv;
    }
    return out;
}

Denoiser make_smoothing_denoiser(const NoiseSchedule& sched, int radius, double lambda) {
    return [sched, radius, lambda](const Grid& z, int t) {
        return smoothing_eps(z, t, sched, radius, lambda);
    };
}

}  // namespace tilemat
