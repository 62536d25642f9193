// SPDX-License-Identifier: MIT
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tilemat/oracles.hpp"
#include "tilemat/tiling.hpp"

using namespace tilemat;

TEST_SUITE("oracles") {

TEST_CASE("gaussian score, frozen value and posterior-mean route") {
    NoiseSchedule s = NoiseSchedule::from_betas({0.36, 0.609375});  // bars 0.64, 0.25
    Grid z = Grid::full(1, 1, 1, 3.0);

    // eps = sqrt(1-ab) * (z - sqrt(ab)*mu) / (ab*sigma^2 + 1 - ab)
    // ab=0.25, mu=1, sigma=2: sqrt(0.75)*(3 - 0.5)/(1.75)
    Grid eps = gaussian_score_eps(z, 1, s, 1.0, 2.0);
    CHECK(eps.at(0, 0, 0) == doctest::Approx(1.2371791482634838).epsilon(1e-14));

    // independent route: eps = (z - sqrt(ab) * posterior_mean) / sqrt(1-ab)
    double ab = 0.25, mu = 1.0, var = 4.0;
    double post_mean = (std::sqrt(ab) * var * 3.0 + (1.0 - ab) * mu) / (ab * var + 1.0 - ab);
    double expected = (3.0 - std::sqrt(ab) * post_mean) / std::sqrt(1.0 - ab);
    CHECK(eps.at(0, 0, 0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gaussian denoiser drives ddim onto the data distribution mean") {
    NoiseSchedule s = NoiseSchedule::linear();
    Denoiser d = make_gaussian_denoiser(s, 2.5, 1e-6);  // nearly a point mass at 2.5
    SamplerConfig cfg;
    cfg.steps = 100;
    Grid out = ddim_sample(d, {4, 4, 1}, s, cfg, Rng(1));
    CHECK(grid_rmse(out, Grid::full(4, 4, 1, 2.5)) < 1e-2);
}

TEST_CASE("attractor epsilon, frozen value and exact final snap") {
    NoiseSchedule s = NoiseSchedule::from_betas({0.36, 0.609375});
    Grid z = Grid::full(1, 1, 1, 1.0);
    Grid target = Grid::full(1, 1, 1, 0.25);

    // (1 - 0.5*0.25) / sqrt(0.75)
    Grid eps = attractor_eps(z, 1, s, target);
    CHECK(eps.at(0, 0, 0) == doctest::Approx(1.0103629710818451).epsilon(1e-14));

    // the final ddim step reproduces the target exactly up to rounding
    Grid x0 = ddim_step(z, eps, 1, -1, s);
    CHECK(x0.at(0, 0, 0) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("attractor sampling lands on the target from any start") {
    NoiseSchedule s = NoiseSchedule::linear();
    Rng rng(8);
    Grid target = gaussian_grid({6, 6, 2}, rng.split(1));
    Denoiser d = make_attractor_denoiser(s, target);
    SamplerConfig cfg;
    cfg.steps = 12;
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Grid out = ddim_sample(d, {6, 6, 2}, s, cfg, Rng(seed));
        CHECK(grid_rmse(out, target) < 1e-10);
    }
}

TEST_CASE("attractor shape validation") {
    NoiseSchedule s = NoiseSchedule::linear(10);
    Grid z(2, 2, 1), target(2, 3, 1);
    CHECK_THROWS_AS(attractor_eps(z, 5, s, target), std::invalid_argument);
}

TEST_CASE("toroidal blur preserves means and constants") {
    Rng rng(4);
    Grid g = gaussian_grid({8, 8, 2}, rng);
    Grid b = toroidal_blur(g, 3);
    CHECK(grid_mean(b) == doctest::Approx(grid_mean(g)).epsilon(1e-12));
    CHECK(grid_variance(b) < grid_variance(g));

    Grid c = Grid::full(5, 7, 1, 0.37);
    Grid bc = toroidal_blur(c, 4);
    CHECK(grid_rmse(bc, c) < 1e-14);
}

TEST_CASE("toroidal blur commutes with roll") {
    Rng rng(14);
    Grid g = gaussian_grid({8, 8, 3}, rng);
    Grid a = toroidal_blur(roll(g, 3, 5), 2);
    Grid b = roll(toroidal_blur(g, 2), 3, 5);
    CHECK(grid_bitwise_equal(a, b));
}

TEST_CASE("smoothing epsilon with lambda zero equals the unit gaussian score") {
    NoiseSchedule s = NoiseSchedule::linear();
    Rng rng(21);
    Grid z = gaussian_grid({6, 6, 2}, rng);
    for (int t : {999, 400, 50}) {
        Grid a = smoothing_eps(z, t, s, 3, 0.0);
        Grid b = gaussian_score_eps(z, t, s, 0.0, 1.0);
        CHECK(grid_rmse(a, b) < 1e-12);
    }
}

TEST_CASE("smoothing epsilon frozen value") {
    NoiseSchedule s = NoiseSchedule::from_betas({0.36, 0.609375});  // bars 0.64, 0.25
    // constant grids are blur-invariant, so x0_pred = sqrt(ab)*z for any lambda
    Grid z = Grid::full(2, 2, 1, 2.0);
    Grid eps = smoothing_eps(z, 1, s, 2, 0.7);
    // (2 - 0.5*(0.5*2)) / sqrt(0.75)
    CHECK(eps.at(0, 0, 0) == doctest::Approx(1.7320508075688772).epsilon(1e-13));
}

TEST_CASE("smoothing epsilon commutes with roll") {
    NoiseSchedule s = NoiseSchedule::linear();
    Rng rng(9);
    Grid z = gaussian_grid({8, 8, 2}, rng);
    Grid a = smoothing_eps(roll(z, 2, 6), 500, s, 3, 0.9);
    Grid b = roll(smoothing_eps(z, 500, s, 3, 0.9), 2, 6);
    CHECK(grid_bitwise_equal(a, b));
}

TEST_CASE("smoothing denoiser parameter validation") {
    NoiseSchedule s = NoiseSchedule::linear(10);
    Grid z(4, 4, 1);
    CHECK_THROWS_AS(smoothing_eps(z, 5, s, -1, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_eps(z, 5, s, 2, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(smoothing_eps(z, 5, s, 2, 1.1), std::invalid_argument);
}

TEST_CASE("smoothing sampler output is smoother than its own noise scale") {
    NoiseSchedule s = NoiseSchedule::linear();
    Denoiser d = make_smoothing_denoiser(s, 5, 0.9);
    SamplerConfig cfg;
    cfg.steps = 30;
    Grid out = ddim_sample(d, {16, 16, 1}, s, cfg, Rng(17));
    // neighboring pixels should be strongly correlated after smoothing guidance
    double neighbor = interior_gradient_energy(out, 16);
    CHECK(neighbor < 2.0 * grid_variance(out));
}

}  // TEST_SUITE
