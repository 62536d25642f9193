// SPDX-License-Identifier: MIT
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "tilemat/oracles.hpp"
#include "tilemat/tiling.hpp"

using namespace tilemat;

namespace {

Grid counting_grid(int h, int w, int c) {
    Grid g(h, w, c);
    double v = 0.0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int k = 0; k < c; ++k) g.at(y, x, k) = v++;
    return g;
}

}  // namespace

TEST_SUITE("tiling") {

TEST_CASE("roll moves content down and right") {
    Grid g(2, 2, 1);
    g.at(0, 0, 0) = 1;
    g.at(0, 1, 0) = 2;
    g.at(1, 0, 0) = 3;
    g.at(1, 1, 0) = 4;

    Grid r = roll(g, 1, 0);
    CHECK(r.at(0, 0, 0) == 3);
    CHECK(r.at(0, 1, 0) == 4);
    CHECK(r.at(1, 0, 0) == 1);
    CHECK(r.at(1, 1, 0) == 2);

    Grid rx = roll(g, 0, 1);
    CHECK(rx.at(0, 0, 0) == 2);
    CHECK(rx.at(0, 1, 0) == 1);
}

TEST_CASE("roll identities") {
    Grid g = counting_grid(4, 6, 2);
    CHECK(grid_bitwise_equal(roll(g, 0, 0), g));
    // offsets that wrap to zero are also the identity
    CHECK(grid_bitwise_equal(roll(g, 4, -6), g));
    CHECK(grid_bitwise_equal(roll(roll(g, 3, 5), -3, -5), g));
    CHECK(grid_bitwise_equal(roll(roll(g, 1, 2), 3, 4), roll(g, 4, 6)));
}

TEST_CASE("patching is row-major and reversible") {
    Grid g = counting_grid(4, 4, 1);
    std::vector<Grid> ps = patch_grid(g, 2);
    REQUIRE(ps.size() == 4);
    // patch 1 is the top-right block
    CHECK(ps[1].at(0, 0, 0) == g.at(0, 2, 0));
    CHECK(ps[1].at(1, 1, 0) == g.at(1, 3, 0));
    // patch 2 is the bottom-left block
    CHECK(ps[2].at(0, 0, 0) == g.at(2, 0, 0));

    Grid back = unpatch_grid(ps, 2, 2);
    CHECK(grid_bitwise_equal(back, g));
}

TEST_CASE("patch size must divide the grid") {
    Grid g(4, 6, 1);
    CHECK_THROWS_AS(patch_grid(g, 0), std::invalid_argument);
    try {
        patch_grid(g, 4);
        FAIL("expected a divisibility error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "patch size must divide grid dimensions");
    }
}

TEST_CASE("degenerate rolled sampling is bitwise ddim") {
    NoiseSchedule s = NoiseSchedule::linear();
    Denoiser d = make_smoothing_denoiser(s, 3, 0.8);
    RolledSamplerConfig rc;
    rc.steps = 10;
    rc.patch = 16;
    rc.max_roll = 0;
    SamplerConfig sc;
    sc.steps = 10;
    for (std::uint64_t seed : {1ull, 7ull, 1234ull}) {
        Grid a = rolled_patched_sample(d, {16, 16, 3}, s, rc, Rng(seed));
        Grid b = ddim_sample(d, {16, 16, 3}, s, sc, Rng(seed));
        CHECK(grid_bitwise_equal(a, b));
    }
}

TEST_CASE("rolling breaks patch seams that naive patching leaves") {
    NoiseSchedule s = NoiseSchedule::linear();
    Denoiser d = make_smoothing_denoiser(s, 6, 0.9);
    RolledSamplerConfig naive;
    naive.steps = 25;
    naive.patch = 32;
    naive.max_roll = 0;
    naive.max_parallel = 1;
    RolledSamplerConfig rolled = naive;
    rolled.max_roll = -1;

    Grid a = rolled_patched_sample(d, {64, 64, 2}, s, naive, Rng(5));
    Grid b = rolled_patched_sample(d, {64, 64, 2}, s, rolled, Rng(5));
    double seam_naive = seam_energy(a, 32);
    double seam_rolled = seam_energy(b, 32);
    CHECK(seam_rolled < seam_naive);
    // and the rolled result has no preferred boundaries at all
    CHECK(seam_rolled < 2.0 * interior_gradient_energy(b, 32));
}

TEST_CASE("parallel patch batching is bitwise equal to serial") {
    NoiseSchedule s = NoiseSchedule::linear();
    Denoiser d = make_smoothing_denoiser(s, 2, 0.7);
    RolledSamplerConfig serial;
    serial.steps = 8;
    serial.patch = 8;
    serial.max_parallel = 1;
    RolledSamplerConfig parallel = serial;
    parallel.max_parallel = 8;
    Grid a = rolled_patched_sample(d, {32, 32, 2}, s, serial, Rng(3));
    Grid b = rolled_patched_sample(d, {32, 32, 2}, s, parallel, Rng(3));
    CHECK(grid_bitwise_equal(a, b));
}

TEST_CASE("patched attractor with constant target converges everywhere") {
    NoiseSchedule s = NoiseSchedule::linear();
    Grid target = Grid::full(16, 16, 3, 0.0);
    for (int k = 0; k < 3; ++k)
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x) target.at(y, x, k) = 0.3 - 0.2 * k;
    // per-patch denoiser sees (patch, t); constant targets are position-free
    Denoiser d = [&, s](const Grid& z, int t) {
        Grid tgt(z.height(), z.width(), z.channels());
        for (int y = 0; y < z.height(); ++y)
            for (int x = 0; x < z.width(); ++x)
                for (int k = 0; k < z.channels(); ++k) tgt.at(y, x, k) = 0.3 - 0.2 * k;
        return attractor_eps(z, t, s, tgt);
    };
    RolledSamplerConfig rc;
    rc.steps = 20;
    rc.patch = 8;
    Grid out = rolled_patched_sample(d, {16, 16, 3}, s, rc, Rng(11));
    CHECK(grid_rmse(out, target) < 1e-3);
}

TEST_CASE("unrolled patched attractor reproduces a patch-periodic target") {
    NoiseSchedule s = NoiseSchedule::linear();
    // target tiles an 8x8 motif, so every patch sees the same target
    Grid motif = gaussian_grid({8, 8, 2}, Rng(77));
    Grid target(16, 16, 2);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            for (int k = 0; k < 2; ++k) target.at(y, x, k) = motif.at(y % 8, x % 8, k);
    Denoiser d = [&, s](const Grid& z, int t) {
        Grid tgt(z.height(), z.width(), z.channels());
        for (int y = 0; y < z.height(); ++y)
            for (int x = 0; x < z.width(); ++x)
                for (int k = 0; k < z.channels(); ++k)
                    tgt.at(y, x, k) = motif.at(y % 8, x % 8, k);
        return attractor_eps(z, t, s, tgt);
    };
    RolledSamplerConfig rc;
    rc.steps = 20;
    rc.patch = 8;
    rc.max_roll = 0;
    Grid out = rolled_patched_sample(d, {16, 16, 2}, s, rc, Rng(2));
    CHECK(grid_rmse(out, target) < 1e-6);
}

TEST_CASE("rolled sampling validates patch divisibility") {
    NoiseSchedule s = NoiseSchedule::linear();
    Denoiser d = make_smoothing_denoiser(s, 1, 0.5);
    RolledSamplerConfig rc;
    rc.steps = 2;
    rc.patch = 5;
    CHECK_THROWS_AS(rolled_patched_sample(d, {16, 16, 1}, s, rc, Rng(0)),
                    std::invalid_argument);
}

TEST_CASE("seam energy by hand on a step image") {
    // two flat halves with a step of 3 at the patch boundary and the wrap
    Grid g(4, 4, 1);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) g.at(y, x, 0) = x < 2 ? 0.0 : 3.0;

    // vertical boundaries at x=0 (wrap, step 3) and x=2 (step 3)
    CHECK(seam_energy(g, 2, SeamAxis::vertical) == doctest::Approx(9.0));
    // interior pairs are flat
    CHECK(interior_gradient_energy(g, 2, SeamAxis::vertical) == doctest::Approx(0.0));
    // rows are constant so horizontal seams vanish
    CHECK(seam_energy(g, 2, SeamAxis::horizontal) == doctest::Approx(0.0));
    // with patch = extent only the wrap boundary remains
    CHECK(seam_energy(g, 4, SeamAxis::vertical) == doctest::Approx(9.0));

    Grid c = Grid::full(6, 6, 2, 1.25);
    CHECK(seam_energy(c, 3) == doctest::Approx(0.0));
    CHECK(interior_gradient_energy(c, 3) == doctest::Approx(0.0));
}

}  // TEST_SUITE
