// SPDX-License-Identifier: MIT
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "tilemat/decode.hpp"
#include "tilemat/multiscale.hpp"
#include "tilemat/rng.hpp"
#include "tilemat/tiling.hpp"

using namespace tilemat;

TEST_SUITE("decode") {

TEST_CASE("blend profile vanishes at the borders and peaks in the middle") {
    std::vector<double> p = blend_profile(16, 0.25);
    REQUIRE(p.size() == 16);
    CHECK(p.front() == 0.0);
    CHECK(p.back() == 0.0);
    for (int i = 0; i < 16; ++i) {
        CHECK(p[i] == p[15 - i]);  // mirror-symmetric by construction
        if (i >= 1 && i < 8) CHECK(p[i] > p[i - 1]);
    }
    CHECK(p[7] > 0.5);
    CHECK_THROWS_AS(blend_profile(2, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(blend_profile(16, 0.0), std::invalid_argument);
}

TEST_CASE("gaussian weights are the profile outer product") {
    Grid w = gaussian_weights(8, 0.3);
    std::vector<double> p = blend_profile(8, 0.3);
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) CHECK(w.at(y, x, 0) == p[y] * p[x]);
}

TEST_CASE("overlapping shifted profiles cover every pixel") {
    // decode geometry: patch 512 px, overlap 0.25 -> stride 384 px
    const int pp = 512, stride = 384, extent = 1536;
    std::vector<double> p = blend_profile(pp, 0.25);
    std::vector<double> sum(extent, 0.0);
    for (int pos = 0; pos < extent; pos += stride)
        for (int i = 0; i < pp; ++i) sum[(pos + i) % extent] += p[i];
    double lo = sum[0], hi = sum[0];
    for (double v : sum) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo > 0.0);
    // after normalization the weights sum to one everywhere, exactly
    for (int x = 0; x < extent; ++x) {
        double total = 0.0;
        for (int pos = 0; pos < extent; pos += stride) {
            int local = (x - pos + extent) % extent;
            if (local < pp) total += p[local] / sum[x];
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("mean matching shifts means exactly and keeps shape") {
    Grid patch = gaussian_grid({8, 8, 3}, Rng(10));
    Grid ref = gaussian_grid({4, 4, 3}, Rng(11));
    std::vector<double> var_before;
    for (int k = 0; k < 3; ++k)
        var_before.push_back(grid_variance(slice_channels(patch, k, 1)));
    mean_match(patch, ref);
    for (int k = 0; k < 3; ++k) {
        CHECK(grid_mean_channel(patch, k) ==
              doctest::Approx(grid_mean_channel(ref, k)).epsilon(1e-12));
        // a per-channel constant shift leaves that channel's spread alone
        CHECK(grid_variance(slice_channels(patch, k, 1)) ==
              doctest::Approx(var_before[k]).epsilon(1e-9));
    }
}

TEST_CASE("mock decoder basics") {
    Decoder dec = linear_mock_decoder(123);

    Grid zero(4, 4, kLatentChannels);
    Grid out = dec(zero);
    CHECK(out.height() == 32);
    CHECK(out.width() == 32);
    CHECK(out.channels() == kMaterialChannels);
    CHECK(grid_rmse(out, Grid(32, 32, kMaterialChannels)) == 0.0);

    // constant latent -> constant image, and 8x8 blocks are exact replicas
    Grid z = gaussian_grid({4, 4, kLatentChannels}, Rng(1));
    Grid d = dec(z);
    for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x)
            for (int k = 0; k < kMaterialChannels; ++k)
                CHECK(d.at(y, x, k) == d.at(y - y % 8, x - x % 8, k));

    // same seed, same weights; different seed, different weights
    CHECK(grid_bitwise_equal(dec(z), linear_mock_decoder(123)(z)));
    CHECK_FALSE(grid_bitwise_equal(dec(z), linear_mock_decoder(124)(z)));

    CHECK_THROWS_AS(dec(Grid(4, 4, 3)), std::invalid_argument);
}

TEST_CASE("mock decoder commutes with rolling at the pixel scale") {
    Decoder dec = linear_mock_decoder(9);
    Grid z = gaussian_grid({4, 6, kLatentChannels}, Rng(2));
    Grid a = dec(roll(z, 1, 2));
    Grid b = roll(dec(z), 8, 16);
    CHECK(grid_bitwise_equal(a, b));
}

TEST_CASE("single-patch decode is the plain decode") {
    Decoder dec = linear_mock_decoder(5);
    Grid z = gaussian_grid({32, 32, kLatentChannels}, Rng(3));
    PatchedDecodeConfig cfg;
    cfg.patch = 64;
    Grid a = patched_decode(dec, z, cfg);
    CHECK(grid_bitwise_equal(a, dec(z)));
}

TEST_CASE("patched decode matches the full decode") {
    Decoder dec = linear_mock_decoder(21);
    Grid z = gaussian_grid({128, 128, kLatentChannels}, Rng(4));
    PatchedDecodeConfig cfg;
    cfg.patch = 64;
    cfg.overlap = 0.25;
    Grid patched = patched_decode(dec, z, cfg);
    Grid full = dec(z);
    CHECK(grid_rmse(patched, full) < 1e-4);
}

TEST_CASE("patched decode keeps the wrap seam ordinary at the latent scale") {
    Decoder dec = linear_mock_decoder(21);
    Grid z = gaussian_grid({128, 128, kLatentChannels}, Rng(6));
    PatchedDecodeConfig cfg;
    cfg.patch = 64;
    Grid img = patched_decode(dec, z, cfg);
    // decoded pixels replicate in 8x8 blocks; measure at the latent grid
    Grid small = downsample_latent(img, kDecodeFactor);
    double seam = seam_energy(small, small.height());
    double interior = interior_gradient_energy(small, small.height());
    CHECK(seam < 2.0 * interior);
}

TEST_CASE("patched decode is deterministic across parallelism settings") {
    Decoder dec = linear_mock_decoder(30);
    Grid z = gaussian_grid({128, 128, kLatentChannels}, Rng(5));
    PatchedDecodeConfig serial;
    serial.patch = 64;
    serial.max_parallel = 1;
    PatchedDecodeConfig parallel = serial;
    parallel.max_parallel = 8;
    CHECK(grid_bitwise_equal(patched_decode(dec, z, serial),
                             patched_decode(dec, z, parallel)));
}

TEST_CASE("patched decode validation") {
    Decoder dec = linear_mock_decoder(1);
    PatchedDecodeConfig cfg;
    CHECK_THROWS_AS(patched_decode(dec, Grid(8, 8, 3), cfg), std::invalid_argument);
    PatchedDecodeConfig bad = cfg;
    bad.overlap = 0.0;
    CHECK_THROWS_AS(patched_decode(dec, Grid(8, 8, kLatentChannels), bad),
                    std::invalid_argument);
    bad.overlap = 0.7;
    CHECK_THROWS_AS(patched_decode(dec, Grid(8, 8, kLatentChannels), bad),
                    std::invalid_argument);
}

TEST_CASE("transient memory does not scale with the latent size") {
    Decoder dec = linear_mock_decoder(8);
    PatchedDecodeConfig cfg;
    cfg.patch = 64;
    cfg.max_parallel = 1;

    auto transient_excess = [&](int size) {
        Grid z = gaussian_grid({size, size, kLatentChannels}, Rng(7));
        std::size_t out_bytes = static_cast<std::size_t>(size) * 8 * size * 8 *
                                kMaterialChannels * sizeof(double);
        std::size_t before = alloc_stats::current_bytes();
        alloc_stats::reset_peak();
        Grid img = patched_decode(dec, z, cfg);
        std::size_t peak = alloc_stats::peak_bytes();
        return static_cast<double>(peak - before - out_bytes);
    };

    double small = transient_excess(128);
    double large = transient_excess(256);
    // the working set is one patch plus the coarse reference, both capped by
    // the patch size, so quadrupling the output must not grow it much
    CHECK(large < small * 1.15 + 1e6);
}

}  // TEST_SUITE
