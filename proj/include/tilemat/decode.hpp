// SPDX-License-Identifier: MIT
#pragma once

#include <functional>

#include "tilemat/grid.hpp"

namespace tilemat {

inline constexpr int kDecodeFactor = 8;
inline constexpr int kLatentChannels = 14;
inline constexpr int kMaterialChannels = 9;

// Latent (h, w, 14) -> pixel (8h, 8w, 9). Implementations must be pure and
// translation-covariant so patch decodes are comparable with full decodes.
using Decoder = std::function<Grid(const Grid& z)>;

// Fixed per-channel linear mix (seeded, no bias) followed by 8x block
// replication. Linear, local, exactly covariant under rolls, so the patched
// path can be checked against the single-pass path to float precision.
Decoder linear_mock_decoder(std::uint64_t seed);

// 1-D blend profile of length n: a Gaussian centered on the patch, shifted so
// both endpoints are exactly 0, positive inside, symmetric. sigma_frac scales
// sigma as a fraction of n.
std::vector<double> blend_profile(int n, double sigma_frac);

// separable 2-D weights: outer product of the 1-D profile
Grid gaussian_weights(int patch_px, double sigma_frac);

// Shift the patch per channel so its mean matches the reference region mean.
// Spread is untouched (pure translation in value space).
void mean_match(Grid& patch, const Grid& ref_region);
void mean_match(Grid& patch, const std::vector<double>& ref_means);

struct PatchedDecodeConfig {
    int patch = 64;           // patch edge in latent cells
    double overlap = 0.25;    // fraction of the patch shared with a neighbor
    double sigma_frac = 0.25; // blend kernel width
    int max_parallel = 8;     // concurrent patch decodes
};

// Seamless full-resolution decode from overlapping latent patches:
//   1. one-pass low-resolution reference: decode of the block-mean
//      downsampled latent (small enough to fit a single patch)
//   2. decode overlapping patches (toroidal placement, so the output tiles)
//   3. per-channel mean matching of each decoded patch against the
//      reference region it covers
//   4. blend with the Gaussian weights; per-pixel weight sums factor into
//      two 1-D accumulators, keeping transient memory at one patch + the
//      reference regardless of output resolution
Grid patched_decode(const Decoder& decoder, const Grid& z, const PatchedDecodeConfig& cfg);

}  // namespace tilemat
