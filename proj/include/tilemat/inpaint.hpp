// SPDX-License-Identifier: MIT
#pragma once

#include "tilemat/grid.hpp"
#include "tilemat/rng.hpp"
#include "tilemat/sampler.hpp"

namespace tilemat {

// Single-channel masks use 1 for "fill this" and 0 for "keep this".

// Ring of masked pixels along the tile border. The ring width is frac of the
// grid extent per axis, rounded to the nearest pixel; a width that rounds to
// zero is rejected.
Grid border_mask(int height, int width, double frac);

// Axis-aligned random rectangle. Its area is uniform in [0, max_frac * h * w]
// and its aspect ratio log-uniform in [1/2, 2]; placement is uniform among
// positions fully inside the grid. Expected masked fraction is max_frac / 2.
Grid random_area_mask(int height, int width, double max_frac, Rng& rng);

double mask_fraction(const Grid& mask);

// 4-channel conditioning image: RGB with masked pixels zeroed, mask in
// channel 3.
Grid pack_condition(const Grid& rgb, const Grid& mask);
Grid unpack_condition_rgb(const Grid& condition);
Grid unpack_condition_mask(const Grid& condition);

// Per-pixel blend of two denoisers: `fill` drives masked pixels, `keep`
// drives the rest. The mask is broadcast across channels.
Denoiser masked_blend_denoiser(Denoiser fill, Denoiser keep, Grid mask);

}  // namespace tilemat
