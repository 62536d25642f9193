// SPDX-License-Identifier: MIT
#include "tilemat/inpaint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tilemat {

Grid border_mask(int height, int width, double frac) {
    if (!(frac > 0.0) || frac >= 0.5)
        throw std::invalid_argument("border fraction must be in (0, 0.5)");
    int wy = static_cast<int>(std::llround(frac * height));
    int wx = static_cast<int>(std::llround(frac * width));
    if (wy < 1 || wx < 1)
        throw std::invalid_argument("border fraction rounds to an empty border ring");
    Grid mask(height, width, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (y < wy || y >= height - wy || x < wx || x >= width - wx)
                mask.at(y, x, 0) = 1.0;
    return mask;
}

Grid random_area_mask(int height, int width, double max_frac, Rng& rng) {
    if (!(max_frac > 0.0) || max_frac > 1.0)
        throw std::invalid_argument("max_frac must be in (0, 1]");
    double area = rng.uniform() * max_frac * height * width;
    double log2_aspect = 2.0 * rng.uniform() - 1.0;  // aspect in [1/2, 2]
    double aspect = std::exp2(log2_aspect);
    int rh = static_cast<int>(std::llround(std::sqrt(area * aspect)));
    rh = std::clamp(rh, 1, height);
    int rw = static_cast<int>(std::llround(area / rh));
    rw = std::clamp(rw, 1, width);
    int y0 = rng.uniform_int(0, height - rh);
    int x0 = rng.uniform_int(0, width - rw);
    Grid mask(height, width, 1);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x) mask.at(y, x, 0) = 1.0;
    return mask;
}

double mask_fraction(const Grid& mask) {
    if (mask.channels() != 1) throw std::invalid_argument("mask must have one channel");
    return grid_mean(mask);
}

Grid pack_condition(const Grid& rgb, const Grid& mask) {
    if (rgb.channels() != 3) throw std::invalid_argument("condition image must be RGB");
    if (mask.channels() != 1 || mask.height() != rgb.height() || mask.width() != rgb.width())
        throw std::invalid_argument("mask must be single-channel and match the image");
    Grid out(rgb.height(), rgb.width(), 4);
    for (int y = 0; y < rgb.height(); ++y)
        for (int x = 0; x < rgb.width(); ++x) {
            double m = mask.at(y, x, 0);
            for (int k = 0; k < 3; ++k) out.at(y, x, k) = m > 0.5 ? 0.0 : rgb.at(y, x, k);
            out.at(y, x, 3) = m;
        }
    return out;
}

Grid unpack_condition_rgb(const Grid& condition) {
    if (condition.channels() != 4)
        throw std::invalid_argument("condition must have four channels");
    Grid rgb(condition.height(), condition.width(), 3);
    for (int y = 0; y < condition.height(); ++y)
        for (int x = 0; x < condition.width(); ++x)
            for (int k = 0; k < 3; ++k) rgb.at(y, x, k) = condition.at(y, x, k);
    return rgb;
}

Grid unpack_condition_mask(const Grid& condition) {
    if (condition.channels() != 4)
        throw std::invalid_argument("condition must have four channels");
    Grid mask(condition.height(), condition.width(), 1);
    for (int y = 0; y < condition.height(); ++y)
        for (int x = 0; x < condition.width(); ++x) mask.at(y, x, 0) = condition.at(y, x, 3);
    return mask;
}

Denoiser masked_blend_denoiser(Denoiser fill, Denoiser keep, Grid mask) {
    if (mask.channels() != 1) throw std::invalid_argument("mask must have one channel");
    return [fill = std::move(fill), keep = std::move(keep),
            mask = std::move(mask)](const Grid& z, int t) {
        if (z.height() != mask.height() || z.width() != mask.width())
            throw std::invalid_argument("masked denoiser: grid does not match mask");
        Grid a = fill(z, t);
        Grid b = keep(z, t);
        Grid out(z.height(), z.width(), z.channels());
        for (int y = 0; y < z.height(); ++y)
            for (int x = 0; x < z.width(); ++x) {
                double m = mask.at(y, x, 0);
                for (int k = 0; k < z.channels(); ++k)
                    out.at(y, x, k) = m * a.at(y, x, k) + (1.0 - m) * b.at(y, x, k);
            }
        return out;
    };
}

}  // namespace tilemat
