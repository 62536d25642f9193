// SPDX-License-Identifier: MIT
#include "tilemat/decode.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>
#include <vector>

#include "tilemat/multiscale.hpp"
#include "tilemat/rng.hpp"

namespace tilemat {

Decoder linear_mock_decoder(std::uint64_t seed) {
    // fixed 9x14 channel mix; kept modest so decoded values stay O(1)
    std::vector<double> mix(static_cast<std::size_t>(kMaterialChannels) * kLatentChannels);
    Rng rng(seed);
    for (auto& m : mix) m = (rng.uniform() - 0.5) * 0.7;
    return [mix = std::move(mix)](const Grid& z) {
        if (z.channels() != kLatentChannels)
            throw std::invalid_argument("decoder expects a 14-channel latent");
        int h = z.height(), w = z.width();
        Grid out(h * kDecodeFactor, w * kDecodeFactor, kMaterialChannels);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int o = 0; o < kMaterialChannels; ++o) {
                    double v = 0.0;
                    for (int k = 0; k < kLatentChannels; ++k)
                        v += mix[static_cast<std::size_t>(o) * kLatentChannels + k] *
                             z.at(y, x, k);
                    for (int dy = 0; dy < kDecodeFactor; ++dy)
                        for (int dx = 0; dx < kDecodeFactor; ++dx)
                            out.at(y * kDecodeFactor + dy, x * kDecodeFactor + dx, o) = v;
                }
        return out;
    };
}

std::vector<double> blend_profile(int n, double sigma_frac) {
    if (n < 4) throw std::invalid_argument("blend profile needs at least 4 samples");
    if (!(sigma_frac > 0.0)) throw std::invalid_argument("sigma_frac must be positive");
    double c = 0.5 * (n - 1);
    double sigma = sigma_frac * n;
    double floor_v = std::exp(-0.5 * (c / sigma) * (c / sigma));
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i) {
        double d = (i - c) / sigma;
        p[i] = std::exp(-0.5 * d * d) - floor_v;
    }
    return p;
}

Grid gaussian_weights(int patch_px, double sigma_frac) {
    std::vector<double> p = blend_profile(patch_px, sigma_frac);
    Grid w(patch_px, patch_px, 1);
    for (int y = 0; y < patch_px; ++y)
        for (int x = 0; x < patch_px; ++x) w.at(y, x, 0) = p[y] * p[x];
    return w;
}

void mean_match(Grid& patch, const std::vector<double>& ref_means) {
    if (ref_means.size() != static_cast<std::size_t>(patch.channels()))
        throw std::invalid_argument("mean_match: one reference mean per channel");
    for (int k = 0; k < patch.channels(); ++k) {
        double shift = ref_means[k] - grid_mean_channel(patch, k);
        for (int y = 0; y < patch.height(); ++y)
            for (int x = 0; x < patch.width(); ++x) patch.at(y, x, k) += shift;
    }
}

void mean_match(Grid& patch, const Grid& ref_region) {
    if (ref_region.channels() != patch.channels())
        throw std::invalid_argument("mean_match: channel mismatch");
    std::vector<double> means(patch.channels());
    for (int k = 0; k < patch.channels(); ++k) means[k] = grid_mean_channel(ref_region, k);
    mean_match(patch, means);
}

namespace {

Grid crop_wrapped(const Grid& g, int y0, int x0, int size) {
    Grid out(size, size, g.channels());
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            for (int k = 0; k < g.channels(); ++k)
                out.at(y, x, k) = g.wrap_at(y0 + y, x0 + x, k);
    return out;
}

// per-channel means of ref over the wrapped pixel rect [y0, y0+n) x [x0, x0+n)
std::vector<double> region_means(const Grid& ref, int y0, int x0, int n) {
    std::vector<double> means(ref.channels(), 0.0);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            for (int k = 0; k < ref.channels(); ++k)
                means[static_cast<std::size_t>(k)] += ref.wrap_at(y0 + y, x0 + x, k);
    double inv = 1.0 / (static_cast<double>(n) * n);
    for (auto& m : means) m *= inv;
    return means;
}

}  // namespace

Grid patched_decode(const Decoder& decoder, const Grid& z, const PatchedDecodeConfig& cfg) {
    if (z.channels() != kLatentChannels)
        throw std::invalid_argument("patched_decode expects a 14-channel latent");
    if (cfg.patch < 1) throw std::invalid_argument("patch size must be positive");
    if (!(cfg.overlap > 0.0) || cfg.overlap > 0.5)
        throw std::invalid_argument("overlap must be in (0, 0.5]");

    auto decode_checked = [&](const Grid& in) {
        Grid d = decoder(in);
        if (d.height() != in.height() * kDecodeFactor ||
            d.width() != in.width() * kDecodeFactor || d.channels() != kMaterialChannels)
            throw std::runtime_error("decoder must upscale by 8x into 9 channels");
        return d;
    };

    int h = z.height(), w = z.width();
    int p = cfg.patch;
    if (h <= p && w <= p) return decode_checked(z);  // degenerate: one pass

    // reference scale: smallest power-of-two shrink that fits a single patch
    int s = 1;
    while (h / s > p || w / s > p) s *= 2;
    if (h % s != 0 || w % s != 0)
        throw std::invalid_argument("latent dimensions must be divisible by the reference scale");
    if (p % s != 0)
        throw std::invalid_argument("reference scale must divide the patch size");

    // patch stride, snapped down so patch origins stay aligned with the
    // reference blocks (keeps regional means exactly consistent) and capped
    // so every border pixel is interior to a neighboring patch
    int stride = static_cast<int>(std::llround(p * (1.0 - cfg.overlap)));
    stride = std::min(stride, p - 2);
    stride -= stride % s;
    if (stride < 1) throw std::invalid_argument("patch configuration leaves no valid stride");

    Grid ref = decode_checked(downsample_latent(z, s));

    int pp = p * kDecodeFactor;
    std::vector<double> profile = blend_profile(pp, cfg.sigma_frac);
    int H = h * kDecodeFactor, W = w * kDecodeFactor;

    std::vector<int> ys, xs;
    for (int y = 0; y < h; y += stride) ys.push_back(y);
    for (int x = 0; x < w; x += stride) xs.push_back(x);

    // separable per-pixel weight sums: patch positions form a Cartesian grid
    std::vector<double> sum_y(H, 0.0), sum_x(W, 0.0);
    for (int y0 : ys)
        for (int i = 0; i < pp; ++i) sum_y[(y0 * kDecodeFactor + i) % H] += profile[i];
    for (int x0 : xs)
        for (int j = 0; j < pp; ++j) sum_x[(x0 * kDecodeFactor + j) % W] += profile[j];
    for (double v : sum_y)
        if (!(v > 0.0)) throw std::logic_error("blend weights do not cover every row");
    for (double v : sum_x)
        if (!(v > 0.0)) throw std::logic_error("blend weights do not cover every column");

    std::vector<std::pair<int, int>> positions;
    for (int y0 : ys)
        for (int x0 : xs) positions.emplace_back(y0, x0);

    Grid out(H, W, kMaterialChannels);
    int mp = std::max(1, cfg.max_parallel);

    auto decode_one = [&](int y0, int x0) {
        Grid d = decode_checked(crop_wrapped(z, y0, x0, p));
        // the patch's footprint in the coarse reference, in decoded pixels
        std::vector<double> means = region_means(ref, y0 / s * kDecodeFactor,
                                                 x0 / s * kDecodeFactor,
                                                 p / s * kDecodeFactor);
        mean_match(d, means);
        return d;
    };

    for (std::size_t base = 0; base < positions.size(); base += mp) {
        std::size_t end = std::min(positions.size(), base + mp);
        std::vector<Grid> decoded(end - base);
        if (mp == 1) {
            decoded[0] = decode_one(positions[base].first, positions[base].second);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(end - base);
            for (std::size_t i = base; i < end; ++i)
                pool.emplace_back([&, i] {
                    try {
                        decoded[i - base] =
                            decode_one(positions[i].first, positions[i].second);
                    } catch (...) {
                        errors[i - base] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        // serial accumulation: overlapping regions, fixed order
        for (std::size_t i = base; i < end; ++i) {
            const Grid& d = decoded[i - base];
            int py = positions[i].first * kDecodeFactor;
            int px = positions[i].second * kDecodeFactor;
            for (int y = 0; y < pp; ++y) {
                int oy = (py + y) % H;
                for (int x = 0; x < pp; ++x) {
                    int ox = (px + x) % W;
                    double wgt = profile[y] * profile[x];
                    for (int k = 0; k < kMaterialChannels; ++k)
                        out.at(oy, ox, k) += wgt * d.at(y, x, k);
                }
            }
        }
    }

    for (int y = 0; y < H; ++y) {
        double inv_y = 1.0 / sum_y[y];
        for (int x = 0; x < W; ++x) {
            double inv = inv_y / sum_x[x];
            for (int k = 0; k < kMaterialChannels; ++k) out.at(y, x, k) *= inv;
        }
    }
    return out;
}

}  // namespace tilemat
