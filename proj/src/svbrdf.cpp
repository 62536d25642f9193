// SPDX-License-Identifier: MIT
#include "tilemat/svbrdf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace tilemat {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

// slope of a wrapped height channel, central differences, per texel
void height_slopes(const Grid& g, int ch, int y, int x, double& gx, double& gy) {
    gx = 0.5 * (g.wrap_at(y, x + 1, ch) - g.wrap_at(y, x - 1, ch));
    gy = 0.5 * (g.wrap_at(y + 1, x, ch) - g.wrap_at(y - 1, x, ch));
}

}  // namespace

MaterialMaps::MaterialMaps(Grid g) : g_(std::move(g)) {
    if (g_.channels() != material_channel::count)
        throw std::invalid_argument("material maps need 9 channels");
}

MaterialMaps MaterialMaps::from_grid(Grid g) {
    MaterialMaps m(std::move(g));
    Grid& gr = m.g_;
    for (int y = 0; y < gr.height(); ++y)
        for (int x = 0; x < gr.width(); ++x) {
            for (int k : {material_channel::base_r, material_channel::base_g,
                          material_channel::base_b, material_channel::metalness,
                          material_channel::opacity})
                gr.at(y, x, k) = clamp01(gr.at(y, x, k));
            gr.at(y, x, material_channel::roughness) =
                std::clamp(gr.at(y, x, material_channel::roughness), 0.01, 1.0);
            double nx = gr.at(y, x, material_channel::normal_x);
            double ny = gr.at(y, x, material_channel::normal_y);
            double s2 = nx * nx + ny * ny;
            if (s2 > 1.0) {
                double inv = 1.0 / std::sqrt(s2);
                gr.at(y, x, material_channel::normal_x) = nx * inv;
                gr.at(y, x, material_channel::normal_y) = ny * inv;
            }
        }
    return m;
}

Vec3 MaterialMaps::shading_normal(int y, int x, double displacement_factor) const {
    double nx = g_.at(y, x, material_channel::normal_x);
    double ny = g_.at(y, x, material_channel::normal_y);
    double nz = std::sqrt(std::max(0.0, 1.0 - nx * nx - ny * ny));
    nz = std::max(nz, 1e-6);
    double sx = nx / nz, sy = ny / nz;
    if (displacement_factor != 0.0) {
        double gx, gy;
        height_slopes(g_, material_channel::height, y, x, gx, gy);
        sx -= displacement_factor * gx;
        sy -= displacement_factor * gy;
    }
    return normalized({sx, sy, 1.0});
}

LightSpec LightSpec::directional(Vec3 toward, double intensity) {
    LightSpec l;
    l.type = Type::directional;
    l.vec = normalized(toward);
    l.intensity = intensity;
    return l;
}

LightSpec LightSpec::point(Vec3 position, double intensity) {
    LightSpec l;
    l.type = Type::point;
    l.vec = position;
    l.intensity = intensity;
    return l;
}

double ggx_d(double nh, double alpha) {
    if (nh <= 0.0) return 0.0;
    double a2 = alpha * alpha;
    double k = nh * nh * (a2 - 1.0) + 1.0;
    return a2 / (std::numbers::pi * k * k);
}

double smith_g(double nl, double nv, double alpha) {
    if (nl <= 0.0 || nv <= 0.0) return 0.0;
    double a2 = alpha * alpha;
    double gl = std::sqrt(a2 + (1.0 - a2) * nl * nl);
    double gv = std::sqrt(a2 + (1.0 - a2) * nv * nv);
    return 2.0 * nl * nv / (nv * gl + nl * gv);
}

double schlick_f(double cos_theta, double f0) {
    double m = 1.0 - std::clamp(cos_theta, 0.0, 1.0);
    double m2 = m * m;
    return f0 + (1.0 - f0) * m2 * m2 * m;
}

Vec3 brdf_eval(Vec3 basecolor, double roughness, double metalness, Vec3 n, Vec3 l, Vec3 v) {
    double nl = dot(n, l);
    double nv = dot(n, v);
    if (nl <= 0.0 || nv <= 0.0) return {};
    double kd = (1.0 - metalness) / std::numbers::pi;
    Vec3 h = normalized(l + v);
    double nh = dot(n, h);
    double lh = dot(l, h);
    double alpha = roughness * roughness;
    double dg = ggx_d(nh, alpha) * smith_g(nl, nv, alpha) / (4.0 * nl * nv);
    auto channel = [&](double base) {
        double f0 = 0.04 + (base - 0.04) * metalness;
        return base * kd + dg * schlick_f(lh, f0);
    };
    return {channel(basecolor.x), channel(basecolor.y), channel(basecolor.z)};
}

Grid render(const MaterialMaps& maps, const LightSpec& light, double displacement_factor,
            Vec3 view) {
    Vec3 v = normalized(view);
    int h = maps.height(), w = maps.width();
    Grid out(h, w, 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            Vec3 n = maps.shading_normal(y, x, displacement_factor);
            Vec3 l;
            double atten = light.intensity;
            if (light.type == LightSpec::Type::directional) {
                l = light.vec;
            } else {
                Vec3 p{(x + 0.5) / w, (y + 0.5) / h, 0.0};
                Vec3 delta = light.vec - p;
                double d2 = std::max(dot(delta, delta), 1e-12);
                l = delta * (1.0 / std::sqrt(d2));
                atten /= d2;
            }
            double nl = dot(n, l);
            if (nl <= 0.0) continue;
            Vec3 f = brdf_eval(maps.basecolor(y, x), maps.roughness(y, x),
                               maps.metalness(y, x), n, l, v);
            double scale = nl * atten * maps.opacity(y, x);
            out.at(y, x, 0) = f.x * scale;
            out.at(y, x, 1) = f.y * scale;
            out.at(y, x, 2) = f.z * scale;
        }
    return out;
}

Grid clay_render(const MaterialMaps& maps, const LightSpec& light, double displacement_factor,
                 Vec3 view) {
    Grid g = maps.grid();
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) {
            g.at(y, x, material_channel::base_r) = 0.5;
            g.at(y, x, material_channel::base_g) = 0.5;
            g.at(y, x, material_channel::base_b) = 0.5;
            g.at(y, x, material_channel::roughness) = 0.7;
            g.at(y, x, material_channel::metalness) = 0.0;
        }
    return render(MaterialMaps(std::move(g)), light, displacement_factor, view);
}

Grid height_to_normal(const Grid& height, double displacement_factor) {
    if (height.channels() != 1)
        throw std::invalid_argument("height map must have one channel");
    Grid out(height.height(), height.width(), 2);
    for (int y = 0; y < height.height(); ++y)
        for (int x = 0; x < height.width(); ++x) {
            double gx, gy;
            height_slopes(height, 0, y, x, gx, gy);
            Vec3 n = normalized({-displacement_factor * gx, -displacement_factor * gy, 1.0});
            out.at(y, x, 0) = n.x;
            out.at(y, x, 1) = n.y;
        }
    return out;
}

DisplacementFit fit_displacement_factor(const Grid& height, const Grid& target_xy,
                                        double max_factor) {
    if (height.channels() != 1)
        throw std::invalid_argument("height map must have one channel");
    if (target_xy.channels() != 2 || target_xy.height() != height.height() ||
        target_xy.width() != height.width())
        throw std::invalid_argument("target normals must be an xy map matching the height map");
    if (!(max_factor > 0.0)) throw std::invalid_argument("max_factor must be positive");

    auto objective = [&](double d) {
        return grid_rmse(height_to_normal(height, d), target_xy);
    };

    double grad_energy = 0.0;
    for (int y = 0; y < height.height(); ++y)
        for (int x = 0; x < height.width(); ++x) {
            double gx, gy;
            height_slopes(height, 0, y, x, gx, gy);
            grad_energy += gx * gx + gy * gy;
        }
    grad_energy /= static_cast<double>(height.height()) * height.width();

    DisplacementFit fit;
    if (grad_energy < 1e-14) {
        fit.degenerate = true;
        fit.residual = objective(0.0);
        return fit;
    }

    // golden-section search; the residual is smooth and unimodal in the factor
    constexpr double invphi = 0.6180339887498949;
    double a = 0.0, b = max_factor;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    while (b - a > 1e-6) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }
    fit.factor = 0.5 * (a + b);
    fit.residual = objective(fit.factor);
    return fit;
}

double normal_cosine_error(const Grid& a_xy, const Grid& b_xy) {
    if (a_xy.channels() != 2 || b_xy.channels() != 2)
        throw std::invalid_argument("normal maps must carry xy channels");
    if (!a_xy.same_shape(b_xy)) throw std::invalid_argument("normal maps must match");
    auto lift = [](const Grid& g, int y, int x) {
        double nx = g.at(y, x, 0), ny = g.at(y, x, 1);
        double nz = std::sqrt(std::max(0.0, 1.0 - nx * nx - ny * ny));
        return normalized({nx, ny, nz});
    };
    double e = 0.0;
    for (int y = 0; y < a_xy.height(); ++y)
        for (int x = 0; x < a_xy.width(); ++x)
            e += 1.0 - dot(lift(a_xy, y, x), lift(b_xy, y, x));
    return e / (static_cast<double>(a_xy.height()) * a_xy.width());
}

double ssim(const Grid& a, const Grid& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("ssim: shape mismatch");
    constexpr int radius = 5;  // 11x11 window
    constexpr double sigma = 1.5;
    constexpr double c1 = 0.01 * 0.01;
    constexpr double c2 = 0.03 * 0.03;
    double wline[2 * radius + 1];
    double wsum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        wline[i + radius] = std::exp(-0.5 * (i * i) / (sigma * sigma));
        wsum += wline[i + radius];
    }
    for (double& v : wline) v /= wsum;

    double total = 0.0;
    for (int ch = 0; ch < a.channels(); ++ch) {
        double acc = 0.0;
        for (int y = 0; y < a.height(); ++y)
            for (int x = 0; x < a.width(); ++x) {
                double ma = 0, mb = 0, maa = 0, mbb = 0, mab = 0;
                for (int dy = -radius; dy <= radius; ++dy)
                    for (int dx = -radius; dx <= radius; ++dx) {
                        double wgt = wline[dy + radius] * wline[dx + radius];
                        double va = a.wrap_at(y + dy, x + dx, ch);
                        double vb = b.wrap_at(y + dy, x + dx, ch);
                        ma += wgt * va;
                        mb += wgt * vb;
                        maa += wgt * va * va;
                        mbb += wgt * vb * vb;
                        mab += wgt * va * vb;
                    }
                double va = maa - ma * ma;
                double vb = mbb - mb * mb;
                double cov = mab - ma * mb;
                acc += (2.0 * ma * mb + c1) * (2.0 * cov + c2) /
                       ((ma * ma + mb * mb + c1) * (va + vb + c2));
            }
        total += acc / (static_cast<double>(a.height()) * a.width());
    }
    return total / a.channels();
}

}  // namespace tilemat
