// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>

#include "tilemat/grid.hpp"

namespace tilemat {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline Vec3 operator*(double s, Vec3 a) { return a * s; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) {
    double n = length(a);
    return n > 0.0 ? a * (1.0 / n) : Vec3{0.0, 0.0, 1.0};
}

// Material map channel layout (9 channels total).
namespace material_channel {
inline constexpr int base_r = 0;
inline constexpr int base_g = 1;
inline constexpr int base_b = 2;
inline constexpr int normal_x = 3;
inline constexpr int normal_y = 4;
inline constexpr int height = 5;
inline constexpr int roughness = 6;
inline constexpr int metalness = 7;
inline constexpr int opacity = 8;
inline constexpr int count = 9;
}  // namespace material_channel

// 9-channel per-texel material description on a tileable grid. Normals are
// tangent-space with +z out of the surface; only xy is stored, z is
// reconstructed. Height is in surface units per texel of slope.
class MaterialMaps {
  public:
    explicit MaterialMaps(Grid g);

    // clamps each channel into its valid range (basecolor, metalness and
    // opacity to [0,1], roughness to [0.01,1], normal xy into the unit disk)
    static MaterialMaps from_grid(Grid g);

    const Grid& grid() const { return g_; }
    Grid& grid() { return g_; }
    int height() const { return g_.height(); }
    int width() const { return g_.width(); }

    Vec3 basecolor(int y, int x) const {
        return {g_.at(y, x, material_channel::base_r), g_.at(y, x, material_channel::base_g),
                g_.at(y, x, material_channel::base_b)};
    }
    double roughness(int y, int x) const { return g_.at(y, x, material_channel::roughness); }
    double metalness(int y, int x) const { return g_.at(y, x, material_channel::metalness); }
    double opacity(int y, int x) const { return g_.at(y, x, material_channel::opacity); }
    double height_at(int y, int x) const { return g_.at(y, x, material_channel::height); }

    // stored normal combined with height-derived slopes scaled by
    // displacement_factor, renormalized
    Vec3 shading_normal(int y, int x, double displacement_factor) const;

  private:
    Grid g_;
};

struct LightSpec {
    enum class Type { directional, point };
    Type type = Type::directional;
    // directional: direction toward the light; point: position in tile units
    // (the tile spans [0,1) x [0,1) at z = 0)
    Vec3 vec{0.0, 0.0, 1.0};
    double intensity = 1.0;

    static LightSpec directional(Vec3 toward, double intensity = 1.0);
    static LightSpec point(Vec3 position, double intensity = 1.0);
};

// microfacet pieces, exposed so they can be checked in isolation
double ggx_d(double nh, double alpha);
double smith_g(double nl, double nv, double alpha);
double schlick_f(double cos_theta, double f0);

// Cook-Torrance style BRDF value (no cosine term): Lambert diffuse scaled by
// (1 - metalness), GGX specular with height-correlated Smith shadowing and
// Schlick Fresnel (f0 = 0.04 lerped to basecolor by metalness). Zero when
// either direction is below the surface.
Vec3 brdf_eval(Vec3 basecolor, double roughness, double metalness, Vec3 n, Vec3 l, Vec3 v);

// Renders outgoing radiance toward `view` (default straight up). Point lights
// fall off with inverse squared distance in tile units. Opacity scales the
// result.
Grid render(const MaterialMaps& maps, const LightSpec& light,
            double displacement_factor = 0.0, Vec3 view = {0.0, 0.0, 1.0});

// Same lighting but neutral gray: basecolor 0.5, roughness 0.7, metalness 0.
// Geometry (normals, height, opacity) comes from the maps.
Grid clay_render(const MaterialMaps& maps, const LightSpec& light,
                 double displacement_factor = 0.0, Vec3 view = {0.0, 0.0, 1.0});

// Toroidal central differences of a single-channel height map, scaled by
// displacement_factor, packed as normal xy channels.
Grid height_to_normal(const Grid& height, double displacement_factor);

struct DisplacementFit {
    double factor = 0.0;
    double residual = 0.0;   // rmse between fitted and target normal xy
    bool degenerate = false; // height has no usable gradient
};

// Scalar fit of the displacement factor that best reproduces target_xy from
// the height map, by golden-section search on [0, max_factor].
DisplacementFit fit_displacement_factor(const Grid& height, const Grid& target_xy,
                                        double max_factor = 10.0);

// --- comparison metrics ---

// mean(1 - dot) between normals given as xy maps (z reconstructed)
double normal_cosine_error(const Grid& a_xy, const Grid& b_xy);

// mean SSIM over channels; 11x11 Gaussian window (sigma 1.5), toroidal,
// signal range treated as [0, 1]
double ssim(const Grid& a, const Grid& b);

}  // namespace tilemat
