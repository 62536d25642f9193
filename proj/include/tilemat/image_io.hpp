// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <string>

#include "tilemat/grid.hpp"
#include "tilemat/svbrdf.hpp"

namespace tilemat {

// sRGB transfer functions (linear <-> display)
double srgb_encode(double linear);
double srgb_decode(double srgb);

// 16-bit PNG. 1 channel writes grayscale, 3 channels RGB; values are clamped
// to [0, 1]. Reading accepts 8- or 16-bit gray/RGB (palette expanded, alpha
// dropped) and returns values in [0, 1].
void write_png16(const std::string& path, const Grid& img);
Grid read_png16(const std::string& path);

// Everything needed to reproduce a sampling run. Serialized into the
// material manifest, so re-running the same config yields the same bytes.
struct RunConfig {
    int resolution = 512;  // decoded material size in pixels
    int base = 64;         // starting latent size for the coarse stage
    int steps = 50;
    double eta = 0.0;
    int patch = 64;
    int max_roll = -1;  // -1 picks the largest latent dimension
    int max_parallel = 8;
    double overlap = 0.25;
    double restart_strength = 0.6;
    std::uint64_t seed = 0;
    std::string oracle = "smoothing";
};

struct MaterialManifest {
    double displacement_factor = 0.0;
    RunConfig config;
};

// Writes the six material PNGs plus material.json into dir (created if
// missing). Basecolor is sRGB-encoded, normals are stored as (n + 1) / 2 RGB
// with z reconstructed, the scalar maps are linear gray. All channels clamp
// to [0, 1] on write. No timestamps anywhere: identical inputs give
// byte-identical files.
void save_material(const std::string& dir, const MaterialMaps& maps,
                   const MaterialManifest& manifest);

struct LoadedMaterial {
    Grid maps;  // 9 channels, material_channel layout
    MaterialManifest manifest;
};

LoadedMaterial load_material(const std::string& dir);

}  // namespace tilemat
