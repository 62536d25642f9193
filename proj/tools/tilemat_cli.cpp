// SPDX-License-Identifier: MIT
// tilemat: tileable material synthesis and inspection from the command line.
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tilemat/decode.hpp"
#include "tilemat/image_io.hpp"
#include "tilemat/inpaint.hpp"
#include "tilemat/multiscale.hpp"
#include "tilemat/oracles.hpp"
#include "tilemat/svbrdf.hpp"
#include "tilemat/tiling.hpp"

using namespace tilemat;
using nlohmann::json;

namespace {

// fixed "weights" of the stand-in decoder; independent of --seed so the
// decoder acts like a frozen model
constexpr std::uint64_t kMockDecoderSeed = 0x7143a7;

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Turns an arbitrary image into a latent target: nearest-resampled to
// size x size, channels cycled, values remapped from [0,1] to [-1,1].
Grid latent_from_image(const Grid& img, int size, int channels) {
    Grid out(size, size, channels);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            int sy = static_cast<int>(static_cast<long long>(y) * img.height() / size);
            int sx = static_cast<int>(static_cast<long long>(x) * img.width() / size);
            for (int k = 0; k < channels; ++k)
                out.at(y, x, k) = 2.0 * img.at(sy, sx, k % img.channels()) - 1.0;
        }
    return out;
}

Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

struct SampleOpts {
    RunConfig cfg;
    std::string out = "material";
    std::string target;
    int smooth_radius = 6;
    double smooth_lambda = 0.9;
};

int run_sample(const SampleOpts& o) {
    const RunConfig& cfg = o.cfg;
    if (cfg.oracle != "smoothing" && cfg.oracle != "gaussian" && cfg.oracle != "attractor")
        throw std::invalid_argument("unknown oracle: " + cfg.oracle);
    if (cfg.oracle == "attractor" && o.target.empty())
        throw std::invalid_argument("the attractor oracle needs --target");

    bool ok = cfg.base >= 1 && cfg.patch >= 1 && cfg.resolution >= kDecodeFactor &&
              cfg.resolution % kDecodeFactor == 0;
    int latent = ok ? cfg.resolution / kDecodeFactor : 0;
    ok = ok && latent >= cfg.base && latent % cfg.base == 0 && is_pow2(latent / cfg.base);
    ok = ok && (cfg.patch >= cfg.base || cfg.base % cfg.patch == 0);
    if (!ok) throw std::invalid_argument("resolution must be divisible by patch stride");

    NoiseSchedule sched = NoiseSchedule::linear();
    int stages = 1;
    for (int s = cfg.base; s < latent; s *= 2) ++stages;

    // per-stage targets only matter for the attractor oracle
    std::vector<Grid> targets;
    if (cfg.oracle == "attractor") {
        Grid img = read_png16(o.target);
        Grid full = latent_from_image(img, latent, kLatentChannels);
        targets.resize(stages);
        targets[stages - 1] = full;
        for (int s = stages - 2; s >= 0; --s)
            targets[s] = downsample_latent(targets[s + 1], 2);
    }

    auto call_ns = std::make_shared<std::vector<std::atomic<std::uint64_t>>>(stages);
    auto calls = std::make_shared<std::vector<std::atomic<std::uint64_t>>>(stages);
    DenoiserBank bank = [&, call_ns, calls](int stage, GridShape) -> Denoiser {
        Denoiser inner;
        if (cfg.oracle == "gaussian")
            inner = make_gaussian_denoiser(sched, 0.0, 1.0);
        else if (cfg.oracle == "attractor")
            inner = make_attractor_denoiser(sched, targets[stage]);
        else
            inner = make_smoothing_denoiser(sched, o.smooth_radius, o.smooth_lambda);
        return [inner, call_ns, calls, stage](const Grid& z, int t) {
            auto t0 = std::chrono::steady_clock::now();
            Grid e = inner(z, t);
            auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
            (*call_ns)[stage] += static_cast<std::uint64_t>(ns);
            (*calls)[stage] += 1;
            return e;
        };
    };

    MultiscaleConfig mc;
    mc.base = cfg.base;
    mc.target = latent;
    mc.channels = kLatentChannels;
    mc.restart_strength = cfg.restart_strength;
    mc.sampler.steps = cfg.steps;
    mc.sampler.eta = cfg.eta;
    mc.sampler.patch = cfg.patch;
    mc.sampler.max_roll = cfg.max_roll;
    mc.sampler.max_parallel = cfg.max_parallel;

    auto t_sample = std::chrono::steady_clock::now();
    MultiscaleResult result = multiscale_sample(bank, mc, sched, Rng(cfg.seed));
    double sample_s = elapsed_s(t_sample);
    for (std::size_t i = 0; i < result.stages.size(); ++i) {
        const StageInfo& st = result.stages[i];
        std::cerr << "stage " << i << ": " << st.size << "x" << st.size << " latent, t_start "
                  << st.t_start << ", " << st.steps << " steps, " << (*calls)[i]
                  << " denoiser calls, " << (*call_ns)[i] / 1e9 << " s\n";
    }
    std::cerr << "sampling: " << sample_s << " s\n";

    auto t_decode = std::chrono::steady_clock::now();
    PatchedDecodeConfig dc;
    dc.patch = cfg.patch;
    dc.overlap = cfg.overlap;
    dc.max_parallel = cfg.max_parallel;
    Grid px = patched_decode(linear_mock_decoder(kMockDecoderSeed), result.latent, dc);
    std::cerr << "decode: " << elapsed_s(t_decode) << " s\n";

    // decoded channels are unconstrained reals; recenter everything except
    // the normal channels (which from_grid clamps into the unit disk)
    Grid m(px.height(), px.width(), material_channel::count);
    for (int y = 0; y < px.height(); ++y)
        for (int x = 0; x < px.width(); ++x)
            for (int k = 0; k < material_channel::count; ++k) {
                double v = px.at(y, x, k);
                bool is_normal =
                    k == material_channel::normal_x || k == material_channel::normal_y;
                m.at(y, x, k) = is_normal ? v : 0.5 + 0.5 * v;
            }
    MaterialMaps maps = MaterialMaps::from_grid(std::move(m));

    auto t_fit = std::chrono::steady_clock::now();
    Grid height = slice_channels(maps.grid(), material_channel::height, 1);
    Grid normal_xy = slice_channels(maps.grid(), material_channel::normal_x, 2);
    DisplacementFit fit = fit_displacement_factor(height, normal_xy);
    std::cerr << "displacement fit: " << elapsed_s(t_fit) << " s\n";

    MaterialManifest manifest;
    manifest.displacement_factor = fit.factor;
    manifest.config = cfg;
    save_material(o.out, maps, manifest);

    json summary{{"out", o.out},
                 {"resolution", cfg.resolution},
                 {"stages", static_cast<int>(result.stages.size())},
                 {"displacement_factor", fit.factor},
                 {"displacement_residual", fit.residual},
                 {"displacement_degenerate", fit.degenerate}};
    std::cout << summary.dump(2) << '\n';
    return 0;
}

struct TilecheckOpts {
    std::string dir;
    std::string image;
    double threshold = 2.0;
    int decimate = 0;  // 0 = auto: bundles at decode-grid scale, images as-is
};

int run_tilecheck(const TilecheckOpts& o) {
    if (o.dir.empty() == o.image.empty())
        throw std::invalid_argument("tilecheck needs exactly one of --input or --image");
    Grid img = o.dir.empty() ? read_png16(o.image) : load_material(o.dir).maps;

    // Decoded bundles replicate each latent cell over a pixel block, which
    // deflates interior gradients but not the wrap seam; measuring block
    // means puts both on the same footing.
    int dec = o.decimate > 0 ? o.decimate : (o.dir.empty() ? 1 : kDecodeFactor);
    if (img.height() % dec != 0 || img.width() % dec != 0)
        throw std::invalid_argument("decimation factor must divide the image size");
    if (dec > 1) img = downsample_latent(img, dec);
    int h = img.height(), w = img.width();

    // wrap seams only: period = extent leaves just the x=0 / y=0 boundaries.
    // Means are recombined weighted by pair counts so rectangles work too.
    double sv = seam_energy(img, w, SeamAxis::vertical);
    double sh = seam_energy(img, h, SeamAxis::horizontal);
    double seam = (sv * h + sh * w) / (h + w);
    double iv = interior_gradient_energy(img, w, SeamAxis::vertical);
    double ih = interior_gradient_energy(img, h, SeamAxis::horizontal);
    double nv = static_cast<double>(w - 1) * h, nh = static_cast<double>(h - 1) * w;
    double interior = nv + nh > 0.0 ? (iv * nv + ih * nh) / (nv + nh) : 0.0;

    double ratio = interior > 0.0 ? seam / interior : (seam > 0.0 ? 1e300 : 0.0);
    bool pass = ratio <= o.threshold;
    json report{{"schema", "tilemat.tilecheck/1"},
                {"seam_energy", seam},
                {"interior_energy", interior},
                {"ratio", ratio},
                {"threshold", o.threshold},
                {"pass", pass}};
    std::cout << report.dump(2) << '\n';
    return pass ? 0 : 3;
}

struct RenderOpts {
    std::string dir;
    std::string out = "render.png";
    std::string light_type = "directional";
    std::vector<double> light_vec;
    std::vector<double> view{0.0, 0.0, 1.0};
    double intensity = 1.0;
    double displacement = -1.0;  // <0: take the manifest value
    bool clay = false;
};

int run_render(const RenderOpts& o) {
    if (o.light_type != "directional" && o.light_type != "point")
        throw std::invalid_argument("light type must be directional or point");
    LoadedMaterial lm = load_material(o.dir);
    MaterialMaps maps = MaterialMaps::from_grid(std::move(lm.maps));
    double d = o.displacement >= 0.0 ? o.displacement : lm.manifest.displacement_factor;

    std::vector<double> lv = o.light_vec;
    if (lv.empty())
        lv = o.light_type == "point" ? std::vector<double>{0.5, 0.5, 1.0}
                                     : std::vector<double>{0.0, 0.0, 1.0};
    LightSpec light = o.light_type == "point"
                          ? LightSpec::point(to_vec3(lv), o.intensity)
                          : LightSpec::directional(to_vec3(lv), o.intensity);

    Grid radiance = o.clay ? clay_render(maps, light, d, to_vec3(o.view))
                           : render(maps, light, d, to_vec3(o.view));
    for (int y = 0; y < radiance.height(); ++y)
        for (int x = 0; x < radiance.width(); ++x)
            for (int k = 0; k < 3; ++k)
                radiance.at(y, x, k) = srgb_encode(radiance.at(y, x, k));
    write_png16(o.out, radiance);
    return 0;
}

struct FitOpts {
    std::string dir;
    std::string height_png;
    std::string normal_png;
    double max_factor = 10.0;
};

int run_fit(const FitOpts& o) {
    Grid height, normal_xy;
    if (!o.dir.empty()) {
        LoadedMaterial lm = load_material(o.dir);
        height = slice_channels(lm.maps, material_channel::height, 1);
        normal_xy = slice_channels(lm.maps, material_channel::normal_x, 2);
    } else if (!o.height_png.empty() && !o.normal_png.empty()) {
        Grid hg = read_png16(o.height_png);
        height = slice_channels(hg, 0, 1);
        Grid ng = read_png16(o.normal_png);
        if (ng.channels() < 2)
            throw std::invalid_argument("normal map must have at least two channels");
        normal_xy = Grid(ng.height(), ng.width(), 2);
        for (int y = 0; y < ng.height(); ++y)
            for (int x = 0; x < ng.width(); ++x)
                for (int k = 0; k < 2; ++k)
                    normal_xy.at(y, x, k) = 2.0 * ng.at(y, x, k) - 1.0;
    } else {
        throw std::invalid_argument("fit-displacement needs --input or both --height and --normal");
    }
    DisplacementFit fit = fit_displacement_factor(height, normal_xy, o.max_factor);
    json report{{"factor", fit.factor},
                {"residual", fit.residual},
                {"degenerate", fit.degenerate}};
    std::cout << report.dump(2) << '\n';
    return 0;
}

struct MetricsOpts {
    std::string a, b;
    bool normal_maps = false;
};

int run_metrics(const MetricsOpts& o) {
    Grid a = read_png16(o.a);
    Grid b = read_png16(o.b);
    json report{{"rmse", grid_rmse(a, b)}, {"ssim", ssim(a, b)}};
    if (o.normal_maps) {
        if (a.channels() < 2 || b.channels() < 2)
            throw std::invalid_argument("normal maps need at least two channels");
        Grid ax(a.height(), a.width(), 2), bx(b.height(), b.width(), 2);
        for (int y = 0; y < a.height(); ++y)
            for (int x = 0; x < a.width(); ++x)
                for (int k = 0; k < 2; ++k) {
                    ax.at(y, x, k) = 2.0 * a.at(y, x, k) - 1.0;
                    bx.at(y, x, k) = 2.0 * b.at(y, x, k) - 1.0;
                }
        report["normal_cosine"] = normal_cosine_error(ax, bx);
    }
    std::cout << report.dump(2) << '\n';
    return 0;
}

struct MaskOpts {
    std::string mode = "border";
    std::string out = "mask.png";
    int height = 64, width = 64;
    double frac = 0.0625;
    double max_frac = 0.4;
    std::uint64_t seed = 0;
};

int run_mask(const MaskOpts& o) {
    Grid mask;
    if (o.mode == "border") {
        mask = border_mask(o.height, o.width, o.frac);
    } else if (o.mode == "random") {
        Rng rng = Rng(o.seed).split(stream::mask);
        mask = random_area_mask(o.height, o.width, o.max_frac, rng);
    } else {
        throw std::invalid_argument("mask mode must be border or random");
    }
    write_png16(o.out, mask);
    json report{{"fraction", mask_fraction(mask)}};
    std::cout << report.dump(2) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tileable material synthesis toolkit"};
    app.require_subcommand(1);

    SampleOpts so;
    CLI::App* sample = app.add_subcommand("sample", "synthesize a tileable material bundle");
    sample->add_option("--res", so.cfg.resolution, "output resolution in pixels");
    sample->add_option("--base", so.cfg.base, "base latent size");
    sample->add_option("--steps", so.cfg.steps, "denoising steps for the base stage");
    sample->add_option("--eta", so.cfg.eta, "stochasticity (0 = deterministic)");
    sample->add_option("--patch", so.cfg.patch, "latent patch size");
    sample->add_option("--max-roll", so.cfg.max_roll, "per-step roll bound (-1 = full extent)");
    sample->add_option("--max-parallel-patches", so.cfg.max_parallel,
                       "patches processed concurrently");
    sample->add_option("--overlap", so.cfg.overlap, "decode patch overlap fraction");
    sample->add_option("--restart-strength", so.cfg.restart_strength,
                       "re-noising strength between scales");
    sample->add_option("--seed", so.cfg.seed, "seed for the whole run");
    sample->add_option("--oracle", so.cfg.oracle, "smoothing | gaussian | attractor");
    sample->add_option("--target", so.target, "target image for the attractor oracle");
    sample->add_option("--smooth-radius", so.smooth_radius, "smoothing oracle blur radius");
    sample->add_option("--smooth-lambda", so.smooth_lambda, "smoothing oracle blend weight");
    sample->add_option("--out", so.out, "output directory");

    TilecheckOpts to;
    CLI::App* tilecheck = app.add_subcommand("tilecheck", "measure wrap-seam energy");
    tilecheck->add_option("--input", to.dir, "material directory");
    tilecheck->add_option("--image", to.image, "single image instead of a bundle");
    tilecheck->add_option("--threshold", to.threshold, "max seam/interior ratio");
    tilecheck->add_option("--decimate", to.decimate,
                          "block-mean factor before measuring (0 = auto)");

    RenderOpts ro;
    CLI::App* rendercmd = app.add_subcommand("render", "shade a material bundle");
    RenderOpts co;
    co.clay = true;
    co.out = "clay.png";
    CLI::App* claycmd = app.add_subcommand("clay", "shade geometry only, neutral gray");
    for (auto [cmd, opts] : {std::pair{rendercmd, &ro}, std::pair{claycmd, &co}}) {
        cmd->add_option("--input", opts->dir, "material directory")->required();
        cmd->add_option("--out", opts->out, "output image");
        cmd->add_option("--light-type", opts->light_type, "directional | point");
        cmd->add_option("--light-vec", opts->light_vec,
                        "direction toward the light, or point position in tile units")
            ->expected(3);
        cmd->add_option("--view", opts->view, "view direction")->expected(3);
        cmd->add_option("--intensity", opts->intensity, "light intensity");
        cmd->add_option("--displacement", opts->displacement,
                        "displacement factor (default: manifest value)");
    }

    FitOpts fo;
    CLI::App* fitcmd =
        app.add_subcommand("fit-displacement", "fit the height-to-normal displacement factor");
    fitcmd->add_option("--input", fo.dir, "material directory");
    fitcmd->add_option("--height", fo.height_png, "height map image");
    fitcmd->add_option("--normal", fo.normal_png, "normal map image");
    fitcmd->add_option("--max-factor", fo.max_factor, "search upper bound");

    MetricsOpts mo;
    CLI::App* metricscmd = app.add_subcommand("metrics", "compare two images");
    metricscmd->add_option("--a", mo.a, "first image")->required();
    metricscmd->add_option("--b", mo.b, "second image")->required();
    metricscmd->add_flag("--normal-maps", mo.normal_maps,
                         "treat inputs as encoded normal maps");

    MaskOpts ko;
    CLI::App* maskcmd = app.add_subcommand("mask", "generate an inpainting mask");
    maskcmd->add_option("--mode", ko.mode, "border | random");
    maskcmd->add_option("--height", ko.height, "mask height");
    maskcmd->add_option("--width", ko.width, "mask width");
    maskcmd->add_option("--frac", ko.frac, "border ring fraction");
    maskcmd->add_option("--max-frac", ko.max_frac, "max area fraction for random masks");
    maskcmd->add_option("--seed", ko.seed, "seed for random masks");
    maskcmd->add_option("--out", ko.out, "output image");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // bad arguments are validation failures
    }

    try {
        if (sample->parsed()) return run_sample(so);
        if (tilecheck->parsed()) return run_tilecheck(to);
        if (rendercmd->parsed()) return run_render(ro);
        if (claycmd->parsed()) return run_render(co);
        if (fitcmd->parsed()) return run_fit(fo);
        if (metricscmd->parsed()) return run_metrics(mo);
        if (maskcmd->parsed()) return run_mask(ko);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
