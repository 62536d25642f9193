// SPDX-License-Identifier: MIT
#include "tilemat/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace tilemat {

double srgb_encode(double linear) {
    linear = std::clamp(linear, 0.0, 1.0);
    return linear <= 0.0031308 ? 12.92 * linear
                               : 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

double srgb_decode(double srgb) {
    srgb = std::clamp(srgb, 0.0, 1.0);
    return srgb <= 0.04045 ? srgb / 12.92 : std::pow((srgb + 0.055) / 1.055, 2.4);
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& what, const std::string& path) {
    throw std::runtime_error(what + ": " + path);
}

}  // namespace

void write_png16(const std::string& path, const Grid& img) {
    if (img.channels() != 1 && img.channels() != 3)
        throw std::invalid_argument("png output must be 1 or 3 channels");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) fail("cannot open for writing", path);

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail("png writer allocation failed", path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        fail("png info allocation failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        fail("png write failed", path);
    }
    png_init_io(png, fp.get());
    int color = img.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
    png_set_IHDR(png, info, img.width(), img.height(), 16, color, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    // pack big-endian 16-bit samples by hand, no byte-order transform needed
    std::vector<png_byte> row(static_cast<std::size_t>(img.width()) * img.channels() * 2);
    for (int y = 0; y < img.height(); ++y) {
        std::size_t i = 0;
        for (int x = 0; x < img.width(); ++x)
            for (int k = 0; k < img.channels(); ++k) {
                double v = std::clamp(img.at(y, x, k), 0.0, 1.0);
                auto q = static_cast<unsigned>(std::lround(v * 65535.0));
                row[i++] = static_cast<png_byte>(q >> 8);
                row[i++] = static_cast<png_byte>(q & 0xff);
            }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

Grid read_png16(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) fail("cannot open", path);

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) fail("png reader allocation failed", path);
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail("png info allocation failed", path);
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("png read failed", path);
    }
    png_init_io(png, fp.get());
    png_read_info(png, info);

    png_byte color = png_get_color_type(png, info);
    png_byte depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    png_read_update_info(png, info);

    int w = static_cast<int>(png_get_image_width(png, info));
    int h = static_cast<int>(png_get_image_height(png, info));
    int ch = png_get_channels(png, info);
    depth = png_get_bit_depth(png, info);
    if ((ch != 1 && ch != 3) || (depth != 8 && depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail("unsupported png layout", path);
    }

    std::size_t stride = png_get_rowbytes(png, info);
    std::vector<png_byte> pixels(stride * h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y) rows[y] = pixels.data() + stride * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    Grid out(h, w, ch);
    for (int y = 0; y < h; ++y) {
        const png_byte* p = pixels.data() + stride * y;
        for (int x = 0; x < w; ++x)
            for (int k = 0; k < ch; ++k)
                if (depth == 16) {
                    unsigned v = (static_cast<unsigned>(p[0]) << 8) | p[1];
                    out.at(y, x, k) = v / 65535.0;
                    p += 2;
                } else {
                    out.at(y, x, k) = *p++ / 255.0;
                }
    }
    return out;
}

namespace {

using nlohmann::json;

json config_to_json(const RunConfig& c) {
    return json{{"resolution", c.resolution},
                {"base", c.base},
                {"steps", c.steps},
                {"eta", c.eta},
                {"patch", c.patch},
                {"max_roll", c.max_roll},
                {"max_parallel", c.max_parallel},
                {"overlap", c.overlap},
                {"restart_strength", c.restart_strength},
                {"seed", c.seed},
                {"oracle", c.oracle}};
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    j.at("resolution").get_to(c.resolution);
    j.at("base").get_to(c.base);
    j.at("steps").get_to(c.steps);
    j.at("eta").get_to(c.eta);
    j.at("patch").get_to(c.patch);
    j.at("max_roll").get_to(c.max_roll);
    j.at("max_parallel").get_to(c.max_parallel);
    j.at("overlap").get_to(c.overlap);
    j.at("restart_strength").get_to(c.restart_strength);
    j.at("seed").get_to(c.seed);
    j.at("oracle").get_to(c.oracle);
    return c;
}

constexpr const char* kSchema = "tilemat.material/1";

const std::array<const char*, 6> kMapNames = {"basecolor", "normal",    "height",
                                              "roughness", "metalness", "opacity"};

}  // namespace

void save_material(const std::string& dir, const MaterialMaps& maps,
                   const MaterialManifest& manifest) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const Grid& g = maps.grid();
    int h = g.height(), w = g.width();

    Grid base(h, w, 3), normal(h, w, 3);
    Grid scalar[4] = {Grid(h, w, 1), Grid(h, w, 1), Grid(h, w, 1), Grid(h, w, 1)};
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            for (int k = 0; k < 3; ++k)
                base.at(y, x, k) = srgb_encode(g.at(y, x, material_channel::base_r + k));
            double nx = g.at(y, x, material_channel::normal_x);
            double ny = g.at(y, x, material_channel::normal_y);
            double nz = std::sqrt(std::max(0.0, 1.0 - nx * nx - ny * ny));
            normal.at(y, x, 0) = 0.5 * (nx + 1.0);
            normal.at(y, x, 1) = 0.5 * (ny + 1.0);
            normal.at(y, x, 2) = 0.5 * (nz + 1.0);
            scalar[0].at(y, x, 0) = g.at(y, x, material_channel::height);
            scalar[1].at(y, x, 0) = g.at(y, x, material_channel::roughness);
            scalar[2].at(y, x, 0) = g.at(y, x, material_channel::metalness);
            scalar[3].at(y, x, 0) = g.at(y, x, material_channel::opacity);
        }

    auto path = [&](const char* name) {
        return (fs::path(dir) / (std::string(name) + ".png")).string();
    };
    write_png16(path("basecolor"), base);
    write_png16(path("normal"), normal);
    for (int i = 0; i < 4; ++i) write_png16(path(kMapNames[i + 2]), scalar[i]);

    json maps_json;
    for (const char* name : kMapNames) maps_json[name] = std::string(name) + ".png";
    json j{{"schema", kSchema},
           {"maps", maps_json},
           {"displacement_factor", manifest.displacement_factor},
           {"config", config_to_json(manifest.config)}};
    std::ofstream out(fs::path(dir) / "material.json", std::ios::binary);
    if (!out) fail("cannot open for writing", dir + "/material.json");
    out << j.dump(2) << '\n';
}

LoadedMaterial load_material(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream in(fs::path(dir) / "material.json", std::ios::binary);
    if (!in) fail("cannot open", dir + "/material.json");
    json j = json::parse(in);
    if (j.at("schema").get<std::string>() != kSchema)
        throw std::runtime_error("unsupported material schema: " +
                                 j.at("schema").get<std::string>());

    auto load = [&](const char* name) {
        std::string file = j.at("maps").at(name).get<std::string>();
        return read_png16((fs::path(dir) / file).string());
    };
    Grid base = load("basecolor");
    Grid normal = load("normal");
    Grid height = load("height");
    Grid rough = load("roughness");
    Grid metal = load("metalness");
    Grid opacity = load("opacity");
    if (base.channels() != 3 || normal.channels() != 3)
        throw std::runtime_error("material bundle has malformed color maps");
    int h = base.height(), w = base.width();
    for (const Grid* g : {&normal, &height, &rough, &metal, &opacity})
        if (g->height() != h || g->width() != w)
            throw std::runtime_error("material bundle maps disagree on size");

    Grid out(h, w, material_channel::count);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            for (int k = 0; k < 3; ++k)
                out.at(y, x, material_channel::base_r + k) = srgb_decode(base.at(y, x, k));
            out.at(y, x, material_channel::normal_x) = 2.0 * normal.at(y, x, 0) - 1.0;
            out.at(y, x, material_channel::normal_y) = 2.0 * normal.at(y, x, 1) - 1.0;
            out.at(y, x, material_channel::height) = height.at(y, x, 0);
            out.at(y, x, material_channel::roughness) = rough.at(y, x, 0);
            out.at(y, x, material_channel::metalness) = metal.at(y, x, 0);
            out.at(y, x, material_channel::opacity) = opacity.at(y, x, 0);
        }

    LoadedMaterial lm{std::move(out), {}};
    lm.manifest.displacement_factor = j.at("displacement_factor").get<double>();
    lm.manifest.config = config_from_json(j.at("config"));
    return lm;
}

}  // namespace tilemat
