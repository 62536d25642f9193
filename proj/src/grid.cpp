// SPDX-License-Identifier: MIT
#include "tilemat/grid.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

namespace tilemat {

namespace {
std::size_t g_current = 0;
std::size_t g_peak = 0;
}  // namespace

std::size_t alloc_stats::current_bytes() { return g_current; }
std::size_t alloc_stats::peak_bytes() { return g_peak; }
void alloc_stats::reset_peak() { g_peak = g_current; }
void alloc_stats::add(std::size_t n) {
    g_current += n;
    if (g_current > g_peak) g_peak = g_current;
}
void alloc_stats::sub(std::size_t n) { g_current -= n; }

Grid::Grid(int h, int w, int c) : h_(h), w_(w), c_(c) {
    if (h <= 0 || w <= 0 || c <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    data_.assign(static_cast<std::size_t>(h) * w * c, 0.0);
}

Grid Grid::full(int h, int w, int c, double value) {
    Grid g(h, w, c);
    for (auto& v : g.data_) v = value;
    return g;
}

double grid_mean(const Grid& g) {
    double s = 0.0;
    const double* p = g.data();
    for (std::size_t i = 0; i < g.size(); ++i) s += p[i];
    return s / static_cast<double>(g.size());
}

double grid_mean_channel(const Grid& g, int ch) {
    double s = 0.0;
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x) s += g.at(y, x, ch);
    return s / (static_cast<double>(g.height()) * g.width());
}

double grid_variance(const Grid& g) {
    double m = grid_mean(g);
    double s = 0.0;
    const double* p = g.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
        double d = p[i] - m;
        s += d * d;
    }
    return s / static_cast<double>(g.size());
}

double grid_rmse(const Grid& a, const Grid& b) {
    if (!a.same_shape(b)) throw std::invalid_argument("rmse: shape mismatch");
    double s = 0.0;
    const double* pa = a.data();
    const double* pb = b.data();
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = pa[i] - pb[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

bool grid_bitwise_equal(const Grid& a, const Grid& b) {
    if (!a.same_shape(b)) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

Grid slice_channels(const Grid& g, int first, int count) {
    if (first < 0 || count < 1 || first + count > g.channels())
        throw std::invalid_argument("channel slice out of range");
    Grid out(g.height(), g.width(), count);
    for (int y = 0; y < g.height(); ++y)
        for (int x = 0; x < g.width(); ++x)
            for (int k = 0; k < count; ++k) out.at(y, x, k) = g.at(y, x, first + k);
    return out;
}

Grid concat_channels(const std::vector<Grid>& parts) {
    if (parts.empty()) throw std::invalid_argument("nothing to concatenate");
    int h = parts[0].height(), w = parts[0].width();
    int c = 0;
    for (const auto& p : parts) {
        if (p.height() != h || p.width() != w)
            throw std::invalid_argument("concat: size mismatch");
        c += p.channels();
    }
    Grid out(h, w, c);
    int base = 0;
    for (const auto& p : parts) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                for (int k = 0; k < p.channels(); ++k)
                    out.at(y, x, base + k) = p.at(y, x, k);
        base += p.channels();
    }
    return out;
}

}  // namespace tilemat
