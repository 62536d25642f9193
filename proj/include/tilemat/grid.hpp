// SPDX-License-Identifier: MIT
#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tilemat {

// Tracks bytes held by Grid storage so tests can assert working-set bounds.
// Single counter, not thread-safe against concurrent grid churn outside the
// library's own batching (which joins before returning).
struct alloc_stats {
    static std::size_t current_bytes();
    static std::size_t peak_bytes();
    // resets peak to the current level
    static void reset_peak();
    // internal
    static void add(std::size_t n);
    static void sub(std::size_t n);
};

template <typename T>
struct counting_allocator {
    using value_type = T;
    counting_allocator() = default;
    template <typename U>
    counting_allocator(const counting_allocator<U>&) {}
    T* allocate(std::size_t n) {
        alloc_stats::add(n * sizeof(T));
        return static_cast<T*>(::operator new(n * sizeof(T)));
    }
    void deallocate(T* p, std::size_t n) {
        alloc_stats::sub(n * sizeof(T));
        ::operator delete(p);
    }
    bool operator==(const counting_allocator&) const { return true; }
    bool operator!=(const counting_allocator&) const { return false; }
};

// Dense row-major h*w*c tensor of doubles. Value semantics; (y, x, ch)
// indexing with optional toroidal wrap. All pipeline state (latents, pixel
// maps, masks) uses this one type.
class Grid {
  public:
    Grid() = default;
    Grid(int h, int w, int c);  // zero-filled

    static Grid full(int h, int w, int c, double value);

    int height() const { return h_; }
    int width() const { return w_; }
    int channels() const { return c_; }
    bool empty() const { return data_.empty(); }
    std::size_t size() const { return data_.size(); }

    bool same_shape(const Grid& o) const {
        return h_ == o.h_ && w_ == o.w_ && c_ == o.c_;
    }

    double& at(int y, int x, int ch) {
        return data_[(static_cast<std::size_t>(y) * w_ + x) * c_ + ch];
    }
    double at(int y, int x, int ch) const {
        return data_[(static_cast<std::size_t>(y) * w_ + x) * c_ + ch];
    }

    // toroidal accessors: any integer index is wrapped into range
    double& wrap_at(int y, int x, int ch) { return at(wrap(y, h_), wrap(x, w_), ch); }
    double wrap_at(int y, int x, int ch) const { return at(wrap(y, h_), wrap(x, w_), ch); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    static int wrap(int i, int n) {
        int r = i % n;
        return r < 0 ? r + n : r;
    }

  private:
    int h_ = 0, w_ = 0, c_ = 0;
    std::vector<double, counting_allocator<double>> data_;
};

struct GridShape {
    int h = 0, w = 0, c = 0;
};

// elementwise helpers shared across modules
double grid_mean(const Grid& g);
double grid_mean_channel(const Grid& g, int ch);
double grid_variance(const Grid& g);
double grid_rmse(const Grid& a, const Grid& b);  // shapes must match
bool grid_bitwise_equal(const Grid& a, const Grid& b);

// channel-range copy: channels [first, first + count)
Grid slice_channels(const Grid& g, int first, int count);
// stacks same-sized grids along the channel axis
Grid concat_channels(const std::vector<Grid>& parts);

}  // namespace tilemat
