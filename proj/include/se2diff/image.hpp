#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "se2diff/errors.hpp"

namespace se2diff {

/// Grayscale scalar field on a pixel grid. Values live in [0, 1] with the
/// photographic-negative convention: 0 is white, 1 is black.
class Image2D {
public:
    Image2D(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(static_cast<size_t>(check_dims(rows, cols)), fill) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    size_t size() const noexcept { return data_.size(); }

    double& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    double at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool same_shape(const Image2D& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    void clamp01() noexcept {
        for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
    }

    bool is_finite() const noexcept {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    static size_t check_dims(int rows, int cols) {
        if (rows < 3 || cols < 3)
            throw ConfigError("Image2D needs rows >= 3 and cols >= 3, got " +
                              std::to_string(rows) + "x" + std::to_string(cols));
        return static_cast<size_t>(rows) * static_cast<size_t>(cols);
    }

    int rows_;
    int cols_;
    std::vector<double> data_;
};

/// Boolean field marking corrupted pixels (true = corrupted).
class Mask {
public:
    Mask(int rows, int cols, bool fill = false)
        : rows_(rows), cols_(cols),
          data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), fill ? 1 : 0) {
        if (rows < 1 || cols < 1)
            throw ConfigError("Mask needs positive dimensions");
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    size_t size() const noexcept { return data_.size(); }

    bool at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c] != 0; }
    void set(int r, int c, bool v) { data_[static_cast<size_t>(r) * cols_ + c] = v ? 1 : 0; }

    bool matches(const Image2D& img) const noexcept {
        return rows_ == img.rows() && cols_ == img.cols();
    }

    size_t count() const noexcept {
        size_t n = 0;
        for (uint8_t v : data_) n += v;
        return n;
    }

    bool any() const noexcept { return count() > 0; }

    std::span<const uint8_t> raw() const noexcept { return data_; }

private:
    int rows_;
    int cols_;
    std::vector<uint8_t> data_;
};

}  // namespace se2diff
