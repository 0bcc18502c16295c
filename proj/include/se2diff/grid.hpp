#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "se2diff/errors.hpp"
#include "se2diff/image.hpp"

namespace se2diff {

/// Scalar field on the orientation stack R x C x Ntheta sampling PT(R^2).
/// The fiber index k stands for theta_k = k*pi/n_theta; everything along the
/// fiber wraps with period pi.
class OrientationStack {
public:
    OrientationStack(int rows, int cols, int n_theta, double fill = 0.0)
        : rows_(rows), cols_(cols), n_theta_(n_theta),
          data_(check_dims(rows, cols, n_theta), fill) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    int n_theta() const noexcept { return n_theta_; }
    size_t size() const noexcept { return data_.size(); }

    double theta(int k) const noexcept { return k * std::numbers::pi / n_theta_; }
    double d_theta() const noexcept { return std::numbers::pi / n_theta_; }

    // Layout is slice-major: contiguous rows*cols block per theta index.
    double& at(int k, int r, int c) {
        return data_[(static_cast<size_t>(k) * rows_ + r) * cols_ + c];
    }
    double at(int k, int r, int c) const {
        return data_[(static_cast<size_t>(k) * rows_ + r) * cols_ + c];
    }

    std::span<double> slice(int k) {
        return {data_.data() + static_cast<size_t>(k) * rows_ * cols_,
                static_cast<size_t>(rows_) * cols_};
    }
    std::span<const double> slice(int k) const {
        return {data_.data() + static_cast<size_t>(k) * rows_ * cols_,
                static_cast<size_t>(rows_) * cols_};
    }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    bool same_shape(const OrientationStack& other) const noexcept {
        return rows_ == other.rows_ && cols_ == other.cols_ && n_theta_ == other.n_theta_;
    }

    void clamp01() noexcept {
        for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
    }

    bool is_finite() const noexcept {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    static size_t check_dims(int rows, int cols, int n_theta) {
        if (rows < 3 || cols < 3)
            throw ConfigError("OrientationStack needs rows >= 3 and cols >= 3");
        if (n_theta < 4)
            throw ConfigError("OrientationStack needs n_theta >= 4, got " +
                              std::to_string(n_theta));
        return static_cast<size_t>(rows) * cols * n_theta;
    }

    int rows_;
    int cols_;
    int n_theta_;
    std::vector<double> data_;
};

/// Spatial boundary rule. The fiber is always periodic.
enum class Boundary { Reflect, Periodic };

inline const char* to_string(Boundary b) {
    return b == Boundary::Reflect ? "reflect" : "periodic";
}

/// Grid geometry: dimensions, spacings and the spatial boundary rule.
struct GridSpec {
    int rows = 0;
    int cols = 0;
    int n_theta = 0;
    double dx = 1.0;
    double dy = 1.0;
    Boundary boundary = Boundary::Reflect;

    double d_theta() const noexcept { return std::numbers::pi / n_theta; }

    static GridSpec for_stack(const OrientationStack& s, Boundary b = Boundary::Reflect,
                              double dx = 1.0, double dy = 1.0) {
        return GridSpec{s.rows(), s.cols(), s.n_theta(), dx, dy, b};
    }

    static GridSpec for_image(const Image2D& img, int n_theta,
                              Boundary b = Boundary::Reflect) {
        return GridSpec{img.rows(), img.cols(), n_theta, 1.0, 1.0, b};
    }

    void validate() const {
        if (rows < 3 || cols < 3 || n_theta < 4)
            throw ConfigError("GridSpec dimensions too small: " + describe());
        if (!(dx > 0.0) || !(dy > 0.0))
            throw ConfigError("GridSpec spacings must be positive");
    }

    void ensure_matches(const OrientationStack& s) const {
        validate();
        if (s.rows() != rows || s.cols() != cols || s.n_theta() != n_theta)
            throw ConfigError("stack dimensions " + std::to_string(s.rows()) + "x" +
                              std::to_string(s.cols()) + "x" + std::to_string(s.n_theta()) +
                              " do not match grid spec " + describe());
    }

    void ensure_matches(const Image2D& img) const {
        validate();
        if (img.rows() != rows || img.cols() != cols)
            throw ConfigError("image dimensions " + std::to_string(img.rows()) + "x" +
                              std::to_string(img.cols()) + " do not match grid spec " +
                              describe());
    }

    std::string describe() const {
        return std::to_string(rows) + "x" + std::to_string(cols) + "x" +
               std::to_string(n_theta) + " (dx=" + std::to_string(dx) +
               ", dy=" + std::to_string(dy) + ", " + to_string(boundary) + ")";
    }
};

namespace detail {

inline int wrap_index(int i, int n) noexcept {
    i %= n;
    return i < 0 ? i + n : i;
}

// Symmetric padding with edge repetition: ghost cells copy the nearest edge
// cell, so centered differences stay defined (and nonzero on ramps) at the
// border.
inline int mirror_index(int i, int n) noexcept {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

inline int bc_index(int i, int n, Boundary b) noexcept {
    return b == Boundary::Periodic ? wrap_index(i, n) : mirror_index(i, n);
}

}  // namespace detail

}  // namespace se2diff
