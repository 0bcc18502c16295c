#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"

namespace se2diff {

/// Parameters of the Gaussian lift: sigma is the angular spread, smoothing_s
/// the std of the Gaussian preprocessing, gradient_floor the relative
/// threshold below which a gradient counts as degenerate.
struct LiftParams {
    double sigma = 1.0;
    double smoothing_s = 0.0;
    double gradient_floor = 0.01;

    void validate() const {
        if (!(sigma > 0.0)) throw ConfigError("LiftParams.sigma must be positive");
        if (smoothing_s < 0.0) throw ConfigError("LiftParams.smoothing_s must be >= 0");
        if (!(gradient_floor > 0.0 && gradient_floor < 1.0))
            throw ConfigError("LiftParams.gradient_floor must lie in (0, 1)");
    }
};

namespace detail {

// Centered-difference gradient with the spec's boundary rule. Returns
// (d/dx, d/dy) fields, x along columns.
inline std::pair<Image2D, Image2D> image_gradient(const Image2D& img, const GridSpec& spec) {
    const int rows = img.rows(), cols = img.cols();
    Image2D gx(rows, cols), gy(rows, cols);
    const double half_inv_dx = 0.5 / spec.dx;
    const double half_inv_dy = 0.5 / spec.dy;
    for (int i = 0; i < rows; ++i) {
        const int im = bc_index(i - 1, rows, spec.boundary);
        const int ip = bc_index(i + 1, rows, spec.boundary);
        for (int j = 0; j < cols; ++j) {
            const int jm = bc_index(j - 1, cols, spec.boundary);
            const int jp = bc_index(j + 1, cols, spec.boundary);
            gx.at(i, j) = half_inv_dx * (img.at(i, jp) - img.at(i, jm));
            gy.at(i, j) = half_inv_dy * (img.at(ip, j) - img.at(im, j));
        }
    }
    return {std::move(gx), std::move(gy)};
}

inline std::vector<double> gaussian_kernel(double s) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * s)));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        w[i + radius] = std::exp(-0.5 * (i * i) / (s * s));
        sum += w[i + radius];
    }
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace detail

/// Convolution with an isotropic Gaussian of std s, reflect-padded; the
/// preprocessing that makes the image generically Morse. s = 0 is the
/// identity.
inline Image2D preprocess_gaussian(const Image2D& image, double s) {
    if (s < 0.0) throw ConfigError("preprocess_gaussian needs s >= 0");
    if (s == 0.0) return image;

    const std::vector<double> w = detail::gaussian_kernel(s);
    const int radius = static_cast<int>(w.size() / 2);
    const int rows = image.rows(), cols = image.cols();

    Image2D tmp(rows, cols), out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += w[t + radius] * image.at(i, detail::mirror_index(j + t, cols));
            tmp.at(i, j) = acc;
        }
    }
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            double acc = 0.0;
            for (int t = -radius; t <= radius; ++t)
                acc += w[t + radius] * tmp.at(detail::mirror_index(i + t, rows), j);
            out.at(i, j) = std::clamp(acc, 0.0, 1.0);
        }
    }
    return out;
}

/// Gaussian lift: spreads each pixel's intensity over the fiber with an
/// angular Gaussian centered on the level-line direction,
///
///   L(x,y,theta) = I(x,y) * exp(-<grad I/|grad I|, (cos theta, sin theta)>^2 / (2 sigma^2)).
///
/// Pixels whose gradient falls below gradient_floor * max|grad I| get a
/// uniform fiber equal to I, so flat regions survive projection.
inline OrientationStack lift_gaussian(const Image2D& image, const LiftParams& params,
                                      const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(image);

    const auto [gx, gy] = detail::image_gradient(image, spec);
    double gmax = 0.0;
    for (size_t p = 0; p < gx.size(); ++p)
        gmax = std::max(gmax, std::hypot(gx.data()[p], gy.data()[p]));
    const double floor = params.gradient_floor * gmax;

    const int nth = spec.n_theta;
    std::vector<double> ct(nth), st(nth);
    OrientationStack out(spec.rows, spec.cols, nth);
    for (int k = 0; k < nth; ++k) {
        ct[k] = std::cos(out.theta(k));
        st[k] = std::sin(out.theta(k));
    }

    const double inv_two_sigma2 = 1.0 / (2.0 * params.sigma * params.sigma);
    for (int i = 0; i < spec.rows; ++i) {
        for (int j = 0; j < spec.cols; ++j) {
            const double v = image.at(i, j);
            const double g = std::hypot(gx.at(i, j), gy.at(i, j));
            if (g <= floor || g == 0.0) {
                for (int k = 0; k < nth; ++k) out.at(k, i, j) = v;
                continue;
            }
            const double nx = gx.at(i, j) / g;
            const double ny = gy.at(i, j) / g;
            for (int k = 0; k < nth; ++k) {
                const double d = nx * ct[k] + ny * st[k];
                out.at(k, i, j) = v * std::exp(-d * d * inv_two_sigma2);
            }
        }
    }
    return out;
}

/// One-hot lift: all intensity concentrated at the fiber index maximizing
/// |X3 I|, i.e. the level-line direction. Ties break toward the lowest index;
/// critical points (vanishing gradient) get the zero fiber.
inline OrientationStack lift_dirac(const Image2D& image, const GridSpec& spec) {
    spec.ensure_matches(image);
    const auto [gx, gy] = detail::image_gradient(image, spec);

    const int nth = spec.n_theta;
    std::vector<double> ct(nth), st(nth);
    OrientationStack out(spec.rows, spec.cols, nth, 0.0);
    for (int k = 0; k < nth; ++k) {
        ct[k] = std::cos(out.theta(k));
        st[k] = std::sin(out.theta(k));
    }

    for (int i = 0; i < spec.rows; ++i) {
        for (int j = 0; j < spec.cols; ++j) {
            const double dgx = gx.at(i, j), dgy = gy.at(i, j);
            if (dgx == 0.0 && dgy == 0.0) continue;
            int best = 0;
            double best_val = -1.0;
            for (int k = 0; k < nth; ++k) {
                const double x3 = std::abs(-st[k] * dgx + ct[k] * dgy);
                if (x3 > best_val) {
                    best_val = x3;
                    best = k;
                }
            }
            out.at(best, i, j) = image.at(i, j);
        }
    }
    return out;
}

/// Fiber maximum, clamped to [0, 1].
inline Image2D project_max(const OrientationStack& stack) {
    Image2D out(stack.rows(), stack.cols());
    for (int i = 0; i < stack.rows(); ++i) {
        for (int j = 0; j < stack.cols(); ++j) {
            double m = stack.at(0, i, j);
            for (int k = 1; k < stack.n_theta(); ++k) m = std::max(m, stack.at(k, i, j));
            out.at(i, j) = std::clamp(m, 0.0, 1.0);
        }
    }
    return out;
}

/// Log-mean projection inverting the Gaussian lift:
///
///   P(x,y) = exp(1/(4 sigma^2) + mean_k ln L(x,y,theta_k)).
///
/// The fiber mean of the squared angular alignment is exactly 1/2 on any
/// uniform theta grid, so this recovers I wherever the lift was
/// non-degenerate. Values below 1e-12 are floored before the log; exact
/// nonpositive values are a domain error.
inline Image2D project_log_mean(const OrientationStack& stack, double sigma) {
    if (!(sigma > 0.0)) throw ConfigError("project_log_mean needs sigma > 0");
    const double correction = 1.0 / (4.0 * sigma * sigma);
    const int nth = stack.n_theta();
    Image2D out(stack.rows(), stack.cols());
    for (int i = 0; i < stack.rows(); ++i) {
        for (int j = 0; j < stack.cols(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < nth; ++k) {
                const double v = stack.at(k, i, j);
                if (v <= 0.0)
                    throw DomainError("project_log_mean: nonpositive fiber value at pixel (" +
                                      std::to_string(i) + ", " + std::to_string(j) +
                                      "), theta index " + std::to_string(k));
                acc += std::log(std::max(v, 1e-12));
            }
            out.at(i, j) = std::clamp(std::exp(correction + acc / nth), 0.0, 1.0);
        }
    }
    return out;
}

}  // namespace se2diff
