#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "se2diff/grid.hpp"
#include "se2diff/parallel.hpp"

// Discrete left-invariant vector fields on SE(2), sampled on the orientation
// stack, in the coordinates (x, y, theta) with x along columns and y along
// rows:
//
//   X1 = cos(theta) dx + sin(theta) dy
//   X2 = dtheta
//   X3 = -sin(theta) dx + cos(theta) dy
//
// The squares expand per fixed-theta slice (X1 and X3 carry no dtheta):
//
//   X1^2 = cos^2 dxx + 2 sin cos dxy + sin^2 dyy
//   X3^2 = sin^2 dxx - 2 sin cos dxy + cos^2 dyy
//
// discretized with centered second differences and the 4-point corner stencil
// for the cross term. X2^2 is a centered second difference along the fiber
// with period-pi wraparound.

namespace se2diff {

namespace detail {

enum class SpatialPart { None, X1Sq, X3Sq };

// Fused kernel: out = alpha*u + gamma*(spatial(u) + theta_coeff * Dtheta^2 u),
// where spatial is the per-slice expansion of X1^2 or X3^2 and theta_coeff
// already contains the 1/d_theta^2 scaling. Pure map from in to out.
inline void affine_generator_apply(const OrientationStack& in, OrientationStack& out,
                                   SpatialPart part, double theta_coeff,
                                   const GridSpec& spec, double alpha, double gamma,
                                   bool clamp) {
    const int rows = spec.rows;
    const int cols = spec.cols;
    const int nth = spec.n_theta;
    const double inv_dx2 = 1.0 / (spec.dx * spec.dx);
    const double inv_dy2 = 1.0 / (spec.dy * spec.dy);
    const double inv_dxy = 1.0 / (spec.dx * spec.dy);
    const Boundary bc = spec.boundary;

    const int jm0 = bc_index(-1, cols, bc);
    const int jpN = bc_index(cols, cols, bc);

    parallel_for(
        0, nth,
        [&](int k_lo, int k_hi) {
            for (int k = k_lo; k < k_hi; ++k) {
                double a = 0.0, c = 0.0, m = 0.0;
                if (part != SpatialPart::None) {
                    const double ct = std::cos(in.theta(k));
                    const double st = std::sin(in.theta(k));
                    if (part == SpatialPart::X1Sq) {
                        a = ct * ct * inv_dx2;
                        c = st * st * inv_dy2;
                        m = 0.5 * ct * st * inv_dxy;
                    } else {
                        a = st * st * inv_dx2;
                        c = ct * ct * inv_dy2;
                        m = -0.5 * ct * st * inv_dxy;
                    }
                }
                const double* s0 = in.slice(k).data();
                const double* tm = in.slice(wrap_index(k - 1, nth)).data();
                const double* tp = in.slice(wrap_index(k + 1, nth)).data();
                double* o = out.slice(k).data();

                for (int i = 0; i < rows; ++i) {
                    const double* r0 = s0 + static_cast<size_t>(i) * cols;
                    const double* rm = s0 + static_cast<size_t>(bc_index(i - 1, rows, bc)) * cols;
                    const double* rp = s0 + static_cast<size_t>(bc_index(i + 1, rows, bc)) * cols;
                    const double* f0 = tm + static_cast<size_t>(i) * cols;
                    const double* f1 = tp + static_cast<size_t>(i) * cols;
                    double* orow = o + static_cast<size_t>(i) * cols;

                    auto eval = [&](int j, int jm, int jp) {
                        const double u = r0[j];
                        double lap = theta_coeff * (f0[j] + f1[j] - 2.0 * u);
                        if (part != SpatialPart::None) {
                            lap += a * (r0[jm] + r0[jp] - 2.0 * u) +
                                   c * (rm[j] + rp[j] - 2.0 * u) +
                                   m * (rp[jp] - rp[jm] - rm[jp] + rm[jm]);
                        }
                        double v = alpha * u + gamma * lap;
                        if (clamp) v = std::clamp(v, 0.0, 1.0);
                        orow[j] = v;
                    };

                    eval(0, jm0, 1);
                    for (int j = 1; j + 1 < cols; ++j) eval(j, j - 1, j + 1);
                    eval(cols - 1, cols - 2, jpN);
                }
            }
        },
        static_cast<size_t>(rows) * cols * (part == SpatialPart::None ? 4 : 12));
}

enum class FirstOrderField { X1, X2, X3 };

// First-order fields sampled over a fiber of the given period. X1 and X3
// flip sign under theta -> theta + pi, so compositions like X2(X1 f) are only
// consistent on the full circle (period 2 pi); the pi-periodic quotient only
// carries their squares.
inline void first_order_apply(const OrientationStack& in, OrientationStack& out,
                              FirstOrderField field, const GridSpec& spec,
                              double theta_period) {
    const int rows = spec.rows;
    const int cols = spec.cols;
    const int nth = spec.n_theta;
    const Boundary bc = spec.boundary;
    const double half_inv_dx = 0.5 / spec.dx;
    const double half_inv_dy = 0.5 / spec.dy;
    const double half_inv_dth = 0.5 * nth / theta_period;

    for (int k = 0; k < nth; ++k) {
        const double ct = std::cos(k * theta_period / nth);
        const double st = std::sin(k * theta_period / nth);
        // coefficient on Dx and Dy for the spatial fields
        const double cx = field == FirstOrderField::X1 ? ct : -st;
        const double cy = field == FirstOrderField::X1 ? st : ct;
        const double* s0 = in.slice(k).data();
        const double* tm = in.slice(wrap_index(k - 1, nth)).data();
        const double* tp = in.slice(wrap_index(k + 1, nth)).data();
        double* o = out.slice(k).data();
        for (int i = 0; i < rows; ++i) {
            const double* r0 = s0 + static_cast<size_t>(i) * cols;
            const double* rm = s0 + static_cast<size_t>(bc_index(i - 1, rows, bc)) * cols;
            const double* rp = s0 + static_cast<size_t>(bc_index(i + 1, rows, bc)) * cols;
            double* orow = o + static_cast<size_t>(i) * cols;
            for (int j = 0; j < cols; ++j) {
                if (field == FirstOrderField::X2) {
                    orow[j] = half_inv_dth *
                              (tp[static_cast<size_t>(i) * cols + j] -
                               tm[static_cast<size_t>(i) * cols + j]);
                } else {
                    const int jm = bc_index(j - 1, cols, bc);
                    const int jp = bc_index(j + 1, cols, bc);
                    orow[j] = cx * half_inv_dx * (r0[jp] - r0[jm]) +
                              cy * half_inv_dy * (rp[j] - rm[j]);
                }
            }
        }
    }
}

}  // namespace detail

/// Second directional derivative along X1, per fixed-theta slice.
inline OrientationStack apply_X1_squared(const OrientationStack& stack, const GridSpec& spec) {
    spec.ensure_matches(stack);
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    detail::affine_generator_apply(stack, out, detail::SpatialPart::X1Sq, 0.0, spec, 0.0, 1.0,
                                   false);
    return out;
}

/// Second directional derivative along X3 (transversal to level lines).
inline OrientationStack apply_X3_squared(const OrientationStack& stack, const GridSpec& spec) {
    spec.ensure_matches(stack);
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    detail::affine_generator_apply(stack, out, detail::SpatialPart::X3Sq, 0.0, spec, 0.0, 1.0,
                                   false);
    return out;
}

/// Centered second difference along the fiber, period pi.
inline OrientationStack apply_X2_squared(const OrientationStack& stack, const GridSpec& spec) {
    spec.ensure_matches(stack);
    if (spec.n_theta < 3)
        throw ConfigError("apply_X2_squared needs n_theta >= 3");
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    const double coeff = 1.0 / (spec.d_theta() * spec.d_theta());
    detail::affine_generator_apply(stack, out, detail::SpatialPart::None, coeff, spec, 0.0, 1.0,
                                   false);
    return out;
}

/// Smooth test fields for the bracket sanity check. The spatial coordinate is
/// taken as the grid fraction, so the trigonometric field stays the same
/// function of the domain while the spacing refines.
enum class CommutatorField { TrigTrig, LinearTrig, Constant };

/// Test field sampled over the full circle theta in [0, 2 pi), where the
/// first-order fields are globally defined.
inline OrientationStack make_commutator_field(const GridSpec& spec, CommutatorField kind) {
    spec.validate();
    OrientationStack f(spec.rows, spec.cols, spec.n_theta);
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int k = 0; k < spec.n_theta; ++k) {
        const double ang = 2.0 * (k * two_pi / spec.n_theta);
        for (int i = 0; i < spec.rows; ++i) {
            for (int j = 0; j < spec.cols; ++j) {
                double v = 0.7;
                if (kind == CommutatorField::TrigTrig)
                    v = std::sin(two_pi * j / spec.cols) * std::cos(ang);
                else if (kind == CommutatorField::LinearTrig)
                    v = (j * spec.dx) * std::cos(ang);
                f.at(k, i, j) = v;
            }
        }
    }
    return f;
}

struct CommutatorReport {
    double max_residual = 0.0;           // over every voxel
    double max_residual_interior = 0.0;  // spatial interior only
};

/// Evaluates the discrete residual X1(X2 f) - X2(X1 f) + X3 f, which vanishes
/// for the continuum fields since [X1, X2] = -X3. Second-order schemes must
/// shrink the residual by ~4x per 2x refinement. Runs on the full circle.
inline CommutatorReport commutator_check(const GridSpec& spec,
                                         CommutatorField kind = CommutatorField::TrigTrig) {
    constexpr double period = 2.0 * std::numbers::pi;
    const OrientationStack f = make_commutator_field(spec, kind);
    OrientationStack x2f(spec.rows, spec.cols, spec.n_theta);
    OrientationStack x1f(spec.rows, spec.cols, spec.n_theta);
    OrientationStack x1x2(spec.rows, spec.cols, spec.n_theta);
    OrientationStack x2x1(spec.rows, spec.cols, spec.n_theta);
    OrientationStack x3f(spec.rows, spec.cols, spec.n_theta);
    detail::first_order_apply(f, x2f, detail::FirstOrderField::X2, spec, period);
    detail::first_order_apply(f, x1f, detail::FirstOrderField::X1, spec, period);
    detail::first_order_apply(x2f, x1x2, detail::FirstOrderField::X1, spec, period);
    detail::first_order_apply(x1f, x2x1, detail::FirstOrderField::X2, spec, period);
    detail::first_order_apply(f, x3f, detail::FirstOrderField::X3, spec, period);

    CommutatorReport report;
    for (int k = 0; k < spec.n_theta; ++k) {
        for (int i = 0; i < spec.rows; ++i) {
            for (int j = 0; j < spec.cols; ++j) {
                const double r =
                    std::abs(x1x2.at(k, i, j) - x2x1.at(k, i, j) + x3f.at(k, i, j));
                report.max_residual = std::max(report.max_residual, r);
                // X1(X2 f) stacks two first-order stencils, so the interior
                // w.r.t. the boundary rule is two cells deep.
                if (i >= 2 && i + 2 < spec.rows && j >= 2 && j + 2 < spec.cols)
                    report.max_residual_interior = std::max(report.max_residual_interior, r);
            }
        }
    }
    return report;
}

}  // namespace se2diff
