#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "se2diff/grid.hpp"
#include "se2diff/stencil.hpp"

namespace se2diff {

/// Which hypoelliptic generator drives the flow: along level curves
/// (X1^2 + beta X2^2) or transverse to them (X3^2 + beta X2^2).
enum class DiffusionOperator { LevelCurve, Transversal };

inline const char* to_string(DiffusionOperator op) {
    return op == DiffusionOperator::LevelCurve ? "level_curve" : "transversal";
}

struct DiffusionParams {
    DiffusionOperator op = DiffusionOperator::LevelCurve;
    double beta = 0.25;
    double total_time = 0.0;
    double dt = 0.0;  // <= 0 selects the stability bound automatically
    bool clamp = true;
    double blowup_factor = 10.0;

    void validate() const {
        if (beta < 0.0) throw ConfigError("DiffusionParams.beta must be >= 0");
        if (total_time < 0.0) throw ConfigError("DiffusionParams.total_time must be >= 0");
        if (!(blowup_factor > 1.0))
            throw ConfigError("DiffusionParams.blowup_factor must exceed 1");
    }
};

/// Conservative explicit-Euler bound covering the cross term:
/// 0.9 / (2 (1/dx^2 + 1/dy^2 + 1/(dx dy)) + 2 beta / d_theta^2).
inline double stable_dt(const DiffusionParams& params, const GridSpec& spec) {
    const double spatial =
        2.0 * (1.0 / (spec.dx * spec.dx) + 1.0 / (spec.dy * spec.dy) +
               1.0 / (spec.dx * spec.dy));
    const double angular = 2.0 * params.beta / (spec.d_theta() * spec.d_theta());
    return 0.9 / (spatial + angular);
}

/// Resolves auto/explicit dt, rejecting steps above the stability bound.
inline double effective_dt(const DiffusionParams& params, const GridSpec& spec) {
    const double bound = stable_dt(params, spec);
    if (params.dt <= 0.0) return bound;
    if (params.dt > bound * (1.0 + 1e-12))
        throw ConfigError("dt = " + std::to_string(params.dt) +
                          " exceeds the stability bound " + std::to_string(bound) +
                          " for beta = " + std::to_string(params.beta) + " on grid " +
                          spec.describe());
    return params.dt;
}

namespace detail {

inline SpatialPart spatial_part(DiffusionOperator op) {
    return op == DiffusionOperator::LevelCurve ? SpatialPart::X1Sq : SpatialPart::X3Sq;
}

// One explicit step u + h*L(u) into out (h < 0 reverses time).
inline void euler_step(const OrientationStack& in, OrientationStack& out,
                       const DiffusionParams& params, const GridSpec& spec, double h,
                       bool clamp) {
    const double theta_coeff = params.beta / (spec.d_theta() * spec.d_theta());
    affine_generator_apply(in, out, spatial_part(params.op), theta_coeff, spec, 1.0, h, clamp);
}

}  // namespace detail

/// Applies the selected generator once: L(u) = X1^2 u + beta X2^2 u (or the
/// transversal variant).
inline OrientationStack apply_operator(const OrientationStack& stack,
                                       const DiffusionParams& params, const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    const double theta_coeff = params.beta / (spec.d_theta() * spec.d_theta());
    detail::affine_generator_apply(stack, out, detail::spatial_part(params.op), theta_coeff,
                                   spec, 0.0, 1.0, false);
    return out;
}

/// Single forward Euler step u <- u + dt L(u), clipped to [0,1] when
/// params.clamp is set.
inline OrientationStack step_forward(const OrientationStack& stack,
                                     const DiffusionParams& params, const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);
    const double h = effective_dt(params, spec);
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    detail::euler_step(stack, out, params, spec, h, params.clamp);
    return out;
}

/// Integrates the heat flow to total_time with ceil(T/dt) steps, the last one
/// shortened to land exactly on T.
inline OrientationStack run_forward(const OrientationStack& stack,
                                    const DiffusionParams& params, const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);
    const double T = params.total_time;
    if (T == 0.0) return stack;
    const double dt = effective_dt(params, spec);
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));

    OrientationStack u = stack;
    OrientationStack buf(stack.rows(), stack.cols(), stack.n_theta());
    for (long s = 0; s < steps; ++s) {
        const double h = (s + 1 == steps) ? T - (steps - 1) * dt : dt;
        detail::euler_step(u, buf, params, spec, h, params.clamp);
        std::swap(u, buf);
    }
    return u;
}

/// Single reverse step u <- u - dt L(u), then clipped to [0,1]. The clip is
/// what keeps the ill-posed reverse flow usable for small times.
inline OrientationStack step_reverse(const OrientationStack& stack,
                                     const DiffusionParams& params, const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);
    const double h = effective_dt(params, spec);
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    detail::euler_step(stack, out, params, spec, -h, false);
    const double limit = params.blowup_factor * std::max(stack.max_abs(), 1e-30);
    if (out.max_abs() > limit)
        throw BlowupError("reverse step diverged: amplitude " + std::to_string(out.max_abs()) +
                              " exceeds " + std::to_string(params.blowup_factor) +
                              "x the input amplitude",
                          0);
    out.clamp01();
    return out;
}

/// Reverse-time integration with the same stepping scheme. Divergence is
/// detected on the unclipped update: the run aborts with a BlowupError as
/// soon as the pre-clip amplitude has grown past blowup_factor times the
/// initial amplitude, reporting the offending step.
inline OrientationStack run_reverse(const OrientationStack& stack,
                                    const DiffusionParams& params, const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);
    const double T = params.total_time;
    if (T == 0.0) return stack;
    const double dt = effective_dt(params, spec);
    const long steps = std::max<long>(1, static_cast<long>(std::ceil(T / dt - 1e-9)));
    const double limit = params.blowup_factor * std::max(stack.max_abs(), 1e-30);

    OrientationStack u = stack;
    OrientationStack buf(stack.rows(), stack.cols(), stack.n_theta());
    for (long s = 0; s < steps; ++s) {
        const double h = (s + 1 == steps) ? T - (steps - 1) * dt : dt;
        detail::euler_step(u, buf, params, spec, -h, false);
        const double amp = buf.max_abs();
        if (amp > limit)
            throw BlowupError("reverse diffusion blew up at step " + std::to_string(s) + "/" +
                                  std::to_string(steps) + ": amplitude " + std::to_string(amp) +
                                  " exceeds " + std::to_string(params.blowup_factor) +
                                  "x the initial amplitude",
                              s);
        buf.clamp01();
        std::swap(u, buf);
    }
    return u;
}

/// Row-major dense matrix, just enough for the operator oracle.
class DenseMatrix {
public:
    explicit DenseMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, 0.0) {}

    int n() const noexcept { return n_; }
    double& at(int r, int c) { return a_[static_cast<size_t>(r) * n_ + c]; }
    double at(int r, int c) const { return a_[static_cast<size_t>(r) * n_ + c]; }

    std::vector<double> apply(const std::vector<double>& v) const {
        std::vector<double> out(n_, 0.0);
        for (int r = 0; r < n_; ++r) {
            const double* row = a_.data() + static_cast<size_t>(r) * n_;
            double acc = 0.0;
            for (int c = 0; c < n_; ++c) acc += row[c] * v[c];
            out[r] = acc;
        }
        return out;
    }

private:
    int n_;
    std::vector<double> a_;
};

/// Voxel index in the flattened ordering used by the dense operator:
/// (k * rows + i) * cols + j, matching the stack layout.
inline int flat_index(const GridSpec& spec, int k, int i, int j) {
    return (k * spec.rows + i) * spec.cols + j;
}

/// Explicit matrix of the selected generator over the flattened stack,
/// assembled by pushing unit vectors through the stencil. Guarded to small
/// grids; meant for tests.
inline DenseMatrix assemble_dense_operator(const DiffusionParams& params,
                                           const GridSpec& spec) {
    params.validate();
    spec.validate();
    const long voxels = static_cast<long>(spec.rows) * spec.cols * spec.n_theta;
    if (voxels > 4096)
        throw ConfigError("assemble_dense_operator limited to 4096 voxels, got " +
                          std::to_string(voxels));

    const int n = static_cast<int>(voxels);
    DenseMatrix mat(n);
    OrientationStack e(spec.rows, spec.cols, spec.n_theta, 0.0);
    for (int col = 0; col < n; ++col) {
        e.data()[col] = 1.0;
        const OrientationStack le = apply_operator(e, params, spec);
        for (int row = 0; row < n; ++row) mat.at(row, col) = le.data()[row];
        e.data()[col] = 0.0;
    }
    return mat;
}

}  // namespace se2diff
