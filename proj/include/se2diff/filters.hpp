#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "se2diff/diffusion.hpp"
#include "se2diff/grid.hpp"
#include "se2diff/lift.hpp"

namespace se2diff {

/// WaxOn-WaxOff schedule: forward diffusion along level curves for t_on,
/// then reverse transversal diffusion for t_off, repeated. t_off < 0 selects
/// the t_on/8 rule of thumb.
struct WaxParams {
    double t_on = 0.0;
    double t_off = -1.0;
    double beta_on = 0.25;
    double beta_off = 2.0;
    int iterations = 1;
    double dt = 0.0;
    double blowup_factor = 10.0;

    double resolved_t_off() const { return t_off < 0.0 ? t_on / 8.0 : t_off; }

    void validate() const {
        if (t_on < 0.0) throw ConfigError("WaxParams.t_on must be >= 0");
        if (resolved_t_off() > t_on + 1e-12)
            throw ConfigError("WaxParams.t_off must not exceed t_on");
        if (beta_on < 0.0 || beta_off < 0.0) throw ConfigError("WaxParams betas must be >= 0");
        if (iterations < 1) throw ConfigError("WaxParams.iterations must be >= 1");
    }
};

/// Alternates level-curve diffusion with regularized reverse transversal
/// diffusion. A blowup in the reverse phase is rethrown with the iteration
/// it happened in.
inline OrientationStack wax_on_wax_off(const OrientationStack& stack, const WaxParams& params,
                                       const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);

    DiffusionParams on{DiffusionOperator::LevelCurve, params.beta_on, params.t_on, params.dt,
                       true, params.blowup_factor};
    DiffusionParams off{DiffusionOperator::Transversal, params.beta_off,
                        params.resolved_t_off(), params.dt, true, params.blowup_factor};

    OrientationStack u = stack;
    for (int it = 0; it < params.iterations; ++it) {
        u = run_forward(u, on, spec);
        try {
            u = run_reverse(u, off, spec);
        } catch (const BlowupError& e) {
            throw BlowupError(std::string(e.what()) + " (WaxOn-WaxOff iteration " +
                                  std::to_string(it) + ")",
                              e.step(), it);
        }
    }
    u.clamp01();
    return u;
}

/// Unsharp masking parameters: C is the sharpening factor, t_blur the
/// transversal diffusion time standing in for the Gaussian blur.
struct UnsharpParams {
    double C = 1.0;
    double t_blur = 1.0;
    double beta = 2.0;
    double dt = 0.0;

    void validate() const {
        if (C < 0.0) throw ConfigError("UnsharpParams.C must be >= 0");
        if (t_blur < 0.0) throw ConfigError("UnsharpParams.t_blur must be >= 0");
        if (beta < 0.0) throw ConfigError("UnsharpParams.beta must be >= 0");
    }
};

/// Unsharp masking on SE(2): I + C (I - I_T) with I_T the transversal
/// diffusion of I at time t_blur. The internal blur runs unclamped so the
/// linear identity holds; only the result is clipped.
inline OrientationStack unsharp_se2(const OrientationStack& stack, const UnsharpParams& params,
                                    const GridSpec& spec) {
    params.validate();
    spec.ensure_matches(stack);
    DiffusionParams blur{DiffusionOperator::Transversal, params.beta, params.t_blur, params.dt,
                         false, 10.0};
    const OrientationStack blurred = run_forward(stack, blur, spec);
    OrientationStack out(stack.rows(), stack.cols(), stack.n_theta());
    const double w = 1.0 + params.C;
    for (size_t p = 0; p < stack.size(); ++p)
        out.data()[p] =
            std::clamp(w * stack.data()[p] - params.C * blurred.data()[p], 0.0, 1.0);
    return out;
}

/// Classical unsharp masking on the plane: I + C (I - I * G_s), clamped.
inline Image2D unsharp_r2(const Image2D& image, double C, double s) {
    if (C < 0.0) throw ConfigError("unsharp_r2 needs C >= 0");
    if (s < 0.0) throw ConfigError("unsharp_r2 needs s >= 0");
    const Image2D blurred = preprocess_gaussian(image, s);
    Image2D out(image.rows(), image.cols());
    const double w = 1.0 + C;
    for (size_t p = 0; p < image.size(); ++p)
        out.data()[p] = std::clamp(w * image.data()[p] - C * blurred.data()[p], 0.0, 1.0);
    return out;
}

namespace detail {

// 3x3 discrete unsharp construction, unclipped: (1+C) I - I * cross, with
// cross the 5-point plus-shaped sum. Merging the terms gives the kernel
// [[0,-1,0],[-1,C,-1],[0,-1,0]].
inline Image2D unsharp_cross3_unclamped(const Image2D& image, double C) {
    const int rows = image.rows(), cols = image.cols();
    Image2D out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const int im = mirror_index(i - 1, rows);
        const int ip = mirror_index(i + 1, rows);
        for (int j = 0; j < cols; ++j) {
            const int jm = mirror_index(j - 1, cols);
            const int jp = mirror_index(j + 1, cols);
            const double cross = image.at(i, j) + image.at(im, j) + image.at(ip, j) +
                                 image.at(i, jm) + image.at(i, jp);
            out.at(i, j) = (1.0 + C) * image.at(i, j) - cross;
        }
    }
    return out;
}

}  // namespace detail

/// Kernel-sized unsharp filter: convolution with [[0,-1,0],[-1,C,-1],[0,-1,0]]
/// (C = 5 is the usual 3x3 unsharp), reflect-padded and clamped.
inline Image2D unsharp_cross3(const Image2D& image, double C) {
    if (C < 0.0) throw ConfigError("unsharp_cross3 needs C >= 0");
    Image2D out = detail::unsharp_cross3_unclamped(image, C);
    out.clamp01();
    return out;
}

}  // namespace se2diff
