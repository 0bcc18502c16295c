#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "se2diff/diffusion.hpp"
#include "se2diff/filters.hpp"
#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"
#include "se2diff/lift.hpp"

namespace se2diff {

/// Mask-aware restoration parameters. t1/t2 drive the strong phase, t3/t4
/// the weak one, sharpen_factor the final per-iteration sharpening,
/// max_iterations the outer loop cap. The WaxOff half of each phase is the
/// SE(2) unsharp with gain waxoff_gain and angular weight waxoff_beta.
struct AheParams {
    double t1 = 5.0;
    double t2 = 0.625;
    double t3 = 1.0;
    double t4 = 0.125;
    double sharpen_factor = 0.5;
    int max_iterations = 8;
    double strong_beta = 0.25;
    double weak_beta = 0.25;
    double advanced_avg_alpha = 0.0;
    double waxoff_gain = 1.0;
    double waxoff_beta = 2.0;
    double sharpen_s = 1.0;

    void validate() const {
        if (t1 < 0.0 || t2 < 0.0 || t3 < 0.0 || t4 < 0.0)
            throw ConfigError("AheParams times must be >= 0");
        if (max_iterations < 1) throw ConfigError("AheParams.max_iterations must be >= 1");
        if (strong_beta < 0.0 || weak_beta < 0.0 || waxoff_beta < 0.0)
            throw ConfigError("AheParams betas must be >= 0");
        if (sharpen_factor < 0.0) throw ConfigError("AheParams.sharpen_factor must be >= 0");
        if (advanced_avg_alpha < 0.0 || advanced_avg_alpha > 1.0)
            throw ConfigError("AheParams.advanced_avg_alpha must lie in [0, 1]");
    }
};

/// Fills the corrupted region one boundary layer at a time: every masked
/// pixel with an unmasked 4-neighbor takes the mean of its currently
/// unmasked 8-neighborhood, each wave computed from the pre-wave state.
inline Image2D fill_mask(const Image2D& image, const Mask& mask) {
    if (!mask.matches(image)) throw ConfigError("fill_mask: mask does not match image");
    const int rows = image.rows(), cols = image.cols();
    if (mask.count() == image.size())
        throw DomainError("fill_mask: image is fully masked, nothing to average from");

    Image2D work = image;
    Mask m = mask;
    std::vector<std::pair<int, int>> frontier;
    std::vector<double> values;
    while (m.any()) {
        frontier.clear();
        values.clear();
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                if (!m.at(i, j)) continue;
                const bool open = (i > 0 && !m.at(i - 1, j)) || (i + 1 < rows && !m.at(i + 1, j)) ||
                                  (j > 0 && !m.at(i, j - 1)) || (j + 1 < cols && !m.at(i, j + 1));
                if (!open) continue;
                double acc = 0.0;
                int cnt = 0;
                for (int di = -1; di <= 1; ++di) {
                    for (int dj = -1; dj <= 1; ++dj) {
                        if (di == 0 && dj == 0) continue;
                        const int ni = i + di, nj = j + dj;
                        if (ni < 0 || ni >= rows || nj < 0 || nj >= cols) continue;
                        if (m.at(ni, nj)) continue;
                        acc += work.at(ni, nj);
                        ++cnt;
                    }
                }
                frontier.emplace_back(i, j);
                values.push_back(acc / cnt);
            }
        }
        for (size_t t = 0; t < frontier.size(); ++t) {
            work.at(frontier[t].first, frontier[t].second) = values[t];
            m.set(frontier[t].first, frontier[t].second, false);
        }
    }
    work.clamp01();
    return work;
}

/// Keeps trusted pixels: outside the mask the original value, inside the
/// diffused one, optionally blended toward a baseline (the mask-fill result)
/// with weight alpha.
inline Image2D advanced_average(const Image2D& current, const Image2D& original,
                                const Mask& mask, double alpha = 0.0,
                                const Image2D* baseline = nullptr) {
    if (!current.same_shape(original))
        throw ConfigError("advanced_average: image shapes differ");
    if (!mask.matches(current)) throw ConfigError("advanced_average: mask shape differs");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("advanced_average: alpha outside [0, 1]");
    if (baseline && !baseline->same_shape(current))
        throw ConfigError("advanced_average: baseline shape differs");

    Image2D out(current.rows(), current.cols());
    for (int i = 0; i < current.rows(); ++i) {
        for (int j = 0; j < current.cols(); ++j) {
            if (!mask.at(i, j)) {
                out.at(i, j) = original.at(i, j);
            } else {
                const double base = baseline ? baseline->at(i, j) : current.at(i, j);
                out.at(i, j) = (1.0 - alpha) * current.at(i, j) + alpha * base;
            }
        }
    }
    out.clamp01();
    return out;
}

/// Unmarks every masked pixel touching an unmasked 4-neighbor; the image
/// border counts as unmasked, so any finite mask erodes to nothing.
inline Mask erode_mask_4conn(const Mask& mask) {
    const int rows = mask.rows(), cols = mask.cols();
    Mask out(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            const bool keep = mask.at(i, j) && i > 0 && mask.at(i - 1, j) && i + 1 < rows &&
                              mask.at(i + 1, j) && j > 0 && mask.at(i, j - 1) && j + 1 < cols &&
                              mask.at(i, j + 1);
            out.set(i, j, keep);
        }
    }
    return out;
}

namespace detail {

inline OrientationStack lift_for_pipeline(const Image2D& img, const LiftParams& lift,
                                          const GridSpec& spec) {
    // Smoothing belongs to the lift recipe; the pipeline keeps its working
    // image unsmoothed so trusted pixels stay exact.
    return lift_gaussian(preprocess_gaussian(img, lift.smoothing_s), lift, spec);
}

}  // namespace detail

/// The four-phase restoration pipeline: fill, strong diffusion, advanced
/// averaging, weak diffusion.
inline Image2D ahe(const Image2D& image, const Mask& mask, const AheParams& params,
                   const LiftParams& lift, const GridSpec& spec) {
    params.validate();
    lift.validate();
    spec.ensure_matches(image);
    if (!mask.matches(image)) throw ConfigError("ahe: mask does not match image");

    const Image2D filled = fill_mask(image, mask);

    DiffusionParams strong{DiffusionOperator::LevelCurve, params.strong_beta, params.t1};
    OrientationStack s = detail::lift_for_pipeline(filled, lift, spec);
    s = run_forward(s, strong, spec);
    const Image2D diffused = project_max(s);

    const Image2D averaged =
        advanced_average(diffused, filled, mask, params.advanced_avg_alpha, &filled);

    DiffusionParams weak{DiffusionOperator::LevelCurve, params.weak_beta, params.t2};
    OrientationStack s2 = detail::lift_for_pipeline(averaged, lift, spec);
    s2 = run_forward(s2, weak, spec);
    return project_max(s2);
}

/// The WaxOn-WaxOff variant: per outer iteration a strong forward pass
/// sharpened by the SE(2) unsharp, advanced averaging on the current mask, a
/// weak pass likewise sharpened, planar sharpening, then 4-connected mask
/// erosion. Stops when the mask is exhausted or after max_iterations.
inline Image2D modified_ahe(const Image2D& image, const Mask& mask, const AheParams& params,
                            const LiftParams& lift, const GridSpec& spec) {
    params.validate();
    lift.validate();
    spec.ensure_matches(image);
    if (!mask.matches(image)) throw ConfigError("modified_ahe: mask does not match image");

    const Image2D filled = fill_mask(image, mask);
    Image2D work = filled;
    Mask current = mask;

    DiffusionParams strong{DiffusionOperator::LevelCurve, params.strong_beta, params.t1};
    DiffusionParams weak{DiffusionOperator::LevelCurve, params.weak_beta, params.t3};
    UnsharpParams off_strong{params.waxoff_gain, params.t2, params.waxoff_beta};
    UnsharpParams off_weak{params.waxoff_gain, params.t4, params.waxoff_beta};

    for (int it = 0; it < params.max_iterations; ++it) {
        OrientationStack s = detail::lift_for_pipeline(work, lift, spec);
        s = run_forward(s, strong, spec);
        s = unsharp_se2(s, off_strong, spec);
        work = advanced_average(project_max(s), work, current, params.advanced_avg_alpha,
                                &filled);

        OrientationStack s2 = detail::lift_for_pipeline(work, lift, spec);
        s2 = run_forward(s2, weak, spec);
        s2 = unsharp_se2(s2, off_weak, spec);
        work = project_max(s2);

        work = unsharp_r2(work, params.sharpen_factor, params.sharpen_s);

        current = erode_mask_4conn(current);
        if (!current.any()) break;
    }
    return work;
}

}  // namespace se2diff
