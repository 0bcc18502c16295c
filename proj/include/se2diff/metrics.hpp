#pragma once

#include <cmath>
#include <limits>

#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"
#include "se2diff/lift.hpp"

namespace se2diff {

struct Metrics {
    double psnr = 0.0;             // dB, infinity for identical images
    double rms_contrast = 0.0;     // population std of intensities
    double gradient_energy = 0.0;  // sum of squared centered gradients
    double mass = 0.0;             // plain pixel sum
};

/// Peak signal-to-noise ratio in dB with peak 1. Identical images give the
/// +infinity sentinel.
inline double psnr(const Image2D& a, const Image2D& b) {
    if (!a.same_shape(b)) throw ConfigError("psnr: image shapes differ");
    long double acc = 0.0L;
    for (size_t p = 0; p < a.size(); ++p) {
        const double d = a.data()[p] - b.data()[p];
        acc += static_cast<long double>(d) * d;
    }
    const double mse = static_cast<double>(acc / a.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(1.0 / mse);
}

inline double rms_contrast(const Image2D& img) {
    long double sum = 0.0L, sum2 = 0.0L;
    for (double v : img.data()) {
        sum += v;
        sum2 += static_cast<long double>(v) * v;
    }
    const long double mean = sum / img.size();
    const long double var = sum2 / img.size() - mean * mean;
    return var > 0.0L ? std::sqrt(static_cast<double>(var)) : 0.0;
}

inline double gradient_energy(const Image2D& img) {
    const GridSpec spec = GridSpec::for_image(img, 4);
    const auto [gx, gy] = detail::image_gradient(img, spec);
    long double acc = 0.0L;
    for (size_t p = 0; p < img.size(); ++p) {
        acc += static_cast<long double>(gx.data()[p]) * gx.data()[p] +
               static_cast<long double>(gy.data()[p]) * gy.data()[p];
    }
    return static_cast<double>(acc);
}

inline double mass(const Image2D& img) {
    long double acc = 0.0L;
    for (double v : img.data()) acc += v;
    return static_cast<double>(acc);
}

/// Haar volume of a stack: the plain voxel sum, which the symmetric stencils
/// conserve under periodic boundaries.
inline double stack_mass(const OrientationStack& s) {
    long double acc = 0.0L;
    for (double v : s.data()) acc += v;
    return static_cast<double>(acc);
}

/// PSNR of a against reference b, plus per-image statistics of a.
inline Metrics compute_metrics(const Image2D& a, const Image2D& b) {
    if (!a.same_shape(b)) throw ConfigError("compute_metrics: image shapes differ");
    return Metrics{psnr(a, b), rms_contrast(a), gradient_energy(a), mass(a)};
}

}  // namespace se2diff
