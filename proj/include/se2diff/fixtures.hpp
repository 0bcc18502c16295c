#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"

namespace se2diff {

/// Synthetic test scene: the corrupted input, the corruption mask, and the
/// uncorrupted ground truth.
struct Fixture {
    Image2D image;
    Mask mask;
    Image2D ground_truth;
};

namespace detail {

inline Fixture broken_circle(int size) {
    Image2D truth(size, size);
    Mask mask(size, size);
    const double cx = 0.5 * (size - 1), cy = 0.5 * (size - 1);
    const double radius = 0.30 * size;
    const double half_width = std::max(1.2, 0.025 * size);
    const double gap_half_angle = 0.20;  // radians; two gaps, at angle 0 and pi

    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            const double dx = j - cx, dy = i - cy;
            const double r = std::hypot(dx, dy);
            if (std::abs(r - radius) > half_width) continue;
            truth.at(i, j) = 1.0;
            const double ang = std::atan2(dy, dx);  // (-pi, pi]
            const bool in_gap = std::abs(ang) < gap_half_angle ||
                                std::abs(std::abs(ang) - std::numbers::pi) < gap_half_angle;
            if (in_gap) mask.set(i, j, true);
        }
    }
    Image2D image = truth;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (mask.at(i, j)) image.at(i, j) = 0.0;
    return Fixture{std::move(image), std::move(mask), std::move(truth)};
}

inline Fixture broken_lines(int size) {
    Image2D truth(size, size);
    Mask mask(size, size);
    const int row_c = size / 2;
    const int thickness = 3;
    const int x_lo = static_cast<int>(0.15 * size);
    const int x_hi = static_cast<int>(0.85 * size);
    const double gap_half = std::max(1.5, 0.025 * size);

    for (int i = row_c - thickness / 2; i <= row_c + thickness / 2; ++i) {
        for (int j = x_lo; j <= x_hi; ++j) {
            truth.at(i, j) = 1.0;
            if (std::abs(j - 0.5 * (size - 1)) <= gap_half) mask.set(i, j, true);
        }
    }
    Image2D image = truth;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (mask.at(i, j)) image.at(i, j) = 0.0;
    return Fixture{std::move(image), std::move(mask), std::move(truth)};
}

inline Fixture stripes(int size, double density, uint32_t seed) {
    Image2D truth(size, size);
    const int periods = std::max(3, size / 21);
    const double amp = 0.3;
    for (int i = 0; i < size; ++i) {
        const double v = 0.5 + amp * std::sin(2.0 * std::numbers::pi * periods * i / size);
        for (int j = 0; j < size; ++j) truth.at(i, j) = v;
    }

    // Exact corruption count via a seeded partial shuffle.
    Mask mask(size, size);
    const size_t n = truth.size();
    const size_t corrupted = static_cast<size_t>(std::llround(density * n));
    std::vector<uint32_t> order(n);
    for (size_t p = 0; p < n; ++p) order[p] = static_cast<uint32_t>(p);
    std::mt19937 rng(seed);
    for (size_t p = 0; p < corrupted; ++p) {
        std::uniform_int_distribution<size_t> pick(p, n - 1);
        std::swap(order[p], order[pick(rng)]);
        const int i = static_cast<int>(order[p] / size);
        const int j = static_cast<int>(order[p] % size);
        mask.set(i, j, true);
    }

    Image2D image = truth;
    for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j)
            if (mask.at(i, j)) image.at(i, j) = 0.0;
    return Fixture{std::move(image), std::move(mask), std::move(truth)};
}

inline Fixture ramp_bump(int size) {
    Image2D truth(size, size);
    const double cx = 0.5 * (size - 1), cy = 0.5 * (size - 1);
    const double bump_sigma = size / 4.5;
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            const double ramp = 0.2 + 0.58 * j / (size - 1);
            const double r2 = (j - cx) * (j - cx) + (i - cy) * (i - cy);
            truth.at(i, j) = ramp + 0.15 * std::exp(-0.5 * r2 / (bump_sigma * bump_sigma));
        }
    }
    Mask mask(size, size);  // nothing corrupted
    Image2D image = truth;
    return Fixture{std::move(image), std::move(mask), std::move(truth)};
}

}  // namespace detail

/// Deterministic synthetic fixtures. density and seed only matter for the
/// stripes corruption mask.
inline Fixture make_fixture(const std::string& name, int size, double density = 0.95,
                            uint32_t seed = 7) {
    if (size < 32) throw ConfigError("make_fixture needs size >= 32");
    if (density < 0.0 || density >= 1.0)
        throw ConfigError("make_fixture density must lie in [0, 1)");
    if (name == "broken-circle") return detail::broken_circle(size);
    if (name == "broken-lines") return detail::broken_lines(size);
    if (name == "stripes") return detail::stripes(size, density, seed);
    if (name == "ramp-bump") return detail::ramp_bump(size);
    throw ConfigError("unknown fixture '" + name +
                      "' (expected broken-circle, broken-lines, stripes, or ramp-bump)");
}

}  // namespace se2diff
