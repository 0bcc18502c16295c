#pragma once

// Independent reference implementations the tests check the library against.
// Everything here is assembled from the defining formulas, not by calling the
// production stencil path.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "se2diff/diffusion.hpp"
#include "se2diff/grid.hpp"
#include "se2diff/image.hpp"

namespace oracle {

using se2diff::Boundary;
using se2diff::DiffusionOperator;
using se2diff::GridSpec;
using se2diff::Image2D;
using se2diff::OrientationStack;

inline int bc_map(int i, int n, Boundary b) {
    if (b == Boundary::Periodic) {
        i %= n;
        return i < 0 ? i + n : i;
    }
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

/// Square matrix stored row-major.
struct Matrix {
    int n = 0;
    std::vector<double> a;

    explicit Matrix(int size) : n(size), a(static_cast<size_t>(size) * size, 0.0) {}
    double& at(int r, int c) { return a[static_cast<size_t>(r) * n + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * n + c]; }

    std::vector<double> apply(const std::vector<double>& v) const {
        std::vector<double> out(n, 0.0);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) out[r] += at(r, c) * v[c];
        return out;
    }

    Matrix multiply(const Matrix& rhs) const {
        Matrix out(n);
        for (int r = 0; r < n; ++r)
            for (int k = 0; k < n; ++k) {
                const double v = at(r, k);
                if (v == 0.0) continue;
                for (int c = 0; c < n; ++c) out.at(r, c) += v * rhs.at(k, c);
            }
        return out;
    }
};

enum class Part { X1Sq, X2Sq, X3Sq };

/// Row-by-row assembly of a stencil operator from its defining coefficients:
/// second differences for dxx/dyy/dtheta-theta, the 4-point corner stencil
/// for dxy, trigonometric weights per theta slice.
inline Matrix assemble(Part part, double beta, const GridSpec& spec) {
    const int rows = spec.rows, cols = spec.cols, nth = spec.n_theta;
    const int n = rows * cols * nth;
    Matrix mat(n);
    auto idx = [&](int k, int i, int j) { return (k * rows + i) * cols + j; };

    for (int k = 0; k < nth; ++k) {
        const double theta = k * std::numbers::pi / nth;
        const double ct = std::cos(theta), st = std::sin(theta);
        double axx = 0.0, ayy = 0.0, axy = 0.0, ath = 0.0;
        switch (part) {
            case Part::X1Sq:
                axx = ct * ct;
                ayy = st * st;
                axy = 2.0 * ct * st;
                break;
            case Part::X3Sq:
                axx = st * st;
                ayy = ct * ct;
                axy = -2.0 * ct * st;
                break;
            case Part::X2Sq:
                ath = 1.0;
                break;
        }
        axx /= spec.dx * spec.dx;
        ayy /= spec.dy * spec.dy;
        axy /= spec.dx * spec.dy;
        ath = (ath + beta) / (spec.d_theta() * spec.d_theta());

        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                const int row = idx(k, i, j);
                const int im = bc_map(i - 1, rows, spec.boundary);
                const int ip = bc_map(i + 1, rows, spec.boundary);
                const int jm = bc_map(j - 1, cols, spec.boundary);
                const int jp = bc_map(j + 1, cols, spec.boundary);
                const int km = bc_map(k - 1, nth, Boundary::Periodic);
                const int kp = bc_map(k + 1, nth, Boundary::Periodic);

                // dxx
                mat.at(row, idx(k, i, jm)) += axx;
                mat.at(row, idx(k, i, jp)) += axx;
                mat.at(row, idx(k, i, j)) += -2.0 * axx;
                // dyy
                mat.at(row, idx(k, im, j)) += ayy;
                mat.at(row, idx(k, ip, j)) += ayy;
                mat.at(row, idx(k, i, j)) += -2.0 * ayy;
                // dxy via (u(ip,jp) - u(ip,jm) - u(im,jp) + u(im,jm)) / 4
                mat.at(row, idx(k, ip, jp)) += axy * 0.25;
                mat.at(row, idx(k, ip, jm)) += -axy * 0.25;
                mat.at(row, idx(k, im, jp)) += -axy * 0.25;
                mat.at(row, idx(k, im, jm)) += axy * 0.25;
                // dtheta-theta (always periodic), carries beta for the
                // combined generators
                if (ath != 0.0) {
                    mat.at(row, idx(km, i, j)) += ath;
                    mat.at(row, idx(kp, i, j)) += ath;
                    mat.at(row, idx(k, i, j)) += -2.0 * ath;
                }
            }
        }
    }
    return mat;
}

inline Matrix assemble_generator(DiffusionOperator op, double beta, const GridSpec& spec) {
    return assemble(op == DiffusionOperator::LevelCurve ? Part::X1Sq : Part::X3Sq, beta, spec);
}

/// exp(t A) by scaling-and-squaring with a Taylor series on the scaled
/// matrix.
inline Matrix expm(const Matrix& a, double t) {
    const int n = a.n;
    double norm = 0.0;
    for (int r = 0; r < n; ++r) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) s += std::abs(a.at(r, c)) * std::abs(t);
        norm = std::max(norm, s);
    }
    int squarings = 0;
    double scale = 1.0;
    while (norm * scale > 0.5) {
        scale *= 0.5;
        ++squarings;
    }

    Matrix scaled(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) scaled.at(r, c) = a.at(r, c) * t * scale;

    Matrix result(n);
    for (int r = 0; r < n; ++r) result.at(r, r) = 1.0;
    Matrix term = result;
    for (int order = 1; order <= 30; ++order) {
        term = term.multiply(scaled);
        for (size_t p = 0; p < term.a.size(); ++p) term.a[p] /= order;
        double tn = 0.0;
        for (double v : term.a) tn = std::max(tn, std::abs(v));
        for (size_t p = 0; p < term.a.size(); ++p) result.a[p] += term.a[p];
        if (tn < 1e-20) break;
    }
    for (int s = 0; s < squarings; ++s) result = result.multiply(result);
    return result;
}

inline std::vector<double> flatten(const OrientationStack& s) {
    return {s.data().begin(), s.data().end()};
}

inline OrientationStack random_stack(int rows, int cols, int nth, uint32_t seed,
                                     double lo = 0.0, double hi = 1.0) {
    OrientationStack s(rows, cols, nth);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : s.data()) v = dist(rng);
    return s;
}

inline Image2D random_image(int rows, int cols, uint32_t seed, double lo = 0.0,
                            double hi = 1.0) {
    Image2D img(rows, cols);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : img.data()) v = dist(rng);
    return img;
}

/// Number of 4-connected components among pixels where img > threshold.
inline int connected_components(const Image2D& img, double threshold) {
    const int rows = img.rows(), cols = img.cols();
    std::vector<int> label(static_cast<size_t>(rows) * cols, -1);
    auto above = [&](int i, int j) { return img.at(i, j) > threshold; };
    int components = 0;
    std::vector<std::pair<int, int>> stack;
    for (int si = 0; si < rows; ++si) {
        for (int sj = 0; sj < cols; ++sj) {
            if (!above(si, sj) || label[static_cast<size_t>(si) * cols + sj] >= 0) continue;
            ++components;
            stack.push_back({si, sj});
            label[static_cast<size_t>(si) * cols + sj] = components;
            while (!stack.empty()) {
                auto [i, j] = stack.back();
                stack.pop_back();
                const int di[4] = {-1, 1, 0, 0};
                const int dj[4] = {0, 0, -1, 1};
                for (int t = 0; t < 4; ++t) {
                    const int ni = i + di[t], nj = j + dj[t];
                    if (ni < 0 || ni >= rows || nj < 0 || nj >= cols) continue;
                    if (!above(ni, nj)) continue;
                    int& l = label[static_cast<size_t>(ni) * cols + nj];
                    if (l >= 0) continue;
                    l = components;
                    stack.push_back({ni, nj});
                }
            }
        }
    }
    return components;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (size_t p = 0; p < a.size(); ++p) m = std::max(m, std::abs(a[p] - b[p]));
    return m;
}

inline double rel_l2(std::span<const double> got, std::span<const double> want) {
    double num = 0.0, den = 0.0;
    for (size_t p = 0; p < got.size(); ++p) {
        const double d = got[p] - want[p];
        num += d * d;
        den += want[p] * want[p];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace oracle
