#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "se2diff/fixtures.hpp"
#include "se2diff/lift.hpp"

using namespace se2diff;

namespace {

Image2D ramp_x(int rows, int cols) {
    Image2D img(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) img.at(i, j) = static_cast<double>(j) / cols;
    return img;
}

// normalized Gaussian taps, same truncation rule the library pins (4 s)
std::vector<double> reference_kernel(double s) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * s)));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) sum += w[i + radius] = std::exp(-0.5 * i * i / (s * s));
    for (double& v : w) v /= sum;
    return w;
}

}  // namespace

TEST_CASE("preprocess_gaussian with s = 0 is the identity") {
    const Image2D img = oracle::random_image(9, 11, 5);
    const Image2D out = preprocess_gaussian(img, 0.0);
    for (size_t p = 0; p < img.size(); ++p) REQUIRE(out.data()[p] == img.data()[p]);
}

TEST_CASE("preprocess_gaussian preserves constants") {
    const Image2D img(8, 8, 0.42);
    const Image2D out = preprocess_gaussian(img, 1.7);
    for (double v : out.data()) REQUIRE(std::abs(v - 0.42) < 1e-14);
}

TEST_CASE("preprocess_gaussian matches brute-force separable convolution") {
    const double s = 1.0;
    const auto w = reference_kernel(s);
    const int radius = static_cast<int>(w.size() / 2);

    // unit impulse: center value is the kernel self-product
    Image2D impulse(11, 11, 0.0);
    impulse.at(5, 5) = 1.0;
    const Image2D blurred = preprocess_gaussian(impulse, s);
    REQUIRE(std::abs(blurred.at(5, 5) - w[radius] * w[radius]) < 1e-14);

    // and a full 2D direct convolution on random data
    const Image2D img = oracle::random_image(10, 12, 77);
    const Image2D got = preprocess_gaussian(img, s);
    for (int i = 0; i < img.rows(); ++i) {
        for (int j = 0; j < img.cols(); ++j) {
            double acc = 0.0;
            for (int a = -radius; a <= radius; ++a)
                for (int b = -radius; b <= radius; ++b)
                    acc += w[a + radius] * w[b + radius] *
                           img.at(oracle::bc_map(i + a, img.rows(), Boundary::Reflect),
                                  oracle::bc_map(j + b, img.cols(), Boundary::Reflect));
            REQUIRE(std::abs(got.at(i, j) - acc) < 1e-13);
        }
    }
}

TEST_CASE("lift_gaussian on a ramp matches the analytic angular profile") {
    const Image2D img = ramp_x(8, 16);
    const LiftParams params{1.0, 0.0, 0.01};
    const GridSpec spec = GridSpec::for_image(img, 16);
    const OrientationStack lifted = lift_gaussian(img, params, spec);

    for (int i = 0; i < img.rows(); ++i) {
        for (int j = 0; j < img.cols(); ++j) {
            int argmax = 0;
            for (int k = 0; k < 16; ++k) {
                const double ct = std::cos(lifted.theta(k));
                const double want = img.at(i, j) * std::exp(-ct * ct / 2.0);
                REQUIRE(std::abs(lifted.at(k, i, j) - want) < 1e-12);
                if (lifted.at(k, i, j) > lifted.at(argmax, i, j)) argmax = k;
            }
            // fiber peaks at theta = pi/2, the level-line direction
            if (img.at(i, j) > 0.0) REQUIRE(argmax == 8);
        }
    }
}

TEST_CASE("lift_gaussian degenerates to the identity profile as sigma grows") {
    const Image2D img = ramp_x(8, 12);
    const LiftParams params{1e6, 0.0, 0.01};
    const GridSpec spec = GridSpec::for_image(img, 8);
    const OrientationStack lifted = lift_gaussian(img, params, spec);
    for (int k = 0; k < 8; ++k)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 12; ++j)
                REQUIRE(std::abs(lifted.at(k, i, j) - img.at(i, j)) < 1e-6);
}

TEST_CASE("lift_gaussian fills flat images with uniform fibers") {
    const Image2D img(6, 6, 0.33);
    const LiftParams params{0.8, 0.0, 0.01};
    const GridSpec spec = GridSpec::for_image(img, 8);
    const OrientationStack lifted = lift_gaussian(img, params, spec);
    for (double v : lifted.data()) REQUIRE(v == 0.33);
}

TEST_CASE("lift_dirac puts the ramp's mass at the level-line index") {
    const Image2D img = ramp_x(8, 16);
    const GridSpec spec = GridSpec::for_image(img, 16);
    const OrientationStack lifted = lift_dirac(img, spec);
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 16; ++j) {
            for (int k = 0; k < 16; ++k) {
                const double want = (k == 8) ? img.at(i, j) : 0.0;  // theta_8 = pi/2
                REQUIRE(lifted.at(k, i, j) == want);
            }
        }
    }
}

TEST_CASE("lift_dirac maps constant images to the zero stack") {
    const Image2D img(7, 7, 0.9);
    const GridSpec spec = GridSpec::for_image(img, 8);
    const OrientationStack lifted = lift_dirac(img, spec);
    for (double v : lifted.data()) REQUIRE(v == 0.0);
}

TEST_CASE("lift_dirac picks 3 pi / 4 for the diagonal ramp") {
    const int n = 12;
    Image2D img(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) img.at(i, j) = static_cast<double>(i + j) / (2 * n);
    const GridSpec spec = GridSpec::for_image(img, 8);
    const OrientationStack lifted = lift_dirac(img, spec);

    // brute-force argmax of |X3 I| over the theta grid, gradient (1,1)
    int expected = 0;
    double best = -1.0;
    for (int k = 0; k < 8; ++k) {
        const double th = k * std::numbers::pi / 8;
        const double v = std::abs(-std::sin(th) + std::cos(th));
        if (v > best) {
            best = v;
            expected = k;
        }
    }
    REQUIRE(expected == 6);  // theta_6 = 3 pi / 4
    for (int i = 1; i + 1 < n; ++i)
        for (int j = 1; j + 1 < n; ++j)
            for (int k = 0; k < 8; ++k)
                REQUIRE(lifted.at(k, i, j) == ((k == expected) ? img.at(i, j) : 0.0));
}

TEST_CASE("lift_dirac fibers have at most one nonzero entry") {
    const Image2D img = oracle::random_image(9, 9, 1234);
    const GridSpec spec = GridSpec::for_image(img, 12);
    const OrientationStack lifted = lift_dirac(img, spec);
    for (int i = 0; i < 9; ++i) {
        for (int j = 0; j < 9; ++j) {
            int nonzero = 0;
            for (int k = 0; k < 12; ++k) nonzero += lifted.at(k, i, j) != 0.0;
            REQUIRE(nonzero <= 1);
        }
    }
}

TEST_CASE("project_max recovers lifted images within the grid-misalignment bound") {
    const Image2D img = ramp_x(10, 20);
    const double sigma = 1.0;
    const GridSpec spec = GridSpec::for_image(img, 32);
    const OrientationStack lifted = lift_gaussian(img, {sigma, 0.0, 0.01}, spec);
    const Image2D back = project_max(lifted);

    const double half = 0.5 * spec.d_theta();
    const double worst = 1.0 - std::exp(-std::sin(half) * std::sin(half) / (2 * sigma * sigma));
    for (int i = 0; i < img.rows(); ++i) {
        for (int j = 0; j < img.cols(); ++j) {
            REQUIRE(back.at(i, j) <= img.at(i, j) + 1e-12);
            REQUIRE(img.at(i, j) - back.at(i, j) <= worst * img.at(i, j) + 1e-12);
        }
    }
}

TEST_CASE("project_max of constants and one-hot stacks") {
    const OrientationStack constant(5, 5, 8, 0.7);
    const Image2D pc = project_max(constant);
    for (double v : pc.data()) REQUIRE(v == 0.7);

    const Image2D img = oracle::random_image(9, 9, 321, 0.1, 0.9);
    const GridSpec spec = GridSpec::for_image(img, 8);
    const Image2D back = project_max(lift_dirac(img, spec));
    const auto [gx, gy] = detail::image_gradient(img, spec);
    for (int i = 0; i < 9; ++i)
        for (int j = 0; j < 9; ++j) {
            const bool degenerate = gx.at(i, j) == 0.0 && gy.at(i, j) == 0.0;
            REQUIRE(back.at(i, j) == (degenerate ? 0.0 : img.at(i, j)));
        }
}

TEST_CASE("project_max is monotone") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> bump(0.0, 0.3);
    for (int trial = 0; trial < 10; ++trial) {
        const OrientationStack a = oracle::random_stack(6, 6, 8, rng());
        OrientationStack b = a;
        for (double& v : b.data()) v = std::min(1.0, v + bump(rng));
        const Image2D pa = project_max(a);
        const Image2D pb = project_max(b);
        for (size_t p = 0; p < pa.size(); ++p) REQUIRE(pa.data()[p] <= pb.data()[p]);
    }
}

TEST_CASE("the fiber quadrature of cos^2 is exactly one half") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
    for (int trial = 0; trial < 20; ++trial) {
        const double phi = angle(rng);
        const int nth = 1024;
        double acc = 0.0;
        for (int k = 0; k < nth; ++k) {
            const double c = std::cos(k * std::numbers::pi / nth - phi);
            acc += c * c;
        }
        REQUIRE(std::abs(acc / nth - 0.5) < 1e-12);
    }
}

TEST_CASE("project_log_mean inverts the Gaussian lift on ramp-plus-bump") {
    const Fixture fx = make_fixture("ramp-bump", 64);
    const double sigma = 1.0;
    const GridSpec spec = GridSpec::for_image(fx.image, 64);
    const OrientationStack lifted = lift_gaussian(fx.image, {sigma, 0.0, 0.01}, spec);
    const Image2D back = project_log_mean(lifted, sigma);
    double max_err = 0.0;
    for (size_t p = 0; p < back.size(); ++p)
        max_err = std::max(max_err, std::abs(back.data()[p] - fx.image.data()[p]));
    REQUIRE(max_err <= 1e-3);
}

TEST_CASE("project_log_mean of a fiber-constant stack applies the correction") {
    const double sigma = 1.0;
    const OrientationStack s(5, 5, 16, 0.5);
    const Image2D out = project_log_mean(s, sigma);
    const double want = 0.5 * std::exp(1.0 / (4.0 * sigma * sigma));
    for (double v : out.data()) REQUIRE(std::abs(v - want) < 1e-12);
}

TEST_CASE("project_log_mean rejects nonpositive fibers but floors tiny ones") {
    OrientationStack s(5, 5, 8, 0.4);
    s.at(3, 2, 4) = 1e-14;  // grazing zero is floored, not an error
    REQUIRE_NOTHROW(project_log_mean(s, 1.0));

    s.at(3, 2, 4) = 0.0;
    REQUIRE_THROWS_MATCHES(
        project_log_mean(s, 1.0), DomainError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("(2, 4)")));
}

TEST_CASE("round trip stays within 1e-3 for sigma in [0.5, 5]") {
    const Fixture fx = make_fixture("ramp-bump", 48);
    const GridSpec spec = GridSpec::for_image(fx.image, 64);
    for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
        const OrientationStack lifted = lift_gaussian(fx.image, {sigma, 0.0, 0.01}, spec);
        const Image2D back = project_log_mean(lifted, sigma);
        for (size_t p = 0; p < back.size(); ++p)
            REQUIRE(std::abs(back.data()[p] - fx.image.data()[p]) <= 1e-3);
    }
}

TEST_CASE("projections are invariant under half-fiber shifts") {
    Image2D img(8, 10);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 10; ++j) img.at(i, j) = 0.1 + 0.08 * j;
    const GridSpec spec = GridSpec::for_image(img, 16);
    const OrientationStack lifted = lift_gaussian(img, {1.0, 0.0, 0.01}, spec);

    OrientationStack shifted(8, 10, 16);
    for (int k = 0; k < 16; ++k)
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 10; ++j) shifted.at(k, i, j) = lifted.at((k + 8) % 16, i, j);

    const Image2D m1 = project_max(lifted), m2 = project_max(shifted);
    for (size_t p = 0; p < m1.size(); ++p) REQUIRE(m1.data()[p] == m2.data()[p]);

    const Image2D l1 = project_log_mean(lifted, 1.0), l2 = project_log_mean(shifted, 1.0);
    for (size_t p = 0; p < l1.size(); ++p) REQUIRE(std::abs(l1.data()[p] - l2.data()[p]) < 1e-12);
}

TEST_CASE("lift parameter validation") {
    const Image2D img(5, 5, 0.5);
    const GridSpec spec = GridSpec::for_image(img, 8);
    REQUIRE_THROWS_AS(lift_gaussian(img, {0.0, 0.0, 0.01}, spec), ConfigError);
    REQUIRE_THROWS_AS(lift_gaussian(img, {1.0, -1.0, 0.01}, spec), ConfigError);
    REQUIRE_THROWS_AS(lift_gaussian(img, {1.0, 0.0, 1.5}, spec), ConfigError);
    REQUIRE_THROWS_AS(preprocess_gaussian(img, -0.1), ConfigError);
}
