#include <doctest.h>

#include "skyrme/fd_weights.hpp"
#include "skyrme/grid.hpp"
#include "skyrme/operators.hpp"
#include "skyrme/rk4.hpp"

#include <cmath>
#include <limits>

using namespace skyrme;

namespace {

ScalarField sample(const RadialGrid& g, Parity p, double (*fn)(double)) {
    ScalarField f(g, p);
    for (std::size_t i = 0; i < g.n; ++i) f.v[i] = fn(g.r(i));
    return f;
}

double max_err(const ScalarField& a, double (*fn)(double)) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::fabs(a.v[i] - fn(a.grid.r(i))));
    return m;
}

} // namespace

TEST_CASE("fd_weights reproduces the classic centered stencils") {
    std::vector<double> x = {-2.0, -1.0, 0.0, 1.0, 2.0};
    auto w1 = fd_weights(0.0, x, 1);
    CHECK(w1[0] == doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    CHECK(w1[1] == doctest::Approx(-8.0 / 12.0).epsilon(1e-14));
    CHECK(w1[2] == doctest::Approx(0.0).scale(1.0));
    CHECK(w1[3] == doctest::Approx(8.0 / 12.0).epsilon(1e-14));
    CHECK(w1[4] == doctest::Approx(-1.0 / 12.0).epsilon(1e-14));

    auto w2 = fd_weights(0.0, x, 2);
    CHECK(w2[0] == doctest::Approx(-1.0 / 12.0).epsilon(1e-14));
    CHECK(w2[2] == doctest::Approx(-30.0 / 12.0).epsilon(1e-14));
}

TEST_CASE("fd_weights is exact on polynomials up to the node count") {
    // 6 one-sided nodes: second derivative of a degree-5 polynomial exactly.
    std::vector<double> x = {0.0, 0.7, 1.4, 2.1, 2.8, 3.5};
    auto w = fd_weights(0.0, x, 2);
    // p = 0.3 r^5 - 1.1 r^4 + 2 r^3 - 0.7 r^2 + 1.9 r - 0.4
    auto p = [](double r) { return ((((0.3 * r - 1.1) * r + 2.0) * r - 0.7) * r + 1.9) * r - 0.4; };
    auto d2ref = [](double r) { return 20.0 * 0.3 * r * r * r - 12.0 * 1.1 * r * r + 6.0 * 2.0 * r - 2.0 * 0.7; };
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) acc += w[k] * p(x[k]);
    CHECK(acc == doctest::Approx(d2ref(0.0)).epsilon(1e-12));
}

TEST_CASE("derivative of sin converges at 4th order including the origin") {
    double errs[2];
    double hs[2] = {0.02, 0.01};
    for (int k = 0; k < 2; ++k) {
        auto g = make_grid(hs[k], 10.0);
        auto f = sample(g, Parity::odd, [](double r) { return std::sin(r); });
        auto d1 = derivative(f, 1);
        errs[k] = max_err(d1, [](double r) { return std::cos(r); });
    }
    CHECK(errs[0] / errs[1] > 14.0);
    CHECK(errs[1] < 1e-8);
}

TEST_CASE("derivative is exact on r^3") {
    auto g = make_grid(0.05, 5.0);
    auto f = sample(g, Parity::odd, [](double r) { return r * r * r; });
    auto d1 = derivative(f, 1);
    auto d2 = derivative(f, 2);
    CHECK(max_err(d1, [](double r) { return 3.0 * r * r; }) < 1e-11);
    CHECK(max_err(d2, [](double r) { return 6.0 * r; }) < 1e-9);
}

TEST_CASE("parity pins the origin derivatives") {
    auto g = make_grid(0.01, 5.0);
    auto even = sample(g, Parity::even, [](double r) { return std::cos(r); });
    auto d1 = derivative(even, 1);
    CHECK(d1.v[0] == 0.0); // folds to exactly zero, not just small

    auto odd = sample(g, Parity::odd, [](double r) { return std::sin(r); });
    auto d2 = derivative(odd, 2);
    CHECK(d2.v[0] == 0.0);
    CHECK(d2.parity == Parity::odd);
    CHECK(d1.parity == Parity::odd);
}

TEST_CASE("derivative keeps 4th order on a cell-centered grid") {
    double errs[2];
    double hs[2] = {0.02, 0.01};
    for (int k = 0; k < 2; ++k) {
        RadialGrid g(hs[k], static_cast<std::size_t>(6.0 / hs[k]), true);
        auto f = sample(g, Parity::odd, [](double r) { return std::sin(r); });
        errs[k] = max_err(derivative(f, 1), [](double r) { return std::cos(r); });
    }
    CHECK(errs[0] / errs[1] > 14.0);
}

TEST_CASE("derivative rejects junk input") {
    auto g = make_grid(0.1, 4.0);
    ScalarField f(g, Parity::even);
    f.v[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(derivative(f, 1), std::runtime_error);
    ScalarField ok(g, Parity::even, 1.0);
    CHECK_THROWS_AS(derivative(ok, 3), std::invalid_argument);
}

TEST_CASE("integral of r^2 over [0,1] is machine-exact at h=1e-3") {
    auto g = make_grid(1e-3, 1.0);
    auto f = sample(g, Parity::even, [](double r) { return r * r; });
    CHECK(std::fabs(integral(f, 0.0, 1.0) - 1.0 / 3.0) < 1e-10);
}

TEST_CASE("integral of exp(-r^2) over [0,8] hits sqrt(pi)/2") {
    auto g = make_grid(0.004, 8.0);
    auto f = sample(g, Parity::even, [](double r) { return std::exp(-r * r); });
    double ref = 0.5 * std::sqrt(M_PI); // tail beyond 8 is ~1e-29
    CHECK(std::fabs(integral(f, 0.0, 8.0) - ref) < 1e-8);
}

TEST_CASE("integral handles off-node endpoints by interpolation") {
    auto g = make_grid(0.01, 7.0);
    auto f = sample(g, Parity::odd, [](double r) { return std::sin(r); });
    double a = 0.1234, b = 5.6789;
    CHECK(integral(f, a, b) == doctest::Approx(std::cos(a) - std::cos(b)).epsilon(1e-9));
}

TEST_CASE("integral range conventions") {
    auto g = make_grid(0.1, 4.0);
    auto f = sample(g, Parity::even, [](double r) { return r; });
    CHECK(integral(f, 1.5, 1.5) == 0.0);
    CHECK_THROWS_AS(integral(f, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integral(f, 0.0, 9.0), std::invalid_argument);
}

TEST_CASE("interpolation is exact on r^3 at mid-cell") {
    auto g = make_grid(0.1, 5.0);
    auto f = sample(g, Parity::odd, [](double r) { return r * r * r; });
    double r = 2.05;
    CHECK(std::fabs(interpolate_at(f, r) - r * r * r) < 1e-12);
}

TEST_CASE("interpolation of sin at pi/3 carries O(h^5) error") {
    double errs[2];
    double hs[2] = {0.02, 0.01};
    double r = M_PI / 3.0;
    for (int k = 0; k < 2; ++k) {
        auto g = make_grid(hs[k], 5.0);
        auto f = sample(g, Parity::odd, [](double r_) { return std::sin(r_); });
        errs[k] = std::fabs(interpolate_at(f, r) - std::sin(r));
    }
    CHECK(errs[1] < 1e-11);
    CHECK(errs[0] / errs[1] > 24.0); // 5th order would give 32
}

TEST_CASE("interpolation works against both ends of the grid") {
    auto g = make_grid(0.01, 5.0);
    auto f = sample(g, Parity::odd, [](double r) { return std::sin(r); });
    CHECK(interpolate_at(f, 0.004) == doctest::Approx(std::sin(0.004)).epsilon(1e-10));
    CHECK(interpolate_at(f, 4.997) == doctest::Approx(std::sin(4.997)).epsilon(1e-10));
    CHECK_THROWS_AS(interpolate_at(f, 5.5), std::invalid_argument);
    CHECK_THROWS_AS(interpolate_at(f, -0.2), std::invalid_argument);
}

TEST_CASE("rk4 integrates y'=y to e") {
    auto rhs = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{y[0]}; };
    std::array<double, 1> y{1.0};
    double dt = 1e-3;
    for (int i = 0; i < 1000; ++i) y = rk4_step(rhs, i * dt, dt, y);
    CHECK(std::fabs(y[0] - std::exp(1.0)) < 1e-8);
}

TEST_CASE("rk4 halving shrinks the error ~16x") {
    auto rhs = [](double, const std::array<double, 1>& y) { return std::array<double, 1>{y[0]}; };
    double errs[2];
    double dts[2] = {0.02, 0.01};
    for (int k = 0; k < 2; ++k) {
        std::array<double, 1> y{1.0};
        int n = static_cast<int>(1.0 / dts[k] + 0.5);
        for (int i = 0; i < n; ++i) y = rk4_step(rhs, i * dts[k], dts[k], y);
        errs[k] = std::fabs(y[0] - std::exp(1.0));
    }
    CHECK(errs[0] / errs[1] > 14.0);
    CHECK(errs[0] / errs[1] < 18.0);
}

TEST_CASE("rk4 rejects a blow-up with a time stamp") {
    auto rhs = [](double t, const std::array<double, 1>& y) {
        return std::array<double, 1>{t > 0.5 ? std::numeric_limits<double>::quiet_NaN() : y[0]};
    };
    std::array<double, 1> y{1.0};
    CHECK_THROWS_AS(
        [&] {
            for (int i = 0; i < 100; ++i) y = rk4_step(rhs, i * 0.01, 0.01, y);
        }(),
        std::runtime_error);
}

TEST_CASE("vector rk4 matches the fixed-size stepper") {
    auto rhs_small = [](double, const std::array<double, 2>& y) {
        return std::array<double, 2>{y[1], -y[0]};
    };
    std::array<double, 2> ya{1.0, 0.0};
    std::vector<double> yv = {1.0, 0.0};
    Rk4Scratch scratch;
    auto rhs_vec = [](double, const std::vector<double>& y, std::vector<double>& d) {
        d[0] = y[1];
        d[1] = -y[0];
    };
    for (int i = 0; i < 200; ++i) {
        ya = rk4_step(rhs_small, i * 0.01, 0.01, ya);
        rk4_step_inplace(rhs_vec, i * 0.01, 0.01, yv, scratch);
    }
    CHECK(yv[0] == doctest::Approx(ya[0]).epsilon(1e-14));
    CHECK(yv[1] == doctest::Approx(ya[1]).epsilon(1e-14));
    CHECK(ya[0] == doctest::Approx(std::cos(2.0)).epsilon(1e-8));
}
