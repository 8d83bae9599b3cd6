#include <doctest.h>

#include <cmath>

#include "wavescat/matrix.hpp"
#include "wavescat/ode.hpp"
#include "wavescat/quadrature.hpp"

using namespace wavescat;

TEST_CASE("adaptive quadrature on smooth integrands") {
    QuadratureOptions opt;
    opt.rtol = 1e-12;
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, opt) ==
          doctest::Approx(2.0).epsilon(1e-11));
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x); }, 0.0, 9.0, opt) ==
          doctest::Approx(std::log(10.0)).epsilon(1e-11));
    CHECK(integrate([](double) { return 0.0; }, 0.0, 5.0, opt) == 0.0);
}

TEST_CASE("improper integral by doubling horizons") {
    QuadratureOptions opt;
    opt.rtol = 1e-11;
    const double v =
        integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0, opt);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
    CHECK_THROWS_AS(
        integrate_to_infinity([](double x) { return 1.0 / (1.0 + x); }, 0.0, opt),
        QuadratureError);
}

TEST_CASE("cumulative integral is 4th order on a smooth function") {
    const int n = 201;
    const double h = 1.0 / (n - 1);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = std::exp(i * h);
    const auto prefix = cumulative_integral(f, h);
    for (int i = 0; i < n; i += 50)
        CHECK(prefix[i] == doctest::Approx(std::exp(i * h) - 1.0).epsilon(1e-9));
}

TEST_CASE("dop853 integrates a rotation to tight accuracy") {
    const double omega = 5.0;
    auto rhs = [omega](double, const Vec2& y) {
        return Vec2(omega * y(1), -omega * y(0));
    };
    OdeOptions opt;
    opt.rtol = 1e-13;
    opt.atol = 1e-14;
    opt.max_step = 1.0 / omega;
    const Vec2 y = integrate_ode(rhs, 0.0, Vec2(1.0, 0.0), 10.0, opt);
    CHECK(y(0) == doctest::Approx(std::cos(50.0)).epsilon(1e-11));
    CHECK(y(1) == doctest::Approx(-std::sin(50.0)).epsilon(1e-11));
}

TEST_CASE("dop853 long-run phase accuracy (compensated update)") {
    // 6400 radians of phase; entrywise error must stay ~1e-11.
    const double omega = 64.0;
    auto rhs = [omega](double, const Vec2& y) {
        return Vec2(omega * y(1), -omega * y(0));
    };
    OdeOptions opt;
    opt.rtol = 1e-14;
    opt.atol = 1e-15;
    opt.max_step = 1.0 / omega;
    const Vec2 y = integrate_ode(rhs, 0.0, Vec2(1.0, 0.0), 100.0, opt);
    CHECK(std::abs(y(0) - std::cos(6400.0)) < 2e-11);
    CHECK(std::abs(y(1) + std::sin(6400.0)) < 2e-11);
}

TEST_CASE("dop853 reports stiffness on step underflow") {
    // Derivative blows up at t = 1; no step size can cross it.
    auto rhs = [](double t, const Eigen::Matrix<double, 1, 1>& y) {
        Eigen::Matrix<double, 1, 1> d;
        d(0) = y(0) / (1.0 - t);
        return d;
    };
    Eigen::Matrix<double, 1, 1> y0;
    y0(0) = 1.0;
    OdeOptions opt;
    opt.rtol = 1e-10;
    CHECK_THROWS_AS(integrate_ode(rhs, 0.0, y0, 2.0, opt), NumericalError);
}

TEST_CASE("2x2 norm helpers") {
    Mat2 m;
    m << 3.0, 0.0, 0.0, -2.0;
    CHECK(spectral_norm(m) == doctest::Approx(3.0));
    CHECK(smallest_singular_value(m) == doctest::Approx(2.0));
    CHECK(frobenius_norm(m) == doctest::Approx(std::sqrt(13.0)));
    Mat2C c;
    c << Complex(0, 1), 0.0, 0.0, Complex(0, -1);
    CHECK(spectral_norm(c) == doctest::Approx(1.0));
    CHECK(imag_residue(c) == doctest::Approx(1.0));
}
