#include <doctest.h>

#include <cmath>
#include <limits>

#include "wavescat/coefficients.hpp"
#include "wavescat/errors.hpp"

using namespace wavescat;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("lambda_at: zero coefficient gives 1") {
    CHECK(lambda_at(zero_coefficient(), 7.0) == 1.0);
}

TEST_CASE("lambda_at: mu/(1+t) has exact primitive") {
    const auto coeff = mu_over_1pt(0.3);
    CHECK(lambda_at(coeff, 9.0) == doctest::Approx(std::pow(10.0, 0.3)).epsilon(1e-14));
    // quadrature path agrees with the closed form
    CoefficientModel no_prim = coeff;
    no_prim.primitive = nullptr;
    for (double t : {0.5, 9.0, 1234.0, 1e5})
        CHECK(lambda_at(no_prim, t) ==
              doctest::Approx(lambda_at(coeff, t)).epsilon(1e-9));
}

TEST_CASE("lambda_at: iterated log grows like log^mu") {
    const auto coeff = iterated_log(2.0, 1);
    double lo = kInf, hi = 0.0;
    for (double t : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5, 1e6}) {
        const double ratio =
            lambda_at(coeff, t) / std::pow(std::log(std::exp(1.0) + t), 2.0);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    CHECK(hi / lo < 2.0);
}

TEST_CASE("lambda_at is nondecreasing under (A1)") {
    const auto coeff = footnote_counterexample();
    double prev = 0.0;
    for (double t : {0.0, 0.1, 1.0, 5.0, 42.0, 420.0, 4200.0}) {
        const double value = lambda_at(coeff, t);
        CHECK(value >= prev - 1e-12);
        prev = value;
    }
}

TEST_CASE("tail_integral closed forms") {
    CHECK(tail_integral(power_law(2.0), 9.0, kInf) == doctest::Approx(0.1).epsilon(1e-10));
    CHECK(tail_integral(zero_coefficient(), 2.0, 100.0) == 0.0);
    CHECK(tail_integral(mu_over_1pt(0.7), 0.0, 1e3) ==
          doctest::Approx(0.7 * std::log(1001.0)).epsilon(1e-12));
    CHECK_THROWS_AS(tail_integral(zero_coefficient(), 5.0, 1.0), ArgumentError);
}

TEST_CASE("tail_integral additivity") {
    const auto coeff = iterated_log(1.0, 1);  // no closed-form primitive
    const double h = 512.0, t = 3.0;
    const double lhs = tail_integral(coeff, t, h) +
                       integrate([&](double s) { return coeff.b(s); }, 0.0, t);
    const double rhs = integrate([&](double s) { return coeff.b(s); }, 0.0, h);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
}

TEST_CASE("builtin primitives agree with quadrature up to t = 1e5") {
    for (const auto& coeff : {power_law(2.0), mu_over_1pt(0.3), mu_over_1pt(1.0),
                              footnote_counterexample()}) {
        CoefficientModel via_quad = coeff;
        via_quad.primitive = nullptr;
        for (double t : {1.0, 100.0, 1e5}) {
            const double a = primitive_at(coeff, t);
            const double b = primitive_at(via_quad, t, 1e-12);
            CHECK(a == doctest::Approx(b).epsilon(1e-9));
        }
    }
}

TEST_CASE("classify: declared regimes validated by sampling") {
    CHECK(classify(mu_over_1pt(0.3)).tag == RegimeTag::C1);
    CHECK(classify(power_law(2.0)).tag == RegimeTag::Integrable);
    CHECK(classify(mu_over_1pt(0.75)).tag == RegimeTag::C2);
    CHECK(classify(zero_coefficient()).tag == RegimeTag::Integrable);

    // mu = 1/2 sits in the gap: neither C1 nor C2.
    CHECK(classify(mu_over_1pt(0.5)).tag == RegimeTag::Unclassified);

    // undeclared coefficients never get upgraded
    CoefficientModel anon = mu_over_1pt(0.3);
    anon.mu_upper.reset();
    anon.mu_lower.reset();
    anon.tail_finite.reset();
    CHECK(classify(anon).tag == RegimeTag::Unclassified);
}

TEST_CASE("classify: footnote coefficient flags gamma = 2 mu_upper") {
    const Regime c1 = classify(mu_over_1pt(0.3));
    CHECK(c1.gamma_two_mu_admissible);

    const Regime foot = classify(footnote_counterexample());
    CHECK(foot.tag == RegimeTag::C1);
    CHECK_FALSE(foot.gamma_two_mu_admissible);
}

TEST_CASE("classify: contradicted declaration names a witness") {
    CoefficientModel lying = mu_over_1pt(0.75);
    lying.mu_upper = 0.3;  // actual t*b -> 0.75
    CHECK_THROWS_AS(classify(lying), ValidationError);

    CoefficientModel fake_l1 = mu_over_1pt(0.3);
    fake_l1.tail_finite = true;  // not integrable
    CHECK_THROWS_AS(classify(fake_l1), ValidationError);
}

TEST_CASE("classify: C2 gamma index follows mu_upper_plus") {
    const Regime r = classify(mu_over_1pt(1.0));
    CHECK(r.tag == RegimeTag::C2);
    CHECK(r.mu_upper_plus == doctest::Approx(1.01));
    CHECK(r.gamma_index == doctest::Approx(0.01));
    const Regime r2 = classify(mu_over_1pt(1.0), 1e4, 200, 1.25);
    CHECK(r2.gamma_index == doctest::Approx(0.25));
}

TEST_CASE("negated coefficient mirrors sign and metadata") {
    const auto coeff = negated(mu_over_1pt(0.3));
    CHECK(coeff.b(3.0) == doctest::Approx(-0.075));
    CHECK(lambda_at(coeff, 9.0) ==
          doctest::Approx(std::pow(10.0, -0.3)).epsilon(1e-14));
    CHECK(*coeff.mu_upper == doctest::Approx(-0.3));
}

TEST_CASE("tabulated coefficient: pchip reproduces smooth samples") {
    std::vector<double> t, b, bp;
    const auto ref = mu_over_1pt(0.4);
    for (int i = 0; i <= 400; ++i) {
        const double ti = i * 0.25;
        t.push_back(ti);
        b.push_back(ref.b(ti));
        bp.push_back(ref.b_prime(ti));
    }
    const auto tab = tabulated_coefficient(t, b, bp, "tab");
    for (double ti : {0.3, 7.7, 42.0, 99.0}) {
        CHECK(tab.b(ti) == doctest::Approx(ref.b(ti)).epsilon(1e-6));
        CHECK(tab.b_prime(ti) == doctest::Approx(ref.b_prime(ti)).epsilon(1e-4));
        CHECK(primitive_at(tab, ti) ==
              doctest::Approx(primitive_at(ref, ti)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(tab.b(1e4), ArgumentError);
}
