#include <doctest.h>

#include <cmath>
#include <random>

#include "wavescat/errors.hpp"
#include "wavescat/spectral.hpp"

using namespace wavescat;

namespace {

SpectralModel random_model(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    std::vector<SpectralPoint> pts;
    for (std::size_t i = 0; i < n; ++i)
        pts.push_back({0.01 + 10.0 * u01(), 0.1 + u01(), false});
    return make_spectral_model("random", std::move(pts));
}

}  // namespace

TEST_CASE("energy_norm basics") {
    auto model = make_spectral_model("two", {{1.0, 1.0, false}, {1.0, 1.0, false}});
    DataVector d = DataVector::zero(2);
    d.u1 = {3.0, 4.0};  // V = (Lambda u1, u2) = ((3,0),(4,0))
    CHECK(energy_norm(model, d) == doctest::Approx(5.0));
    CHECK(energy_norm(model, DataVector::zero(2)) == 0.0);

    auto neumann = neumann_interval(2);
    DataVector k = DataVector::zero(neumann.size());
    k.u1[0] = 1.0;  // kernel mode carries no energy through Lambda u1
    CHECK(energy_norm(neumann, k) == 0.0);

    CHECK_THROWS_AS(energy_norm(model, DataVector::zero(3)), ArgumentError);
}

TEST_CASE("e_gamma_norm evaluates the bracket weights") {
    auto single = make_spectral_model("one", {{0.5, 1.0, false}});
    DataVector d = DataVector::zero(1);
    d.u1 = {1.0};
    // |[0.5]^{-2} * 0.5 * 1| = 2 for gamma = 1, N = 1
    CHECK(e_gamma_norm(single, d, 1.0, 1.0) == doctest::Approx(2.0));

    // gamma = 0, all lambda = N: equals the energy norm exactly
    auto at_n = make_spectral_model("n", {{2.0, 1.0, false}, {2.0, 3.0, false}});
    DataVector d2 = DataVector::zero(2);
    d2.u1 = {Complex(1.0, 0.5), 0.3};
    d2.u2 = {0.7, Complex(0.0, 2.0)};
    CHECK(e_gamma_norm(at_n, d2, 0.0, 2.0) ==
          doctest::Approx(energy_norm(at_n, d2)).epsilon(1e-14));
}

TEST_CASE("e_gamma_norm rejects kernel data for gamma > 0") {
    auto model = neumann_interval(2);
    DataVector d = kernel_only_data(model, 1.0, 0.0);
    CHECK_THROWS_AS(e_gamma_norm(model, d, 1.0, 1.0), DomainError);
    CHECK_NOTHROW(e_gamma_norm(model, d, 0.0, 1.0));
}

TEST_CASE("e_gamma_norm with gamma=0, N=1 is equivalent to the <Lambda> norm") {
    for (std::uint64_t seed : {7ull, 8ull, 9ull}) {
        auto model = random_model(seed, 40);
        auto data = seeded_random_data(model, seed + 100);
        double bracket = 0.0;
        for (std::size_t j = 0; j < model.size(); ++j) {
            const auto& p = model.points[j];
            bracket += p.weight * ((1.0 + p.lambda * p.lambda) * std::norm(data.u1[j]) +
                                   std::norm(data.u2[j]));
        }
        const double ratio = e_gamma_norm(model, data, 0.0, 1.0) / std::sqrt(bracket);
        CHECK(ratio > 0.5);
        CHECK(ratio < 2.0);
    }
}

TEST_CASE("norms: homogeneity and triangle inequality on random data") {
    auto model = random_model(3, 30);
    auto a = seeded_random_data(model, 4);
    auto b = seeded_random_data(model, 5);
    DataVector scaled = a, sum = a;
    for (std::size_t j = 0; j < model.size(); ++j) {
        scaled.u1[j] *= Complex(0.0, -2.5);
        scaled.u2[j] *= Complex(0.0, -2.5);
        sum.u1[j] += b.u1[j];
        sum.u2[j] += b.u2[j];
    }
    CHECK(energy_norm(model, scaled) ==
          doctest::Approx(2.5 * energy_norm(model, a)).epsilon(1e-12));
    CHECK(energy_norm(model, sum) <=
          energy_norm(model, a) + energy_norm(model, b) + 1e-12);
    CHECK(e_gamma_norm(model, scaled, 0.7, 1.0) ==
          doctest::Approx(2.5 * e_gamma_norm(model, a, 0.7, 1.0)).epsilon(1e-12));
    CHECK(e_gamma_norm(model, sum, 0.7, 1.0) <=
          e_gamma_norm(model, a, 0.7, 1.0) + e_gamma_norm(model, b, 0.7, 1.0) + 1e-12);
}

TEST_CASE("e_gamma_norm monotone in gamma when all lambda <= zone_n") {
    auto model = make_spectral_model(
        "small", {{0.2, 1.0, false}, {0.5, 2.0, false}, {0.9, 0.5, false}});
    auto data = seeded_random_data(model, 11);
    const double n0 = e_gamma_norm(model, data, 0.1, 1.0);
    const double n1 = e_gamma_norm(model, data, 0.6, 1.0);
    const double n2 = e_gamma_norm(model, data, 1.4, 1.0);
    CHECK(n0 <= n1 + 1e-12);
    CHECK(n1 <= n2 + 1e-12);
}

TEST_CASE("builtin models") {
    auto dir = dirichlet_interval(3);
    REQUIRE(dir.size() == 3);
    CHECK(dir.points[0].lambda == 1.0);
    CHECK(dir.points[2].lambda == 3.0);
    CHECK(dir.points[1].weight == 1.0);

    auto neu = neumann_interval(2);
    REQUIRE(neu.size() == 3);
    CHECK(neu.points[0].lambda == 0.0);
    CHECK(neu.points[0].is_kernel);
    CHECK(neu.points[2].lambda == 2.0);

    ModelParams p;
    p.count = 2;
    p.xi_min = 0.0;
    p.xi_max = 1.0;
    auto kg = klein_gordon_radial(p);
    REQUIRE(kg.size() == 2);
    CHECK(kg.points[0].lambda == doctest::Approx(1.0));
    CHECK(kg.points[1].lambda == doctest::Approx(std::sqrt(2.0)));
    CHECK(kg.min_positive_lambda() >= 1.0);

    auto wave = wave_radial({16, 3, 0.0, 4.0});
    for (const auto& pt : wave.points) CHECK(pt.lambda > 0.0);

    auto plate = plate_radial({8, 1, 0.0, 2.0});
    CHECK(plate.points.back().lambda ==
          doctest::Approx(std::pow(2.0 - 0.125, 2)).epsilon(1e-12));

    CHECK_THROWS_AS(dirichlet_interval(0), ArgumentError);
}

TEST_CASE("model invariants enforced") {
    CHECK_THROWS_AS(make_spectral_model("bad", {{1.0, 0.0, false}}), ArgumentError);
    CHECK_THROWS_AS(make_spectral_model("bad", {{-1.0, 1.0, false}}), ArgumentError);
    CHECK_THROWS_AS(make_spectral_model("bad", {{0.0, 1.0, false}}), ArgumentError);
    auto m = make_spectral_model("sorted", {{2.0, 1.0, false}, {1.0, 1.0, false}});
    CHECK(m.points[0].lambda == 1.0);
}

TEST_CASE("data generators respect support and kernel exclusion") {
    auto model = neumann_interval(8);
    auto bump = compact_bump_data(model, 2.0, 5.0);
    for (std::size_t j = 0; j < model.size(); ++j) {
        const double lam = model.points[j].lambda;
        if (lam <= 2.0 || lam >= 5.0) {
            CHECK(bump.u1[j] == Complex(0.0));
        } else {
            CHECK(std::abs(bump.u1[j]) > 0.0);
        }
    }
    auto gauss = gaussian_bump_data(model, 3.0, 1.0);
    CHECK(gauss.u1[0] == Complex(0.0));  // kernel mode zeroed
    CHECK(std::abs(gauss.u1[3]) > 0.1);

    auto rnd = seeded_random_data(model, 1234, 1.0, 5.0);
    CHECK(rnd.u1[0] == Complex(0.0));
    auto rnd2 = seeded_random_data(model, 1234, 1.0, 5.0);
    CHECK(rnd.u1[3] == rnd2.u1[3]);  // deterministic
}
