#include "wavescat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wavescat/errors.hpp"

namespace wavescat {

double SpectralModel::min_positive_lambda() const {
    for (const auto& p : points)
        if (p.lambda > 0.0) return p.lambda;
    throw ArgumentError("spectral model '" + label + "' has no positive modes");
}

double SpectralModel::max_lambda() const {
    return points.empty() ? 0.0 : points.back().lambda;
}

SpectralModel make_spectral_model(std::string label, std::vector<SpectralPoint> points) {
    for (const auto& p : points) {
        if (!(p.weight > 0.0))
            throw ArgumentError("spectral model: weights must be positive");
        if (p.lambda < 0.0)
            throw ArgumentError("spectral model: lambda must be >= 0");
        if (p.is_kernel != (p.lambda == 0.0))
            throw ArgumentError("spectral model: kernel flag must mark exactly lambda == 0");
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const SpectralPoint& a, const SpectralPoint& b) {
                         return a.lambda < b.lambda;
                     });
    return SpectralModel{std::move(label), std::move(points)};
}

namespace {

void check_aligned(const SpectralModel& model, const DataVector& data) {
    if (data.u1.size() != model.size() || data.u2.size() != model.size())
        throw ArgumentError("data vector length does not match the spectral model");
}

}  // namespace

double energy_norm(const SpectralModel& model, const DataVector& data) {
    check_aligned(model, data);
    double acc = 0.0;
    for (std::size_t j = 0; j < model.size(); ++j) {
        const auto& p = model.points[j];
        acc += p.weight *
               (p.lambda * p.lambda * std::norm(data.u1[j]) + std::norm(data.u2[j]));
    }
    return std::sqrt(acc);
}

double v_norm(const SpectralModel& model, const DataVector& v_state) {
    check_aligned(model, v_state);
    double acc = 0.0;
    for (std::size_t j = 0; j < model.size(); ++j)
        acc += model.points[j].weight *
               (std::norm(v_state.u1[j]) + std::norm(v_state.u2[j]));
    return std::sqrt(acc);
}

DataVector to_v_representation(const SpectralModel& model, const DataVector& data) {
    check_aligned(model, data);
    DataVector v = data;
    for (std::size_t j = 0; j < model.size(); ++j)
        v.u1[j] *= model.points[j].lambda;
    return v;
}

double e_gamma_norm(const SpectralModel& model, const DataVector& data, double gamma,
                    double zone_n) {
    check_aligned(model, data);
    if (gamma < 0.0) throw ArgumentError("e_gamma_norm: gamma must be >= 0");
    if (!(zone_n > 0.0)) throw ArgumentError("e_gamma_norm: zone_n must be > 0");
    double acc = 0.0;
    for (std::size_t j = 0; j < model.size(); ++j) {
        const auto& p = model.points[j];
        if (p.is_kernel) {
            if (gamma > 0.0 && (data.u1[j] != Complex(0.0) || data.u2[j] != Complex(0.0)))
                throw DomainError("E^(gamma) with gamma > 0 excludes kernel modes, "
                                  "but data is nonzero on one");
            // gamma == 0: [0]^{-1} * 0 * u1 contributes nothing, u2 as is.
            acc += p.weight * std::norm(data.u2[j]);
            continue;
        }
        const double bracket = std::min(p.lambda, zone_n);
        const double w1 = std::pow(bracket, -gamma - 1.0) * p.lambda;
        const double w2 = std::pow(bracket, -gamma);
        acc += p.weight *
               (w1 * w1 * std::norm(data.u1[j]) + w2 * w2 * std::norm(data.u2[j]));
    }
    return std::sqrt(acc);
}

SpectralModel dirichlet_interval(int k) {
    if (k <= 0) throw ArgumentError("dirichlet_interval: k must be positive");
    std::vector<SpectralPoint> pts;
    pts.reserve(k);
    for (int j = 1; j <= k; ++j) pts.push_back({double(j), 1.0, false});
    return make_spectral_model("dirichlet_interval(k=" + std::to_string(k) + ")",
                               std::move(pts));
}

SpectralModel neumann_interval(int k) {
    if (k <= 0) throw ArgumentError("neumann_interval: k must be positive");
    std::vector<SpectralPoint> pts;
    pts.reserve(k + 1);
    pts.push_back({0.0, 1.0, true});
    for (int j = 1; j <= k; ++j) pts.push_back({double(j), 1.0, false});
    return make_spectral_model("neumann_interval(k=" + std::to_string(k) + ")",
                               std::move(pts));
}

namespace {

/// Node grid on [xi_min, xi_max] including endpoints; trapezoid-style
/// radial weights xi^(dim-1) * dxi. Nodes whose weight vanishes (xi = 0
/// with dim > 1) are dropped: they carry no measure.
std::vector<SpectralPoint> radial_nodes(const ModelParams& p,
                                        double (*lambda_of_xi)(double, int), int extra) {
    if (p.count < 2) throw ArgumentError("radial model: count must be >= 2");
    if (!(p.xi_max > p.xi_min) || p.xi_min < 0.0)
        throw ArgumentError("radial model: need 0 <= xi_min < xi_max");
    const int n = p.count;
    const double dxi = (p.xi_max - p.xi_min) / (n - 1);
    std::vector<SpectralPoint> pts;
    pts.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double xi = p.xi_min + i * dxi;
        const double endpoint_factor = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double w = std::pow(xi, p.dim - 1) * dxi * endpoint_factor;
        if (w <= 0.0) continue;
        const double lam = lambda_of_xi(xi, extra);
        pts.push_back({lam, w, lam == 0.0});
    }
    return pts;
}

double lam_kg(double xi, int) { return std::sqrt(1.0 + xi * xi); }
double lam_wave(double xi, int) { return xi; }
double lam_plate(double xi, int) { return xi * xi; }

}  // namespace

SpectralModel klein_gordon_radial(const ModelParams& params) {
    return make_spectral_model("klein_gordon", radial_nodes(params, lam_kg, 0));
}

SpectralModel wave_radial(const ModelParams& params) {
    ModelParams p = params;
    if (p.xi_min == 0.0) {
        // Lambda = 0 is a measure-zero point for the free Laplacian; shift
        // the grid onto midpoints so every node carries positive lambda.
        const double dxi = (p.xi_max - p.xi_min) / p.count;
        std::vector<SpectralPoint> pts;
        for (int i = 0; i < p.count; ++i) {
            const double xi = p.xi_min + (i + 0.5) * dxi;
            pts.push_back({xi, std::pow(xi, p.dim - 1) * dxi, false});
        }
        return make_spectral_model("wave_radial", std::move(pts));
    }
    return make_spectral_model("wave_radial", radial_nodes(p, lam_wave, 0));
}

SpectralModel plate_radial(const ModelParams& params) {
    ModelParams p = params;
    const double dxi = (p.xi_max - p.xi_min) / p.count;
    std::vector<SpectralPoint> pts;
    for (int i = 0; i < p.count; ++i) {
        const double xi = p.xi_min + (i + 0.5) * dxi;
        pts.push_back({xi * xi, std::pow(xi, p.dim - 1) * dxi, false});
    }
    return make_spectral_model("plate_radial", std::move(pts));
}

SpectralModel builtin_model(ModelKind kind, const ModelParams& params) {
    switch (kind) {
        case ModelKind::DirichletInterval: return dirichlet_interval(params.count);
        case ModelKind::NeumannInterval: return neumann_interval(params.count);
        case ModelKind::KleinGordon: return klein_gordon_radial(params);
        case ModelKind::WaveRadial: return wave_radial(params);
        case ModelKind::PlateRadial: return plate_radial(params);
    }
    throw ArgumentError("unknown spectral model kind");
}

DataVector gaussian_bump_data(const SpectralModel& model, double center, double width) {
    if (!(width > 0.0)) throw ArgumentError("gaussian_bump: width must be > 0");
    DataVector d = DataVector::zero(model.size());
    for (std::size_t j = 0; j < model.size(); ++j) {
        const auto& p = model.points[j];
        if (p.is_kernel) continue;
        const double s = (p.lambda - center) / width;
        const double g = std::exp(-s * s);
        d.u1[j] = g;
        d.u2[j] = g;
    }
    return d;
}

DataVector compact_bump_data(const SpectralModel& model, double lo, double hi) {
    if (!(hi > lo)) throw ArgumentError("compact_bump: need lo < hi");
    DataVector d = DataVector::zero(model.size());
    for (std::size_t j = 0; j < model.size(); ++j) {
        const double lam = model.points[j].lambda;
        const double s = 2.0 * (lam - lo) / (hi - lo) - 1.0;
        if (std::abs(s) >= 1.0 || model.points[j].is_kernel) continue;
        const double g = std::exp(-1.0 / (1.0 - s * s));
        d.u1[j] = g;
        d.u2[j] = g;
    }
    return d;
}

DataVector kernel_only_data(const SpectralModel& model, Complex u1, Complex u2) {
    DataVector d = DataVector::zero(model.size());
    for (std::size_t j = 0; j < model.size(); ++j)
        if (model.points[j].is_kernel) {
            d.u1[j] = u1;
            d.u2[j] = u2;
        }
    return d;
}

DataVector seeded_random_data(const SpectralModel& model, std::uint64_t seed, double lambda_lo,
                       double lambda_hi) {
    std::mt19937_64 rng(seed);
    auto u01 = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };
    DataVector d = DataVector::zero(model.size());
    for (std::size_t j = 0; j < model.size(); ++j) {
        const auto& p = model.points[j];
        // Draw for every mode so the values do not depend on the window.
        const double a1 = 2.0 * u01() - 1.0, b1 = 2.0 * u01() - 1.0;
        const double a2 = 2.0 * u01() - 1.0, b2 = 2.0 * u01() - 1.0;
        if (p.is_kernel || p.lambda < lambda_lo || p.lambda > lambda_hi) continue;
        d.u1[j] = Complex(a1, b1);
        d.u2[j] = Complex(a2, b2);
    }
    return d;
}

}  // namespace wavescat
