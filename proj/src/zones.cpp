#include "wavescat/zones.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wavescat/diagonal.hpp"
#include "wavescat/errors.hpp"
#include "wavescat/parallel.hpp"
#include "wavescat/propagator.hpp"
#include "wavescat/quadrature.hpp"

namespace wavescat {

double t_xi(double lambda, double zone_n) {
    if (!(zone_n > 0.0)) throw ArgumentError("t_xi: zone constant must be > 0");
    if (!(lambda > 0.0))
        throw DomainError("t_xi: lambda = 0 modes never leave the dissipative zone");
    return std::max(zone_n / lambda - 1.0, 0.0);
}

double choose_zone_constant(const CoefficientModel& coeff, const SpectralModel& model,
                            double n0, double horizon, double det_floor) {
    if (!(n0 > 0.0)) throw ArgumentError("choose_zone_constant: n0 must be > 0");
    double zone_n = n0;
    for (int attempt = 0; attempt < 64; ++attempt) {
        double min_det = 1.0;
        const double lam_lo = std::min(model.min_positive_lambda(), zone_n);
        const double lam_hi = std::max(model.max_lambda(), zone_n * 2.0);
        const int nl = 48, nt = 48;
        for (int i = 0; i < nl; ++i) {
            const double lam =
                std::exp(std::log(lam_lo) +
                         (std::log(lam_hi) - std::log(lam_lo)) * i / double(nl - 1));
            const double t0 = lam < zone_n ? t_xi(lam, zone_n) : 0.0;
            for (int k = 0; k < nt; ++k) {
                const double t =
                    (1.0 + t0) * std::pow((1.0 + horizon) / (1.0 + t0), k / double(nt - 1)) -
                    1.0;
                min_det = std::min(min_det, det_n1(coeff, t, lam));
            }
        }
        if (min_det >= det_floor) return zone_n;
        zone_n *= 2.0;
    }
    throw NumericalError("choose_zone_constant: no N with det N1 >= floor found");
}

double ZoneBoundReport::max_refinement_growth() const {
    double worst = 1.0;
    for (std::size_t i = 1; i < level_constants.size(); ++i)
        worst = std::max(worst, level_constants[i] / level_constants[i - 1]);
    return worst;
}

bool ZoneBoundReport::refinement_stable(double factor) const {
    for (std::size_t i = 1; i < level_constants.size(); ++i) {
        const double ratio = level_constants[i] / level_constants[i - 1];
        if (ratio > factor || ratio < 1.0 / factor) return false;
    }
    return !level_constants.empty();
}

bool ZoneBoundReport::strictly_growing() const {
    if (level_constants.size() < 2) return false;
    for (std::size_t i = 1; i < level_constants.size(); ++i)
        if (level_constants[i] <= level_constants[i - 1]) return false;
    return true;
}

namespace {

/// One refinement level of a dissipative-zone scan: log-spaced lambdas in
/// (lambda_min, N], log-spaced times in [0, t_xi]; per cell the four entry
/// ratios |E_ik| * decay_factor / pattern_ik are reduced to a max with
/// witness.
template <class DecayFactor, class Pattern>
std::pair<double, BoundWitness> scan_level(const CoefficientModel& coeff,
                                           double zone_n, double lambda_min,
                                           int lambda_points, int t_points,
                                           double ode_tol, int threads,
                                           DecayFactor decay_factor, Pattern pattern) {
    std::vector<double> lambdas(lambda_points);
    for (int i = 0; i < lambda_points; ++i)
        lambdas[i] = std::exp(std::log(lambda_min) +
                              (std::log(zone_n) - std::log(lambda_min)) * i /
                                  double(lambda_points - 1));

    std::vector<std::pair<double, BoundWitness>> per_lambda(lambdas.size());
    parallel_for(lambdas.size(), threads, [&](std::size_t li) {
        const double lam = lambdas[li];
        const double t_edge = t_xi(lam, zone_n);
        double best = 0.0;
        BoundWitness witness;
        FundamentalSolver solver(coeff, lam, 0.0, ode_tol);
        for (int k = 0; k < t_points; ++k) {
            const double t =
                (1.0 + 0.0) * std::pow(1.0 + t_edge, k / double(t_points - 1)) - 1.0;
            const Mat2 fund = solver.advance_to(t);
            const double factor = decay_factor(t);
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    const double ratio =
                        std::abs(fund(r, c)) * factor / pattern(lam, r, c);
                    if (ratio > best) {
                        best = ratio;
                        witness = BoundWitness{lam, t, r, c, ratio};
                    }
                }
        }
        per_lambda[li] = {best, witness};
    });

    double best = 0.0;
    BoundWitness witness;
    for (const auto& [value, w] : per_lambda)
        if (value > best) {
            best = value;
            witness = w;
        }
    return {best, witness};
}

double scan_lambda_min(const SpectralModel& model, double zone_n,
                       const ZoneScanParams& params) {
    double lo = params.lambda_min > 0.0 ? params.lambda_min
                                        : model.min_positive_lambda();
    return std::min(lo, 0.5 * zone_n);
}

}  // namespace

ZoneBoundReport check_diss_bound_c1(const CoefficientModel& coeff,
                                    const SpectralModel& model, const Regime& regime,
                                    double gamma, double zone_n,
                                    const ZoneScanParams& params) {
    if (regime.tag != RegimeTag::C1 && regime.tag != RegimeTag::Integrable)
        throw RegimeError("check_diss_bound_c1: needs case (C1) (or integrable b)");
    if (gamma < 0.0) throw ArgumentError("check_diss_bound_c1: gamma must be >= 0");

    ZoneBoundReport report;
    report.gamma = gamma;
    report.zone_n = zone_n;

    // Admissibility of this gamma: Lambda^gamma lambda^2(t_xi) bounded
    // along the scanned lambdas (advisory; the scan itself still runs).
    {
        const double lam_hi = zone_n;
        const double lam_lo = scan_lambda_min(model, zone_n, params) /
                              std::pow(2.0, params.levels - 1);
        const double f_hi =
            std::pow(lam_hi, gamma) *
            std::exp(2.0 * primitive_at(coeff, t_xi(lam_hi, zone_n)));
        const double f_lo =
            std::pow(lam_lo, gamma) *
            std::exp(2.0 * primitive_at(coeff, t_xi(lam_lo, zone_n)));
        report.gamma_admissible = f_lo <= 4.0 * std::max(f_hi, 1.0);
    }

    auto decay = [&coeff](double t) { return std::exp(2.0 * primitive_at(coeff, t)); };
    auto pattern = [gamma](double lam, int, int c) {
        return c == 0 ? std::pow(lam, -gamma) : 1.0;
    };
    double lambda_min = scan_lambda_min(model, zone_n, params);
    int nl = params.lambda_points, nt = params.t_points;
    for (int level = 0; level < params.levels; ++level) {
        auto [value, witness] = scan_level(coeff, zone_n, lambda_min, nl, nt,
                                           params.ode_tol, params.threads, decay, pattern);
        report.level_constants.push_back(value);
        report.level_witnesses.push_back(witness);
        report.level_lambda_min.push_back(lambda_min);
        lambda_min *= 0.5;
        nl *= 2;
        nt *= 2;
    }
    return report;
}

ZoneBoundReport check_diss_bound_c2(const CoefficientModel& coeff,
                                    const SpectralModel& model, const Regime& regime,
                                    double zone_n, const ZoneScanParams& params) {
    if (regime.tag != RegimeTag::C2)
        throw RegimeError("check_diss_bound_c2: needs case (C2)");

    ZoneBoundReport report;
    report.gamma = 1.0;
    report.zone_n = zone_n;

    auto decay = [](double t) { return 1.0 + t; };
    auto pattern = [](double lam, int, int c) { return c == 0 ? 1.0 / lam : 1.0; };
    double lambda_min = scan_lambda_min(model, zone_n, params);
    int nl = params.lambda_points, nt = params.t_points;
    for (int level = 0; level < params.levels; ++level) {
        auto [value, witness] = scan_level(coeff, zone_n, lambda_min, nl, nt,
                                           params.ode_tol, params.threads, decay, pattern);
        report.level_constants.push_back(value);
        report.level_witnesses.push_back(witness);
        report.level_lambda_min.push_back(lambda_min);
        lambda_min *= 0.5;
        nl *= 2;
        nt *= 2;
    }
    return report;
}

std::pair<Complex, Complex> volterra_solve_diss(const CoefficientModel& coeff,
                                                double lambda, const Vec2& eta, double t,
                                                int kmax, double tol, int grid_points) {
    if (!(lambda >= 0.0)) throw ArgumentError("volterra_solve_diss: lambda must be >= 0");
    if (t < 0.0) throw ArgumentError("volterra_solve_diss: t must be >= 0");
    if (grid_points < 5) throw ArgumentError("volterra_solve_diss: grid too coarse");
    if (t == 0.0) return {eta(0), eta(1)};

    const int n = grid_points;
    const double h = t / (n - 1);

    // lambda^2 on the grid from one cumulative quadrature of b.
    std::vector<double> bvals(n), lam2(n), inv_lam2(n);
    for (int i = 0; i < n; ++i) bvals[i] = coeff.b(i * h);
    const std::vector<double> prim = cumulative_integral(bvals, h);
    for (int i = 0; i < n; ++i) {
        lam2[i] = std::exp(2.0 * prim[i]);
        inv_lam2[i] = 1.0 / lam2[i];
    }

    std::vector<double> v(n, eta(0)), w(n);
    for (int i = 0; i < n; ++i) w[i] = eta(1) * inv_lam2[i];

    double change = 0.0;
    for (int k = 0; k < kmax; ++k) {
        const std::vector<double> int_w = cumulative_integral(w, h);
        std::vector<double> lam2_v(n);
        for (int i = 0; i < n; ++i) lam2_v[i] = lam2[i] * v[i];
        const std::vector<double> int_lv = cumulative_integral(lam2_v, h);

        change = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v_new = eta(0) + lambda * int_w[i];
            const double w_new = (eta(1) - lambda * int_lv[i]) * inv_lam2[i];
            change = std::max({change, std::abs(v_new - v[i]), std::abs(w_new - w[i])});
            v[i] = v_new;
            w[i] = w_new;
        }
        if (change < tol) return {v[n - 1], w[n - 1]};
    }
    throw SeriesDivergenceError(
        "volterra_solve_diss: Picard iteration did not converge within kmax=" +
            std::to_string(kmax) + " (last change " + std::to_string(change) +
            "); is (t, xi) inside the dissipative zone?",
        change);
}

}  // namespace wavescat
