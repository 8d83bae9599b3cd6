#include "wavescat/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wavescat/errors.hpp"
#include "wavescat/ode.hpp"
#include "wavescat/parallel.hpp"
#include "wavescat/propagator.hpp"
#include "wavescat/quadrature.hpp"
#include "wavescat/zones.hpp"

namespace wavescat {

namespace {

Mat2 classical_kernel(const CoefficientModel& coeff, double lambda, double s, double t) {
    // -2b(t) E0(s-t) diag(0,1) E0(t-s)
    const double c = std::cos(lambda * (t - s));
    const double sn = std::sin(lambda * (t - s));
    Mat2 m;
    m << sn * sn, sn * c, sn * c, c * c;
    return -2.0 * coeff.b(t) * m;
}

struct ClassicalRhs {
    const CoefficientModel* coeff;
    double lambda, s;
    Mat2 operator()(double t, const Mat2& q) const {
        return classical_kernel(*coeff, lambda, s, t) * q;
    }
};

OdeOptions classical_options(double lambda, double tol) {
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = 1e-3 * tol;
    opt.max_step = 1.0 / std::max(2.0 * lambda, 1.0);
    return opt;
}

}  // namespace

Mat2 classical_q(const CoefficientModel& coeff, double lambda, double s, double t,
                 double tol) {
    if (t < s) throw ArgumentError("classical_q: t < s");
    return integrate_ode(ClassicalRhs{&coeff, lambda, s}, s, Mat2(Mat2::Identity()), t,
                         classical_options(lambda, tol));
}

Mat2 classical_q_peano_baker(const CoefficientModel& coeff, double lambda, double s,
                             double t, int kmax, int grid_points) {
    if (t < s) throw ArgumentError("classical_q_peano_baker: t < s");
    if (kmax < 1 || grid_points < 5)
        throw ArgumentError("classical_q_peano_baker: bad truncation parameters");
    if (t == s) return Mat2::Identity();
    const int n = grid_points;
    const double h = (t - s) / (n - 1);
    std::vector<Mat2> kernel(n);
    for (int i = 0; i < n; ++i) kernel[i] = classical_kernel(coeff, lambda, s, s + i * h);
    Mat2 total = Mat2::Identity();
    std::vector<Mat2> term(n, Mat2::Identity());
    for (int k = 0; k < kmax; ++k) {
        std::vector<Mat2> integrand(n);
        for (int i = 0; i < n; ++i) integrand[i] = kernel[i] * term[i];
        term = cumulative_integral(integrand, h);
        total += term[n - 1];
    }
    return total;
}

LimitResult classical_q_limit(const CoefficientModel& coeff, double lambda, double s,
                              double tol, double horizon_cap) {
    Dop853<Mat2, ClassicalRhs> solver(ClassicalRhs{&coeff, lambda, s}, s,
                                      Mat2::Identity(), classical_options(lambda, 1e-2 * tol));
    double horizon = std::max(4.0 * (1.0 + s), 16.0);
    solver.advance_to(horizon);
    Mat2 prev = solver.state();
    double diff = 0.0;
    while (horizon < horizon_cap) {
        horizon *= 2.0;
        solver.advance_to(horizon);
        diff = (solver.state() - prev).norm();
        prev = solver.state();
        if (diff < tol) return {prev, diff, horizon};
    }
    throw NumericalError("classical_q_limit: no convergence before horizon cap (needs "
                         "b integrable); achieved difference " +
                             std::to_string(diff),
                         diff);
}

double classical_q_tail_bound(const CoefficientModel& coeff, double t) {
    const double tail = tail_integral(coeff, t, std::numeric_limits<double>::infinity());
    const double full = tail_integral(coeff, 0.0, std::numeric_limits<double>::infinity());
    return 2.0 * tail * std::exp(2.0 * full);
}

namespace {

/// Direct limit lambda(T) E0(-T) E(T,0) at doubling horizons.
struct DirectLimit {
    Mat2 value;
    double last_diff;
    double horizon;
};

DirectLimit direct_wave_limit(const CoefficientModel& coeff, double lambda,
                              double start_horizon, double tol, double horizon_cap,
                              double ode_tol) {
    FundamentalSolver solver(coeff, lambda, 0.0, ode_tol);
    double horizon = start_horizon;
    auto snapshot = [&](double T) -> Mat2 {
        const Mat2& fund = solver.advance_to(T);
        return lambda_at(coeff, T) * free_propagator(lambda, -T) * fund;
    };
    Mat2 prev = snapshot(horizon);
    double diff = std::numeric_limits<double>::infinity();
    while (horizon < horizon_cap) {
        horizon *= 2.0;
        const Mat2 next = snapshot(horizon);
        diff = (next - prev).norm();
        prev = next;
        if (diff < tol) break;
    }
    return {prev, diff, horizon};
}

}  // namespace

WaveOpResult modified_wave_operator(const CoefficientModel& coeff, double lambda,
                                    double zone_n, double tol, double horizon_cap) {
    if (!(lambda > 0.0))
        throw ArgumentError("modified_wave_operator: requires lambda > 0");
    if (!(tol > 0.0)) throw ArgumentError("modified_wave_operator: tol must be > 0");

    // Path (b): assembled closed form through the zone boundary t_xi.
    const double s = lambda < zone_n ? t_xi(lambda, zone_n) : 0.0;
    const double ode_tol = std::min(1e-2 * tol, 1e-10);
    const Mat2 diss_factor = s > 0.0
                                 ? integrate_fundamental(coeff, lambda, 0.0, s, ode_tol)
                                 : Mat2(Mat2::Identity());
    const Q1Limit q_inf = q1_limit(coeff, lambda, s, tol, horizon_cap);
    const Mat2C assembled_c = lambda_at(coeff, s) *
                              complexify(free_propagator(lambda, -s)) *
                              first_diagonalizer_inverse() * q_inf.value *
                              n1(coeff, s, lambda) * first_diagonalizer() *
                              complexify(diss_factor);
    const double residue = imag_residue(assembled_c);
    const double scale = std::max(1.0, assembled_c.real().cwiseAbs().maxCoeff());
    if (residue > 1e3 * tol * scale)
        throw InconsistencyError("modified_wave_operator: assembled limit has imaginary "
                                 "residue " +
                                 std::to_string(residue));
    WaveOpResult out;
    out.w = assembled_c.real();
    out.conv_error = q_inf.conv_error + 10.0 * tol;
    out.horizon_used = q_inf.horizon_used;

    // Path (a): direct limit, cross-validation of the whole construction.
    const double direct_tol = std::max(tol, 1e-6);
    const DirectLimit direct = direct_wave_limit(coeff, lambda,
                                                 std::max(2.0 * (1.0 + s), 16.0),
                                                 direct_tol, horizon_cap, ode_tol);
    out.w_direct = direct.value;
    out.direct_conv = direct.last_diff;

    const double combined =
        8.0 * (out.conv_error + out.direct_conv) + 1e-9 * (1.0 + scale);
    if ((out.w - out.w_direct).norm() > combined)
        throw InconsistencyError(
            "modified_wave_operator: direct and assembled paths disagree by " +
            std::to_string((out.w - out.w_direct).norm()) + " (> " +
            std::to_string(combined) + ") at lambda=" + std::to_string(lambda));
    return out;
}

WaveOpResult w_minus(const CoefficientModel& coeff, double lambda, double zone_n,
                     double tol, double horizon_cap) {
    // Mirror t -> -t: with c(s) = -b(-s) = -b(s) for the even extension,
    // E(-s,0) = J0 E_c(s,0) J0 and E0(s) = J0 E0(-s) J0, J0 = diag(1,-1),
    // so W- = J0 W~+[c] J0.
    const WaveOpResult flipped =
        modified_wave_operator(negated(coeff), lambda, zone_n, tol, horizon_cap);
    Mat2 j0;
    j0 << 1.0, 0.0, 0.0, -1.0;
    WaveOpResult out = flipped;
    out.w = j0 * flipped.w * j0;
    out.w_direct = j0 * flipped.w_direct * j0;
    return out;
}

Mat2 scattering_op(const Mat2& w_plus, const Mat2& w_minus) {
    const double det = w_minus.determinant();
    if (std::abs(det) < 1e-12 * w_minus.cwiseAbs().maxCoeff())
        throw ArgumentError("scattering_op: W- is numerically singular");
    return w_plus * w_minus.inverse();
}

WaveOperatorTable build_wave_operator_table(const SpectralModel& model,
                                            const CoefficientModel& coeff,
                                            const Regime& regime, double zone_n,
                                            double tol, double horizon_cap,
                                            bool with_minus, int threads) {
    if (regime.tag == RegimeTag::Unclassified)
        throw RegimeError("wave operators need a certified regime "
                          "(Integrable, C1 or C2)");
    if (with_minus && regime.tag != RegimeTag::Integrable &&
        model.min_positive_lambda() < zone_n)
        throw RegimeError("W- needs b in L1(R) or a boundedly invertible model "
                          "(all lambda >= N)");

    WaveOperatorTable table;
    table.regime = regime.tag;
    table.gamma = regime.gamma_index;
    table.zone_n = zone_n;
    if (regime.tag == RegimeTag::Integrable)
        table.lambda_infinity = std::exp(
            tail_integral(coeff, 0.0, std::numeric_limits<double>::infinity()));

    std::vector<std::size_t> positive;
    for (std::size_t j = 0; j < model.size(); ++j)
        if (!model.points[j].is_kernel) positive.push_back(j);

    table.entries.resize(positive.size());
    parallel_for(positive.size(), threads, [&](std::size_t i) {
        const double lam = model.points[positive[i]].lambda;
        const WaveOpResult plus =
            modified_wave_operator(coeff, lam, zone_n, tol, horizon_cap);
        WaveOperatorEntry entry;
        entry.lambda = lam;
        entry.w_plus = plus.w;
        entry.conv_error = plus.conv_error;
        entry.horizon_used = plus.horizon_used;
        if (with_minus)
            entry.w_minus = w_minus(coeff, lam, zone_n, tol, horizon_cap).w;
        table.entries[i] = std::move(entry);
    });

    for (const auto& entry : table.entries)
        if (std::abs(entry.w_plus.determinant()) < 1e-10)
            throw NumericalError("wave operator at lambda=" +
                                 std::to_string(entry.lambda) +
                                 " is numerically singular (Ker W+ must be trivial)");
    return table;
}

std::vector<ResidualPoint> scattering_residual(const SpectralModel& model,
                                               const CoefficientModel& coeff,
                                               const DataVector& data,
                                               const WaveOperatorTable& table,
                                               const std::vector<double>& times,
                                               double tol, int threads) {
    if (data.u1.size() != model.size())
        throw ArgumentError("scattering_residual: data/model mismatch");
    const bool integrable = table.regime == RegimeTag::Integrable;

    // Match table entries to supported modes.
    std::vector<const WaveOperatorEntry*> entry_of_mode(model.size(), nullptr);
    for (std::size_t j = 0; j < model.size(); ++j) {
        const auto& p = model.points[j];
        const bool supported =
            data.u1[j] != Complex(0.0) || data.u2[j] != Complex(0.0);
        if (!supported) continue;
        if (p.is_kernel)
            throw DomainError("scattering_residual: data on a kernel mode has no wave "
                              "operator entry; kernel modes evolve by the exact solver");
        const WaveOperatorEntry* found = nullptr;
        for (const auto& e : table.entries)
            if (e.lambda == p.lambda) {
                found = &e;
                break;
            }
        if (!found)
            throw ArgumentError("scattering_residual: missing wave-operator entry for "
                                "lambda=" + std::to_string(p.lambda));
        entry_of_mode[j] = found;
    }

    const Trajectory traj = evolve(model, coeff, data, times, tol, threads);
    const DataVector v0 = to_v_representation(model, data);

    // Free image data (v1, v2) = W (u1, u2) per mode, in V-representation.
    DataVector free0 = DataVector::zero(model.size());
    for (std::size_t j = 0; j < model.size(); ++j) {
        if (!entry_of_mode[j]) continue;
        Mat2 w = entry_of_mode[j]->w_plus;
        if (integrable) w /= table.lambda_infinity;
        const Vec2C img = w.cast<Complex>() * Vec2C(v0.u1[j], v0.u2[j]);
        free0.u1[j] = img(0);
        free0.u2[j] = img(1);
    }
    const double energy_v = v_norm(model, free0);

    std::vector<ResidualPoint> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double t = times[i];
        const double lam_t = traj.lambda_values[i];
        const double factor = integrable ? 1.0 : lam_t;
        double acc = 0.0;
        for (std::size_t j = 0; j < model.size(); ++j) {
            if (!entry_of_mode[j]) continue;
            const double lam = model.points[j].lambda;
            const Mat2 rot = free_propagator(lam, t);
            const Vec2C v_free = rot.cast<Complex>() * Vec2C(free0.u1[j], free0.u2[j]);
            const Vec2C diff =
                factor * Vec2C(traj.states[i].u1[j], traj.states[i].u2[j]) - v_free;
            acc += model.points[j].weight * diff.squaredNorm();
        }
        out[i] = ResidualPoint{t, lam_t, std::sqrt(acc), traj.energy(model, i), energy_v};
    }
    return out;
}

std::vector<RatioPoint> two_sided_ratio(const SpectralModel& model,
                                        const CoefficientModel& coeff,
                                        const DataVector& data,
                                        const std::vector<double>& times, double tol,
                                        int threads) {
    for (std::size_t j = 0; j < model.size(); ++j)
        if (model.points[j].is_kernel &&
            (data.u1[j] != Complex(0.0) || data.u2[j] != Complex(0.0)))
            throw DomainError("two_sided_ratio: kernel-mode data is excluded "
                              "(its energy decays like 1/lambda^2(t))");
    const Trajectory traj = evolve(model, coeff, data, times, tol, threads);
    std::vector<RatioPoint> out(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out[i] = RatioPoint{times[i], traj.lambda_values[i],
                            traj.lambda_values[i] * traj.energy(model, i)};
    return out;
}

EnergyEstimateReport energy_estimate_check(const SpectralModel& model,
                                           const CoefficientModel& coeff,
                                           const std::vector<DataVector>& data_set,
                                           double gamma, double zone_n,
                                           const std::vector<double>& times, double tol,
                                           int threads) {
    if (data_set.empty()) throw ArgumentError("energy_estimate_check: empty data set");
    EnergyEstimateReport report;
    for (std::size_t d = 0; d < data_set.size(); ++d) {
        const double denom = e_gamma_norm(model, data_set[d], gamma, zone_n);
        if (denom == 0.0) throw ArgumentError("energy_estimate_check: zero datum");
        const Trajectory traj = evolve(model, coeff, data_set[d], times, tol, threads);
        double best = 0.0;
        double best_t = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const double value =
                traj.lambda_values[i] * traj.energy(model, i) / denom;
            if (value > best) {
                best = value;
                best_t = times[i];
            }
        }
        report.per_datum_constant.push_back(best);
        if (best > report.constant) {
            report.constant = best;
            report.witness_time = best_t;
            report.witness_datum = d;
        }
    }
    return report;
}

}  // namespace wavescat
