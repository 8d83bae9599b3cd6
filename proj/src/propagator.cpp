#include "wavescat/propagator.hpp"

#include <cmath>
#include <string>

#include "wavescat/errors.hpp"
#include "wavescat/parallel.hpp"

namespace wavescat {

namespace {

OdeOptions fundamental_options(double lambda, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("integration tolerance must be > 0");
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = 1e-3 * tol;
    // Resolve the lambda-oscillation: at most one radian per step.
    opt.max_step = 1.0 / std::max(lambda, 1.0);
    return opt;
}

}  // namespace

Mat2 free_propagator(double lambda, double t) {
    const double c = std::cos(lambda * t);
    const double s = std::sin(lambda * t);
    Mat2 m;
    m << c, s, -s, c;
    return m;
}

Mat2 FundamentalSolver::Rhs::operator()(double t, const Mat2& v) const {
    const double bt = coeff->b(t);
    Mat2 out;
    out.row(0) = lambda * v.row(1);
    out.row(1) = -lambda * v.row(0) - 2.0 * bt * v.row(1);
    return out;
}

FundamentalSolver::FundamentalSolver(const CoefficientModel& coeff, double lambda,
                                     double s, double tol)
    : solver_(Rhs{&coeff, lambda}, s, Mat2::Identity(), fundamental_options(lambda, tol)) {
    if (s < 0.0) throw ArgumentError("fundamental solution start time must be >= 0");
    if (lambda < 0.0) throw ArgumentError("lambda must be >= 0");
}

const Mat2& FundamentalSolver::advance_to(double t) {
    if (t < solver_.time()) throw ArgumentError("fundamental solver cannot go backwards");
    solver_.advance_to(t);
    return solver_.state();
}

double FundamentalSolver::time() const { return solver_.time(); }
const OdeStats& FundamentalSolver::stats() const { return solver_.stats(); }

Mat2 integrate_fundamental(const CoefficientModel& coeff, double lambda, double s,
                           double t, double tol, OdeStats* stats) {
    if (t < s) throw ArgumentError("integrate_fundamental: t < s");
    FundamentalSolver solver(coeff, lambda, s, tol);
    const Mat2& result = solver.advance_to(t);
    if (stats) *stats = solver.stats();
    return result;
}

std::pair<Complex, Complex> kernel_mode_solution(const CoefficientModel& coeff,
                                                 Complex u1, Complex u2, double t,
                                                 double quad_rtol) {
    if (t < 0.0) throw ArgumentError("kernel_mode_solution: t must be >= 0");
    const double lam2 = std::exp(2.0 * primitive_at(coeff, t, quad_rtol));
    double decay_integral = 0.0;
    if (t > 0.0 && u2 != Complex(0.0)) {
        QuadratureOptions opt;
        opt.rtol = quad_rtol;
        decay_integral = integrate(
            [&coeff, quad_rtol](double tau) {
                return std::exp(-2.0 * primitive_at(coeff, tau, quad_rtol));
            },
            0.0, t, opt);
    }
    return {u1 + u2 * decay_integral, u2 / lam2};
}

Trajectory evolve(const SpectralModel& model, const CoefficientModel& coeff,
                  const DataVector& data, const std::vector<double>& times, double tol,
                  int threads) {
    if (data.u1.size() != model.size() || data.u2.size() != model.size())
        throw ArgumentError("evolve: data not aligned with the spectral model");
    if (times.empty()) throw ArgumentError("evolve: empty time list");
    if (times.front() < 0.0) throw ArgumentError("evolve: times must start >= 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw ArgumentError("evolve: times must be strictly increasing");

    Trajectory traj;
    traj.times = times;
    traj.states.assign(times.size(), DataVector::zero(model.size()));
    traj.lambda_values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        traj.lambda_values[i] = lambda_at(coeff, times[i]);

    const DataVector v0 = to_v_representation(model, data);
    parallel_for(model.size(), threads, [&](std::size_t j) {
        const auto& p = model.points[j];
        const Vec2C init(v0.u1[j], v0.u2[j]);
        if (init.isZero()) return;  // zero data stays zero exactly
        try {
            if (p.is_kernel) {
                for (std::size_t i = 0; i < times.size(); ++i) {
                    auto [u, du] = kernel_mode_solution(coeff, data.u1[j], data.u2[j],
                                                        times[i]);
                    traj.states[i].u1[j] = 0.0;  // Lambda * u = 0 on the kernel
                    traj.states[i].u2[j] = du;
                }
                return;
            }
            FundamentalSolver solver(coeff, p.lambda, 0.0, tol);
            for (std::size_t i = 0; i < times.size(); ++i) {
                const Mat2& fund = solver.advance_to(times[i]);
                const Vec2C v = fund.cast<Complex>() * init;
                traj.states[i].u1[j] = v(0);
                traj.states[i].u2[j] = v(1);
            }
        } catch (const NumericalError& e) {
            throw NumericalError("mode " + std::to_string(j) +
                                     " (lambda=" + std::to_string(p.lambda) +
                                     "): " + e.what(),
                                 e.achieved_tolerance);
        }
    });
    return traj;
}

}  // namespace wavescat
