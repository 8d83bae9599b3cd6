#include "wavescat/diagonal.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "wavescat/errors.hpp"
#include "wavescat/quadrature.hpp"

namespace wavescat {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_positive_lambda(double lambda, const char* who) {
    if (!(lambda > 0.0))
        throw ArgumentError(std::string(who) + ": requires lambda > 0");
}

double require_invertible(const CoefficientModel& coeff, double t, double lambda) {
    const double det = det_n1(coeff, t, lambda);
    if (det <= 0.0)
        throw ZoneConstantError(
            "det N1 = " + std::to_string(det) + " <= 0 at t=" + std::to_string(t) +
            ", lambda=" + std::to_string(lambda) + "; the zone constant is too small");
    return det;
}

}  // namespace

Mat2C first_diagonalizer() {
    Mat2C m;
    m << kI, -kI, 1.0, 1.0;
    return m;
}

Mat2C first_diagonalizer_inverse() {
    Mat2C m;
    m << -kI, 1.0, kI, 1.0;
    return 0.5 * m;
}

Mat2C n_one_step(const CoefficientModel& coeff, double t, double lambda) {
    require_positive_lambda(lambda, "n_one_step");
    const double beta = coeff.b(t) / (2.0 * lambda);
    Mat2C m;
    m << 0.0, -kI * beta, kI * beta, 0.0;
    return m;
}

Mat2C n1(const CoefficientModel& coeff, double t, double lambda) {
    return Mat2C::Identity() - n_one_step(coeff, t, lambda);
}

double det_n1(const CoefficientModel& coeff, double t, double lambda) {
    require_positive_lambda(lambda, "det_n1");
    const double beta = coeff.b(t) / (2.0 * lambda);
    return 1.0 - beta * beta;
}

Mat2C n1_inverse(const CoefficientModel& coeff, double t, double lambda) {
    const double det = require_invertible(coeff, t, lambda);
    const double beta = coeff.b(t) / (2.0 * lambda);
    Mat2C m;
    m << 1.0, -kI * beta, kI * beta, 1.0;
    return m / det;
}

Mat2C r1(const CoefficientModel& coeff, double t, double lambda) {
    const double det = require_invertible(coeff, t, lambda);
    const double b = coeff.b(t);
    const double beta = b / (2.0 * lambda);
    const double delta = (coeff.b_prime(t) + b * b) / (2.0 * lambda);
    // -N1^{-1} B^(1) with B^(1) = dN^(1)/dt + b N^(1), in closed form.
    Mat2C m;
    m << beta * delta, -kI * delta, kI * delta, beta * delta;
    return -m / det;
}

double r1_norm(const CoefficientModel& coeff, double t, double lambda) {
    return spectral_norm(r1(coeff, t, lambda));
}

Mat2C e0_tilde(double lambda, double t_minus_s) {
    const Complex phase = std::exp(-kI * lambda * t_minus_s);
    Mat2C m = Mat2C::Zero();
    m(0, 0) = phase;
    m(1, 1) = std::conj(phase);
    return m;
}

namespace {

Mat2C conjugated_r1(const CoefficientModel& coeff, double lambda, double s, double t) {
    // E0~(s,t) R1(t) E0~(t,s): phases act on the off-diagonal only.
    Mat2C r = r1(coeff, t, lambda);
    const Complex rot = std::exp(2.0 * kI * lambda * (t - s));
    r(0, 1) *= rot;
    r(1, 0) *= std::conj(rot);
    return r;
}

OdeOptions q1_options(double lambda, double tol) {
    if (!(tol > 0.0)) throw ArgumentError("q1: tolerance must be > 0");
    OdeOptions opt;
    opt.rtol = tol;
    opt.atol = 1e-3 * tol;
    opt.max_step = 1.0 / std::max(2.0 * lambda, 1.0);
    return opt;
}

}  // namespace

Mat2C Q1Solver::Rhs::operator()(double t, const Mat2C& q) const {
    return conjugated_r1(*coeff, lambda, s, t) * q;
}

Q1Solver::Q1Solver(const CoefficientModel& coeff, double lambda, double s, double tol)
    : solver_(Rhs{&coeff, lambda, s}, s, Mat2C::Identity(), q1_options(lambda, tol)) {
    require_positive_lambda(lambda, "q1");
}

const Mat2C& Q1Solver::advance_to(double t) {
    if (t < solver_.time()) throw ArgumentError("q1 solver cannot go backwards");
    solver_.advance_to(t);
    return solver_.state();
}

double Q1Solver::time() const { return solver_.time(); }
const OdeStats& Q1Solver::stats() const { return solver_.stats(); }

Mat2C q1(const CoefficientModel& coeff, double lambda, double s, double t, double tol,
         OdeStats* stats) {
    if (t < s) throw ArgumentError("q1: t < s");
    Q1Solver solver(coeff, lambda, s, tol);
    Mat2C out = solver.advance_to(t);
    if (stats) *stats = solver.stats();
    return out;
}

Mat2C q1_peano_baker(const CoefficientModel& coeff, double lambda, double s, double t,
                     int kmax, int grid_points) {
    require_positive_lambda(lambda, "q1_peano_baker");
    if (t < s) throw ArgumentError("q1_peano_baker: t < s");
    if (kmax < 1) throw ArgumentError("q1_peano_baker: kmax must be >= 1");
    if (grid_points < 5) throw ArgumentError("q1_peano_baker: grid too coarse");
    if (t == s) return Mat2C::Identity();

    const int n = grid_points;
    const double h = (t - s) / (n - 1);
    std::vector<Mat2C> kernel(n);
    for (int i = 0; i < n; ++i) kernel[i] = conjugated_r1(coeff, lambda, s, s + i * h);

    Mat2C total = Mat2C::Identity();
    std::vector<Mat2C> term(n, Mat2C::Identity());
    for (int k = 0; k < kmax; ++k) {
        std::vector<Mat2C> integrand(n);
        for (int i = 0; i < n; ++i) integrand[i] = kernel[i] * term[i];
        term = cumulative_integral(integrand, h);
        total += term[n - 1];
    }
    return total;
}

Q1Limit q1_limit(const CoefficientModel& coeff, double lambda, double s, double tol,
                 double horizon_cap) {
    require_positive_lambda(lambda, "q1_limit");
    if (!(tol > 0.0)) throw ArgumentError("q1_limit: tolerance must be > 0");

    Q1Solver solver(coeff, lambda, s, 1e-2 * tol);
    double horizon = std::max(4.0 * (1.0 + s), 16.0);
    Mat2C prev = solver.advance_to(horizon);
    double diff = 0.0;
    bool converged = false;
    while (horizon < horizon_cap) {
        horizon *= 2.0;
        Mat2C next = solver.advance_to(horizon);
        diff = frobenius_norm(Mat2C(next - prev));
        prev = next;
        if (diff < tol) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw NumericalError("q1_limit: no convergence before horizon cap " +
                                 std::to_string(horizon_cap) + " (achieved difference " +
                                 std::to_string(diff) + ")",
                             diff);

    // (2.30)-type model estimate: int_T^inf ||R1|| * exp(int_s^T ||R1||).
    QuadratureOptions qopt;
    qopt.rtol = 1e-6;
    qopt.atol = 1e-14;
    auto norm_r1 = [&](double tau) { return r1_norm(coeff, tau, lambda); };
    const double tail = integrate_to_infinity(norm_r1, horizon, qopt, horizon);
    const double grown = std::exp(integrate(norm_r1, s, horizon, qopt));

    Q1Limit out;
    out.value = prev;
    out.conv_error = std::max(diff, tail * grown);
    out.horizon_used = horizon;
    if (std::abs(out.value.determinant()) < 1e-8)
        throw NumericalError("q1_limit: limit matrix is numerically singular");
    return out;
}

Mat2 hyperbolic_representation(const CoefficientModel& coeff, double lambda, double s,
                               double t, double tol, double* im_residue_out) {
    require_positive_lambda(lambda, "hyperbolic_representation");
    if (t < s) throw ArgumentError("hyperbolic_representation: t < s");
    const double lam_ratio = std::exp(primitive_at(coeff, s) - primitive_at(coeff, t));
    const Mat2C q = q1(coeff, lambda, s, t, std::min(1e-2 * tol, 1e-10));
    const Mat2C product = lam_ratio * first_diagonalizer_inverse() *
                          n1_inverse(coeff, t, lambda) * e0_tilde(lambda, t - s) * q *
                          n1(coeff, s, lambda) * first_diagonalizer();
    const double residue = imag_residue(product);
    if (im_residue_out) *im_residue_out = residue;
    const double scale = std::max(1.0, product.real().cwiseAbs().maxCoeff());
    if (residue > tol * scale)
        throw InconsistencyError(
            "hyperbolic representation has imaginary residue " + std::to_string(residue) +
            " beyond tolerance; zone constant too small or tolerance too loose");
    return product.real();
}

}  // namespace wavescat
