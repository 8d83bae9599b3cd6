#pragma once

#include "wavescat/coefficients.hpp"
#include "wavescat/matrix.hpp"
#include "wavescat/ode.hpp"

namespace wavescat {

/// First-step diagonalizer M = [[i, -i], [1, 1]] and its inverse
/// M^{-1} = (1/2) [[-i, 1], [i, 1]]. M/sqrt(2) is unitary.
Mat2C first_diagonalizer();
Mat2C first_diagonalizer_inverse();

/// N^(1)(t,xi) = i [[0, -b/(2 Lambda)], [b/(2 Lambda), 0]].
Mat2C n_one_step(const CoefficientModel& coeff, double t, double lambda);

/// N1 = I - N^(1).
Mat2C n1(const CoefficientModel& coeff, double t, double lambda);

/// det N1 = 1 - b^2(t) / (4 lambda^2); must stay > 0 on the hyperbolic zone.
double det_n1(const CoefficientModel& coeff, double t, double lambda);

/// N1^{-1}; throws ZoneConstantError when det N1 <= 0.
Mat2C n1_inverse(const CoefficientModel& coeff, double t, double lambda);

/// Remainder R1 = -N1^{-1} (d/dt N^(1) + b N^(1)); satisfies
/// ||R1|| <~ 1 / (Lambda (1+t)^2) under (A2).
Mat2C r1(const CoefficientModel& coeff, double t, double lambda);

/// Spectral norm of R1 (used for the Peano-Baker tail estimates).
double r1_norm(const CoefficientModel& coeff, double t, double lambda);

/// Diagonal phase matrix E0~(t,s) = diag(e^{-i lambda (t-s)}, e^{+i ...}).
Mat2C e0_tilde(double lambda, double t_minus_s);

/// Q1(t,s,xi): solution of dQ/dt = R(t,s) Q, Q(s,s) = I with
/// R(t,s) = E0~(s,t) R1(t) E0~(t,s), by adaptive integration.
Mat2C q1(const CoefficientModel& coeff, double lambda, double s, double t,
         double tol = 1e-10, OdeStats* stats = nullptr);

/// Truncated Peano-Baker series for Q1 (kmax nested integrals on a uniform
/// grid); independent low-order oracle for the ODE path.
Mat2C q1_peano_baker(const CoefficientModel& coeff, double lambda, double s, double t,
                     int kmax, int grid_points = 2001);

/// Continuation solver for Q1(t, s) at increasing t.
class Q1Solver {
public:
    Q1Solver(const CoefficientModel& coeff, double lambda, double s,
             double tol = 1e-10);
    const Mat2C& advance_to(double t);
    double time() const;
    const OdeStats& stats() const;

private:
    struct Rhs {
        const CoefficientModel* coeff;
        double lambda, s;
        Mat2C operator()(double t, const Mat2C& q) const;
    };
    Dop853<Mat2C, Rhs> solver_;
};

struct Q1Limit {
    Mat2C value;
    double conv_error = 0.0;  // max(last Cauchy difference, (2.30)-type model estimate)
    double horizon_used = 0.0;
};

/// Q1(inf, s, xi) by doubling horizons with Cauchy stopping. The returned
/// matrix is checked to be invertible.
Q1Limit q1_limit(const CoefficientModel& coeff, double lambda, double s,
                 double tol = 1e-8, double horizon_cap = 1e6);

/// Lemma-style representation
///   E(t,s,xi) = (lambda(s)/lambda(t)) M^{-1} N1^{-1}(t) E0~(t,s) Q1(t,s) N1(s) M
/// valid for (s,xi) in the hyperbolic zone. The product must be real up to
/// numerical error; the imaginary residue is checked against tol (and
/// reported through im_residue_out when given).
Mat2 hyperbolic_representation(const CoefficientModel& coeff, double lambda, double s,
                               double t, double tol = 1e-8,
                               double* im_residue_out = nullptr);

}  // namespace wavescat
