#pragma once

#include <utility>
#include <vector>

#include "wavescat/coefficients.hpp"
#include "wavescat/matrix.hpp"
#include "wavescat/ode.hpp"
#include "wavescat/spectral.hpp"

namespace wavescat {

/// Free propagator E0(t) at frequency lambda:
/// [[cos(lt), sin(lt)], [-sin(lt), cos(lt)]]; orthogonal, det = 1.
Mat2 free_propagator(double lambda, double t);

/// Fundamental solution E(t,s,xi) of
///   d/dt (Lambda u, u') = [[0, Lambda], [-Lambda, -2b(t)]] (Lambda u, u'),
/// E(s,s) = I, integrated column-jointly as a matrix ODE with an
/// oscillation-aware step cap.
Mat2 integrate_fundamental(const CoefficientModel& coeff, double lambda, double s,
                           double t, double tol = 1e-10, OdeStats* stats = nullptr);

/// Continuation form for evaluating E(t_k, s) at increasing times t_k.
class FundamentalSolver {
public:
    FundamentalSolver(const CoefficientModel& coeff, double lambda, double s,
                      double tol = 1e-10);
    /// Advance to time t >= current time and return E(t, s, xi).
    const Mat2& advance_to(double t);
    double time() const;
    const OdeStats& stats() const;

private:
    struct Rhs {
        const CoefficientModel* coeff;
        double lambda;
        Mat2 operator()(double t, const Mat2& v) const;
    };
    Dop853<Mat2, Rhs> solver_;
};

/// Exact solution of u'' + 2b(t)u' = 0 for a kernel mode (lambda = 0):
/// returns (u(t), u'(t)) = (u1 + u2 int_0^t lambda^-2, u2 / lambda^2(t)).
std::pair<Complex, Complex> kernel_mode_solution(const CoefficientModel& coeff,
                                                 Complex u1, Complex u2, double t,
                                                 double quad_rtol = 1e-12);

/// Per-mode states along a time list, stored in V-representation.
struct Trajectory {
    std::vector<double> times;
    std::vector<DataVector> states;  // V = (Lambda u, u') per time
    std::vector<double> lambda_values;

    /// ||(u,u')||_E at time index i.
    double energy(const SpectralModel& model, std::size_t i) const {
        return v_norm(model, states.at(i));
    }
};

/// Evolve Cauchy data under E(t,0,xi) mode by mode; kernel modes use the
/// exact solver. Times must be increasing and start >= 0.
Trajectory evolve(const SpectralModel& model, const CoefficientModel& coeff,
                  const DataVector& data, const std::vector<double>& times,
                  double tol = 1e-10, int threads = 1);

}  // namespace wavescat
