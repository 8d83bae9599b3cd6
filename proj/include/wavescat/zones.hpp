#pragma once

#include <utility>
#include <vector>

#include "wavescat/coefficients.hpp"
#include "wavescat/matrix.hpp"
#include "wavescat/spectral.hpp"

namespace wavescat {

/// Zone partition of the extended phase space by Lambda(xi)(1+t) vs N.
struct ZonePartition {
    double zone_n = 1.0;
};

/// Boundary time t_xi with Lambda(xi)(1+t_xi) = N, clamped at 0:
/// max(N/lambda - 1, 0). Kernel modes (lambda = 0) never leave the
/// dissipative zone, so lambda must be positive.
double t_xi(double lambda, double zone_n);

/// Doubles N starting from n0 until det N1 >= det_floor everywhere on a
/// sampled hyperbolic-zone grid for this coefficient/model pair.
double choose_zone_constant(const CoefficientModel& coeff, const SpectralModel& model,
                            double n0 = 1.0, double horizon = 1e4,
                            double det_floor = 0.9);

struct BoundWitness {
    double lambda = 0.0;
    double t = 0.0;
    int row = 0, col = 0;
    double ratio = 0.0;
};

/// Result of a dissipative-zone matrix-bound scan across refinement levels.
/// Constants are reported, never asserted against fixed thresholds;
/// acceptance uses refinement stability.
struct ZoneBoundReport {
    std::vector<double> level_constants;
    std::vector<BoundWitness> level_witnesses;
    std::vector<double> level_lambda_min;
    double gamma = 0.0;
    double zone_n = 1.0;
    bool gamma_admissible = true;  // C1 scans only

    /// Every refinement step changes the constant by at most this factor.
    double max_refinement_growth() const;
    bool refinement_stable(double factor = 2.0) const;
    bool strictly_growing() const;
};

struct ZoneScanParams {
    int lambda_points = 24;
    int t_points = 24;
    int levels = 3;
    /// Lower lambda edge of the level-0 scan; halved per level. 0 = derive
    /// from the model (its smallest positive lambda).
    double lambda_min = 0.0;
    double ode_tol = 1e-10;
    int threads = 1;
};

/// Sup over the sampled dissipative zone of
///   |E_{ik}(t,0,xi)| lambda^2(t) / pattern_{ik},
/// pattern = [[L^-gamma, 1], [L^-gamma, 1]]  (case C1, Volterra lemma).
ZoneBoundReport check_diss_bound_c1(const CoefficientModel& coeff,
                                    const SpectralModel& model, const Regime& regime,
                                    double gamma, double zone_n,
                                    const ZoneScanParams& params = {});

/// Same with factor (1+t) and pattern [[L^-1, 1], [L^-1, 1]] (case C2).
ZoneBoundReport check_diss_bound_c2(const CoefficientModel& coeff,
                                    const SpectralModel& model, const Regime& regime,
                                    double zone_n, const ZoneScanParams& params = {});

/// Solves the coupled Volterra system of the dissipative zone
///   v(t) = eta1 + Lambda int_0^t w,
///   w(t) = eta2/lambda^2(t) - Lambda/lambda^2(t) int_0^t lambda^2 v
/// by Picard iteration on a uniform quadrature grid. (v, w) is the column
/// of E(t,0,xi) with initial data eta in {(1,0),(0,1)}.
std::pair<Complex, Complex> volterra_solve_diss(const CoefficientModel& coeff,
                                                double lambda, const Vec2& eta, double t,
                                                int kmax = 64, double tol = 1e-12,
                                                int grid_points = 2001);

}  // namespace wavescat
