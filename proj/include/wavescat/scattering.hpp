#pragma once

#include <optional>
#include <vector>

#include "wavescat/coefficients.hpp"
#include "wavescat/diagonal.hpp"
#include "wavescat/matrix.hpp"
#include "wavescat/spectral.hpp"

namespace wavescat {

/// Q(t,s,xi) = E0(s-t) E(t,s,xi), integrated from
/// dQ/dt = -2b(t) E0(s-t) diag(0,1) E0(t-s) Q, Q(s,s) = I.
Mat2 classical_q(const CoefficientModel& coeff, double lambda, double s, double t,
                 double tol = 1e-10);

/// Truncated Peano-Baker series oracle for the classical Q dynamics.
Mat2 classical_q_peano_baker(const CoefficientModel& coeff, double lambda, double s,
                             double t, int kmax, int grid_points = 2001);

struct LimitResult {
    Mat2 value;
    double conv_error = 0.0;
    double horizon_used = 0.0;
};

/// Q(inf, s, xi) by doubling horizons with Cauchy stopping (needs b in L1).
LimitResult classical_q_limit(const CoefficientModel& coeff, double lambda, double s,
                              double tol = 1e-8, double horizon_cap = 1e6);

/// Series bound |||Q(inf,t) - I||| <= 2 int_t^inf b * exp(2 int_0^inf b).
double classical_q_tail_bound(const CoefficientModel& coeff, double t);

struct WaveOpResult {
    Mat2 w;                    // limit matrix (assembled path)
    double conv_error = 0.0;   // conservative error estimate for w
    double horizon_used = 0.0; // horizon of the q1 limit
    Mat2 w_direct;             // direct-limit cross check
    double direct_conv = 0.0;  // its last Cauchy difference
};

/// Modified wave operator W~+(xi) = lim lambda(t) E0(-t) E(t,0,xi), computed
/// by BOTH paths: (a) the direct limit at doubling horizons, (b) the
/// assembled closed form lambda(t_xi) E0(-t_xi) M^-1 Q1(inf,t_xi) N1(t_xi) M
/// E(t_xi,0). Path (b) is returned after cross-validation against (a).
WaveOpResult modified_wave_operator(const CoefficientModel& coeff, double lambda,
                                    double zone_n, double tol = 1e-8,
                                    double horizon_cap = 1e6);

/// W-: reverse-time wave operator, realized by running the forward machinery
/// on the mirrored coefficient -b(-t) (even extension of b) and conjugating
/// with diag(1,-1).
WaveOpResult w_minus(const CoefficientModel& coeff, double lambda, double zone_n,
                     double tol = 1e-8, double horizon_cap = 1e6);

/// Scattering operator S = W+ W-^{-1}.
Mat2 scattering_op(const Mat2& w_plus, const Mat2& w_minus);

struct WaveOperatorEntry {
    double lambda = 0.0;
    Mat2 w_plus;
    double conv_error = 0.0;
    double horizon_used = 0.0;
    std::optional<Mat2> w_minus;
};

struct WaveOperatorTable {
    std::vector<WaveOperatorEntry> entries;  // positive modes only
    RegimeTag regime = RegimeTag::Unclassified;
    double gamma = 0.0;
    double zone_n = 1.0;
    /// lambda(inf) for the integrable regime (Theorem-1 normalization).
    double lambda_infinity = 1.0;
};

/// Wave operators per positive mode of the model (kernel modes are skipped).
WaveOperatorTable build_wave_operator_table(const SpectralModel& model,
                                            const CoefficientModel& coeff,
                                            const Regime& regime, double zone_n,
                                            double tol = 1e-8, double horizon_cap = 1e6,
                                            bool with_minus = false, int threads = 1);

struct ResidualPoint {
    double t = 0.0;
    double lambda_t = 0.0;
    double residual = 0.0;
    double energy_u = 0.0;
    double energy_v = 0.0;
};

/// || lambda(t) (u,u') - (v,v') ||_E with (v1,v2) = W+ (u1,u2); the lambda(t)
/// factor is dropped (and W rescaled by 1/lambda(inf)) in the integrable
/// regime, following the classical normalization.
std::vector<ResidualPoint> scattering_residual(const SpectralModel& model,
                                               const CoefficientModel& coeff,
                                               const DataVector& data,
                                               const WaveOperatorTable& table,
                                               const std::vector<double>& times,
                                               double tol = 1e-10, int threads = 1);

struct RatioPoint {
    double t = 0.0;
    double lambda_t = 0.0;
    double value = 0.0;  // lambda(t) * ||(u,u')||_E
};

/// The two-sided product lambda(t) ||(u,u')||_E along a time sweep; data
/// must vanish on kernel modes.
std::vector<RatioPoint> two_sided_ratio(const SpectralModel& model,
                                        const CoefficientModel& coeff,
                                        const DataVector& data,
                                        const std::vector<double>& times,
                                        double tol = 1e-10, int threads = 1);

struct EnergyEstimateReport {
    double constant = 0.0;  // sup over data and times of lambda(t) E(t) / ||data||_{E^(g)}
    double witness_time = 0.0;
    std::size_t witness_datum = 0;
    std::vector<double> per_datum_constant;
};

/// sup over a data set and times of lambda(t) ||(u,u')||_E / ||data||_{E^(gamma)}.
EnergyEstimateReport energy_estimate_check(const SpectralModel& model,
                                           const CoefficientModel& coeff,
                                           const std::vector<DataVector>& data_set,
                                           double gamma, double zone_n,
                                           const std::vector<double>& times,
                                           double tol = 1e-10, int threads = 1);

}  // namespace wavescat
