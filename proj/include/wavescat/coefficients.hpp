#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavescat/quadrature.hpp"

namespace wavescat {

/// A dissipation coefficient b(t) on [0, inf) together with its derivative,
/// an optional closed-form primitive B(t) = int_0^t b, and declared regime
/// metadata. Immutable after construction; all operations are pure.
struct CoefficientModel {
    std::string label;
    std::function<double(double)> b;
    std::function<double(double)> b_prime;
    /// Closed-form primitive B(t); empty when only quadrature is available.
    std::function<double(double)> primitive;
    /// Declared limsup / liminf of t*b(t). Asymptotics cannot be inferred
    /// from finite samples, so these are authoritative; sampling only
    /// falsifies them.
    std::optional<double> mu_upper;
    std::optional<double> mu_lower;
    /// Constants of the derivative bounds b(t)<t> <= c1, |b'(t)|<t>^2 <= c2.
    std::optional<double> c1;
    std::optional<double> c2;
    /// Declared integrability of b over [0, inf).
    std::optional<bool> tail_finite;

    bool has_primitive() const { return static_cast<bool>(primitive); }
};

enum class RegimeTag { Integrable, C1, C2, Unclassified };

std::string to_string(RegimeTag tag);

struct Regime {
    RegimeTag tag = RegimeTag::Unclassified;
    /// gamma of the modified energy space E^(gamma) for this regime.
    double gamma_index = 0.0;
    /// The mu_upper_plus actually used (any number > mu_upper).
    double mu_upper_plus = 0.0;
    /// C1 only: whether the convenient choice gamma = 2*mu_upper keeps
    /// Lambda^gamma lambda^2(t_xi) bounded as lambda -> 0.
    bool gamma_two_mu_admissible = true;
    /// Sampled sup/inf of t*b(t) over the tail grid (diagnostics).
    double sampled_sup_tb = 0.0;
    double sampled_inf_tb = 0.0;
};

/// lambda(t) = exp(int_0^t b). Uses the closed-form primitive when present,
/// otherwise adaptive quadrature at relative tolerance quad_rtol.
double lambda_at(const CoefficientModel& coeff, double t, double quad_rtol = 1e-10);

/// B(t) = int_0^t b (log of lambda_at).
double primitive_at(const CoefficientModel& coeff, double t, double quad_rtol = 1e-10);

/// int_t^horizon b; horizon may be +infinity.
double tail_integral(const CoefficientModel& coeff, double t, double horizon,
                     double quad_rtol = 1e-10);

/// Validates the declared regime against sampled values of t*b(t) on the
/// tail [horizon/10, horizon] and returns the certified regime. Never
/// upgrades an undeclared coefficient past Unclassified.
Regime classify(const CoefficientModel& coeff, double horizon = 1e4,
                int grid_size = 200,
                std::optional<double> mu_upper_plus_override = std::nullopt);

// Built-in coefficient library.
CoefficientModel zero_coefficient();
CoefficientModel power_law(double p);       // b(t) = (1+t)^-p
CoefficientModel mu_over_1pt(double mu);    // b(t) = mu/(1+t)
CoefficientModel iterated_log(double mu, int n);
CoefficientModel footnote_counterexample(); // b = 1/(4(e+t)) + 1/((e+t)log(e+t))

/// Internal helper for time reversal: t -> -b(t) with mirrored metadata.
CoefficientModel negated(const CoefficientModel& coeff);

/// Tabulated coefficient from (t, b, b') samples, monotone cubic (PCHIP)
/// interpolation; the primitive is the exact integral of the interpolant.
CoefficientModel tabulated_coefficient(std::vector<double> t, std::vector<double> b,
                                       std::vector<double> b_prime,
                                       std::string label = "tabulated");

}  // namespace wavescat
