#include "wavescat/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "wavescat/errors.hpp"

namespace wavescat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double japanese_bracket(double t) { return std::sqrt(1.0 + t * t); }

std::vector<double> log_spaced(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    if (n == 1) {
        out.push_back(lo);
        return out;
    }
    const double la = std::log(lo), lb = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(std::exp(la + (lb - la) * i / double(n - 1)));
    return out;
}

}  // namespace

std::string to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::Integrable: return "Integrable";
        case RegimeTag::C1: return "C1";
        case RegimeTag::C2: return "C2";
        case RegimeTag::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

double primitive_at(const CoefficientModel& coeff, double t, double quad_rtol) {
    if (t < 0.0) throw ArgumentError("primitive_at: t must be >= 0");
    if (coeff.has_primitive()) return coeff.primitive(t);
    if (t == 0.0) return 0.0;
    QuadratureOptions opt;
    opt.rtol = quad_rtol;
    return integrate(coeff.b, 0.0, t, opt);
}

double lambda_at(const CoefficientModel& coeff, double t, double quad_rtol) {
    return std::exp(primitive_at(coeff, t, quad_rtol));
}

double tail_integral(const CoefficientModel& coeff, double t, double horizon,
                     double quad_rtol) {
    if (t < 0.0) throw ArgumentError("tail_integral: t must be >= 0");
    if (horizon < t) throw ArgumentError("tail_integral: horizon < t");
    QuadratureOptions opt;
    opt.rtol = quad_rtol;
    if (std::isinf(horizon))
        return integrate_to_infinity(coeff.b, t, opt, std::max(1.0, t));
    if (coeff.has_primitive()) return coeff.primitive(horizon) - coeff.primitive(t);
    return integrate(coeff.b, t, horizon, opt);
}

namespace {

/// Boundedness probe for f(lambda) = lambda^gamma * lambda(t_xi)^2 with
/// t_xi = N/lambda - 1, N = 1: admissible iff f stays bounded as lambda -> 0.
bool gamma_condition_bounded(const CoefficientModel& coeff, double gamma) {
    double first = 0.0, last = 0.0;
    for (int k = 1; k <= 6; ++k) {
        const double lam = std::pow(10.0, -k);
        const double t_xi = 1.0 / lam - 1.0;
        const double f =
            std::pow(lam, gamma) * std::exp(2.0 * primitive_at(coeff, t_xi, 1e-9));
        if (k == 1) first = f;
        last = f;
    }
    return last <= 2.0 * first;
}

}  // namespace

Regime classify(const CoefficientModel& coeff, double horizon, int grid_size,
                std::optional<double> mu_upper_plus_override) {
    if (horizon <= 0.0) throw ArgumentError("classify: horizon must be > 0");
    if (grid_size < 2) throw ArgumentError("classify: grid_size too small");

    Regime regime;

    // (A1) sanity over the full range.
    for (double t : log_spaced(1e-3, horizon, grid_size)) {
        if (coeff.b(t) < 0.0)
            throw ValidationError("coefficient '" + coeff.label +
                                      "' violates b(t) >= 0 at t=" + std::to_string(t),
                                  t);
        if (coeff.c1 && coeff.b(t) * japanese_bracket(t) > *coeff.c1 * (1.0 + 1e-9))
            throw ValidationError("declared c1 contradicted at t=" + std::to_string(t), t);
        if (coeff.c2 && std::abs(coeff.b_prime(t)) * japanese_bracket(t) * japanese_bracket(t) >
                            *coeff.c2 * (1.0 + 1e-9))
            throw ValidationError("declared c2 contradicted at t=" + std::to_string(t), t);
    }

    // Sampled sup/inf of t*b(t) over the tail.
    const std::vector<double> tail_grid = log_spaced(horizon / 10.0, horizon, grid_size);
    double sup_tb = -kInf, inf_tb = kInf;
    double sup_witness = 0.0, inf_witness = 0.0;
    for (double t : tail_grid) {
        const double tb = t * coeff.b(t);
        if (tb > sup_tb) { sup_tb = tb; sup_witness = t; }
        if (tb < inf_tb) { inf_tb = tb; inf_witness = t; }
    }
    regime.sampled_sup_tb = sup_tb;
    regime.sampled_inf_tb = inf_tb;

    // A declaration is contradicted when the sampled excess over it neither
    // stays within tolerance nor keeps shrinking along the tail (limsup /
    // liminf convergence can be slow, e.g. like 1/log t).
    constexpr double kTol = 0.05;
    const double t_head = tail_grid.front();
    const double t_back = tail_grid.back();
    if (coeff.mu_upper) {
        const double excess_head = t_head * coeff.b(t_head) - *coeff.mu_upper;
        const double excess_back = t_back * coeff.b(t_back) - *coeff.mu_upper;
        if (excess_back > kTol && excess_back >= 0.9 * excess_head)
            throw ValidationError(
                "declared mu_upper=" + std::to_string(*coeff.mu_upper) +
                    " contradicted: t*b(t)=" + std::to_string(sup_tb) +
                    " at t=" + std::to_string(sup_witness) + " with no decay in sight",
                sup_witness);
    }
    if (coeff.mu_lower) {
        const double deficit_head = *coeff.mu_lower - t_head * coeff.b(t_head);
        const double deficit_back = *coeff.mu_lower - t_back * coeff.b(t_back);
        if (deficit_back > kTol && deficit_back >= 0.9 * deficit_head)
            throw ValidationError(
                "declared mu_lower=" + std::to_string(*coeff.mu_lower) +
                    " contradicted: t*b(t)=" + std::to_string(inf_tb) +
                    " at t=" + std::to_string(inf_witness) + " with no decay in sight",
                inf_witness);
    }

    if (coeff.tail_finite && *coeff.tail_finite) {
        // Numerical support: the tail increments must keep shrinking.
        const double i1 = tail_integral(coeff, horizon / 4.0, horizon / 2.0, 1e-9);
        const double i2 = tail_integral(coeff, horizon / 2.0, horizon, 1e-9);
        if (i2 > 0.9 * i1 + 1e-12)
            throw ValidationError(
                "declared integrability contradicted: tail increments do not decay "
                "(I[H/2,H]=" + std::to_string(i2) + " vs I[H/4,H/2]=" + std::to_string(i1) + ")",
                horizon);
        regime.tag = RegimeTag::Integrable;
        regime.gamma_index = 0.0;
        regime.mu_upper_plus = coeff.mu_upper ? *coeff.mu_upper : 0.0;
        return regime;
    }

    if (coeff.mu_lower && *coeff.mu_lower > 0.5) {
        regime.tag = RegimeTag::C2;
        const double mu_bar = coeff.mu_upper ? *coeff.mu_upper : *coeff.mu_lower;
        regime.mu_upper_plus =
            mu_upper_plus_override ? *mu_upper_plus_override : mu_bar + 0.01;
        if (regime.mu_upper_plus <= mu_bar)
            throw ArgumentError("mu_upper_plus must exceed the declared mu_upper");
        regime.gamma_index = std::max(regime.mu_upper_plus - 1.0, 0.0);
        return regime;
    }

    if (coeff.mu_upper && *coeff.mu_upper < 0.5) {
        regime.tag = RegimeTag::C1;
        regime.mu_upper_plus =
            mu_upper_plus_override ? *mu_upper_plus_override : *coeff.mu_upper + 0.01;
        regime.gamma_index = 0.0;
        regime.gamma_two_mu_admissible =
            *coeff.mu_upper == 0.0 || gamma_condition_bounded(coeff, 2.0 * *coeff.mu_upper);
        return regime;
    }

    regime.tag = RegimeTag::Unclassified;
    return regime;
}

CoefficientModel zero_coefficient() {
    CoefficientModel c;
    c.label = "zero";
    c.b = [](double) { return 0.0; };
    c.b_prime = [](double) { return 0.0; };
    c.primitive = [](double) { return 0.0; };
    c.mu_upper = 0.0;
    c.mu_lower = 0.0;
    c.c1 = 0.0;
    c.c2 = 0.0;
    c.tail_finite = true;
    return c;
}

CoefficientModel power_law(double p) {
    if (p < 1.0)
        throw ArgumentError("power_law: p < 1 violates (A2)");
    CoefficientModel c;
    c.label = "power_law(p=" + std::to_string(p) + ")";
    c.b = [p](double t) { return std::pow(1.0 + t, -p); };
    c.b_prime = [p](double t) { return -p * std::pow(1.0 + t, -p - 1.0); };
    if (p == 1.0)
        c.primitive = [](double t) { return std::log1p(t); };
    else
        c.primitive = [p](double t) {
            return (1.0 - std::pow(1.0 + t, 1.0 - p)) / (p - 1.0);
        };
    c.mu_upper = p > 1.0 ? 0.0 : 1.0;
    c.mu_lower = p > 1.0 ? 0.0 : 1.0;
    c.c1 = 1.0;
    c.c2 = p;
    c.tail_finite = (p > 1.0);
    return c;
}

CoefficientModel mu_over_1pt(double mu) {
    if (mu < 0.0) throw ArgumentError("mu_over_1pt: mu must be >= 0");
    CoefficientModel c;
    c.label = "mu_over_1pt(mu=" + std::to_string(mu) + ")";
    c.b = [mu](double t) { return mu / (1.0 + t); };
    c.b_prime = [mu](double t) { return -mu / ((1.0 + t) * (1.0 + t)); };
    c.primitive = [mu](double t) { return mu * std::log1p(t); };
    c.mu_upper = mu;
    c.mu_lower = mu;
    c.c1 = mu;
    c.c2 = mu;
    c.tail_finite = (mu == 0.0);
    return c;
}

CoefficientModel iterated_log(double mu, int n) {
    if (mu < 0.0) throw ArgumentError("iterated_log: mu must be >= 0");
    if (n < 0) throw ArgumentError("iterated_log: n must be >= 0");
    if (n == 0) return mu_over_1pt(mu);

    // e^[k] iterated exponentials: e^[0]=1, e^[k+1]=e^(e^[k]).
    std::vector<double> iexp(n + 1);
    iexp[0] = 1.0;
    for (int k = 1; k <= n; ++k) iexp[k] = std::exp(iexp[k - 1]);

    // denominator (1+t) * log(e+t) * ... * log^[n](e^[n]+t)
    auto denom = [n, iexp](double t) {
        double d = 1.0 + t;
        for (int k = 1; k <= n; ++k) {
            double arg = iexp[k] + t;
            for (int j = 1; j <= k; ++j) arg = std::log(arg);
            d *= arg;
        }
        return d;
    };
    CoefficientModel c;
    c.label = "iterated_log(mu=" + std::to_string(mu) + ",n=" + std::to_string(n) + ")";
    c.b = [mu, denom](double t) { return mu / denom(t); };
    // Central finite difference; the denominator is smooth and slowly varying.
    c.b_prime = [mu, denom](double t) {
        const double h = 1e-5 * (1.0 + t);
        return mu * (1.0 / denom(t + h) - 1.0 / denom(std::max(t - h, 0.0))) /
               (t + h - std::max(t - h, 0.0));
    };
    c.mu_upper = 0.0;
    c.mu_lower = 0.0;
    c.tail_finite = (mu == 0.0);
    return c;
}

CoefficientModel footnote_counterexample() {
    const double e = std::exp(1.0);
    CoefficientModel c;
    c.label = "footnote_counterexample";
    c.b = [e](double t) {
        return 0.25 / (e + t) + 1.0 / ((e + t) * std::log(e + t));
    };
    c.b_prime = [e](double t) {
        const double s = e + t;
        const double L = std::log(s);
        return -0.25 / (s * s) - (L + 1.0) / (s * s * L * L);
    };
    c.primitive = [e](double t) {
        const double L = std::log(e + t);
        return 0.25 * (L - 1.0) + std::log(L);
    };
    c.mu_upper = 0.25;
    c.mu_lower = 0.25;
    c.tail_finite = false;
    return c;
}

CoefficientModel negated(const CoefficientModel& coeff) {
    CoefficientModel c;
    c.label = "-(" + coeff.label + ")";
    auto b = coeff.b;
    auto bp = coeff.b_prime;
    c.b = [b](double t) { return -b(t); };
    c.b_prime = [bp](double t) { return -bp(t); };
    if (coeff.has_primitive()) {
        auto prim = coeff.primitive;
        c.primitive = [prim](double t) { return -prim(t); };
    }
    if (coeff.mu_upper) c.mu_lower = -*coeff.mu_upper;
    if (coeff.mu_lower) c.mu_upper = -*coeff.mu_lower;
    c.c1 = coeff.c1;
    c.c2 = coeff.c2;
    c.tail_finite = coeff.tail_finite;
    return c;
}

namespace {

/// Monotone cubic Hermite (Fritsch-Carlson) interpolant with exact
/// piecewise-cubic prefix integrals.
class Pchip {
public:
    Pchip(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const std::size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw ArgumentError("tabulated coefficient needs >= 2 aligned samples");
        for (std::size_t i = 1; i < n; ++i)
            if (x_[i] <= x_[i - 1])
                throw ArgumentError("tabulated coefficient: t samples must increase");
        d_.resize(n);
        std::vector<double> h(n - 1), s(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            h[i] = x_[i + 1] - x_[i];
            s[i] = (y_[i + 1] - y_[i]) / h[i];
        }
        d_[0] = s[0];
        d_[n - 1] = s[n - 2];
        for (std::size_t i = 1; i + 1 < n; ++i) {
            if (s[i - 1] * s[i] <= 0.0) {
                d_[i] = 0.0;
            } else {
                const double w1 = 2.0 * h[i] + h[i - 1];
                const double w2 = h[i] + 2.0 * h[i - 1];
                d_[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
            }
        }
        prefix_.assign(n, 0.0);
        for (std::size_t i = 0; i + 1 < n; ++i)
            prefix_[i + 1] = prefix_[i] + segment_integral(i, x_[i + 1]);
    }

    double eval(double t) const {
        const std::size_t i = locate(t);
        const double h = x_[i + 1] - x_[i];
        const double u = (t - x_[i]) / h;
        const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        const double h10 = u * (1.0 - u) * (1.0 - u);
        const double h01 = u * u * (3.0 - 2.0 * u);
        const double h11 = u * u * (u - 1.0);
        return h00 * y_[i] + h10 * h * d_[i] + h01 * y_[i + 1] + h11 * h * d_[i + 1];
    }

    double integral_from_start(double t) const {
        const std::size_t i = locate(t);
        return prefix_[i] + segment_integral(i, t);
    }

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::size_t locate(double t) const {
        if (t < x_.front() || t > x_.back() * (1.0 + 1e-12))
            throw ArgumentError("tabulated coefficient evaluated outside its sample range at t=" +
                                std::to_string(t));
        auto it = std::upper_bound(x_.begin(), x_.end(), t);
        std::size_t i = (it == x_.begin()) ? 0 : std::size_t(it - x_.begin() - 1);
        return std::min(i, x_.size() - 2);
    }

    double segment_integral(std::size_t i, double t) const {
        const double h = x_[i + 1] - x_[i];
        const double u = std::clamp((t - x_[i]) / h, 0.0, 1.0);
        const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
        const double H00 = u - u3 + 0.5 * u4;
        const double H10 = 0.5 * u2 - (2.0 / 3.0) * u3 + 0.25 * u4;
        const double H01 = u3 - 0.5 * u4;
        const double H11 = 0.25 * u4 - u3 / 3.0;
        return h * (H00 * y_[i] + H10 * h * d_[i] + H01 * y_[i + 1] + H11 * h * d_[i + 1]);
    }

    std::vector<double> x_, y_, d_;
    std::vector<double> prefix_;
};

}  // namespace

CoefficientModel tabulated_coefficient(std::vector<double> t, std::vector<double> b,
                                       std::vector<double> b_prime, std::string label) {
    if (!t.empty() && t.front() > 0.0)
        throw ArgumentError("tabulated coefficient must start at t = 0");
    auto spline_b = std::make_shared<Pchip>(t, std::move(b));
    auto spline_bp = std::make_shared<Pchip>(std::move(t), std::move(b_prime));
    CoefficientModel c;
    c.label = std::move(label);
    c.b = [spline_b](double s) { return spline_b->eval(s); };
    c.b_prime = [spline_bp](double s) { return spline_bp->eval(s); };
    c.primitive = [spline_b](double s) { return spline_b->integral_from_start(s); };
    return c;
}

}  // namespace wavescat
