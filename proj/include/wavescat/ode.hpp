#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>

#include "wavescat/detail/dop853_tableau.hpp"
#include "wavescat/errors.hpp"

namespace wavescat {

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    /// Oscillation-aware cap on the step size (set to ~1/frequency).
    double max_step = std::numeric_limits<double>::infinity();
    double first_step = 0.0;  // 0 = automatic
    std::uint64_t max_steps = 200'000'000;
};

struct OdeStats {
    std::uint64_t steps = 0;
    std::uint64_t rejected = 0;
    std::uint64_t rhs_evals = 0;
};

/// Explicit embedded Runge-Kutta integrator of order 8(5,3) after Dormand &
/// Prince, continuation-style: construct once, then advance_to() successive
/// output times. State is any fixed-size Eigen matrix/vector type.
template <class State, class Rhs>
class Dop853 {
public:
    Dop853(Rhs rhs, double t0, State y0, OdeOptions opt = {})
        : rhs_(std::move(rhs)), opt_(opt), t_(t0), y_(std::move(y0)) {
        comp_.setZero();
        f_ = rhs_(t_, y_);
        ++stats_.rhs_evals;
    }

    double time() const { return t_; }
    const State& state() const { return y_; }
    const OdeStats& stats() const { return stats_; }

    void advance_to(double t_end) {
        while (t_ < t_end) {
            const double gap = t_end - t_;
            if (gap <= 32.0 * eps_ * std::max(std::abs(t_), std::abs(t_end))) {
                t_ = t_end;
                return;
            }
            single_step(t_end);
        }
    }

private:
    static constexpr int kStages = detail::kDop853Stages;
    static constexpr double eps_ = std::numeric_limits<double>::epsilon();

    using Scalar = typename State::Scalar;
    static constexpr int kSize = State::SizeAtCompileTime;

    double scaled_rms(const State& v, const State& a, const State& b) const {
        double acc = 0.0;
        for (int i = 0; i < kSize; ++i) {
            const double scale =
                opt_.atol + opt_.rtol * std::max(std::abs(a(i)), std::abs(b(i)));
            const double q = std::abs(v(i)) / scale;
            acc += q * q;
        }
        return std::sqrt(acc / kSize);
    }

    double initial_step(double t_bound) const {
        if (opt_.first_step > 0.0)
            return std::min({opt_.first_step, opt_.max_step, t_bound - t_});
        const double d0 = scaled_rms(y_, y_, y_);
        const double d1 = scaled_rms(f_, y_, y_);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, t_bound - t_);
        State y1 = y_ + h0 * f_;
        State f1 = rhs_(t_ + h0, y1);
        const double d2 = scaled_rms(State(f1 - f_), y_, y_) / h0;
        double h1;
        if (std::max(d1, d2) <= 1e-15)
            h1 = std::max(1e-6, h0 * 1e-3);
        else
            h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
        return std::min({100.0 * h0, h1, opt_.max_step, t_bound - t_});
    }

    void single_step(double t_bound) {
        using detail::kDop853A;
        using detail::kDop853B;
        using detail::kDop853C;
        using detail::kDop853E3;
        using detail::kDop853E5;

        if (h_ <= 0.0) h_ = initial_step(t_bound);
        const double min_step =
            16.0 * eps_ * std::max(std::abs(t_), 1e-300);

        bool rejected = false;
        for (;;) {
            if (++stats_.steps > opt_.max_steps)
                throw NumericalError("ODE integrator exceeded max_steps at t=" +
                                     std::to_string(t_));
            double h = std::min({h_, opt_.max_step, t_bound - t_});
            if (h < min_step)
                throw StiffnessError("ODE step size underflow", t_);

            k_[0] = f_;
            for (int s = 1; s < kStages; ++s) {
                State acc = kDop853A[s][0] * k_[0];
                for (int i = 1; i < s; ++i)
                    if (kDop853A[s][i] != 0.0) acc += kDop853A[s][i] * k_[i];
                State ys = y_ + h * acc;
                k_[s] = rhs_(t_ + kDop853C[s] * h, ys);
                ++stats_.rhs_evals;
            }
            State incr = kDop853B[0] * k_[0];
            for (int i = 1; i < kStages; ++i)
                if (kDop853B[i] != 0.0) incr += kDop853B[i] * k_[i];
            incr *= h;

            // Compensated update keeps roundoff from accumulating linearly
            // over the ~1e5 steps long oscillatory runs need.
            State delta = incr + comp_;
            State y_new = y_ + delta;
            State comp_new = (y_ - y_new) + delta;

            State f_new = rhs_(t_ + h, y_new);
            ++stats_.rhs_evals;
            k_[kStages] = f_new;

            State err5 = kDop853E5[0] * k_[0];
            State err3 = kDop853E3[0] * k_[0];
            for (int i = 1; i <= kStages; ++i) {
                if (kDop853E5[i] != 0.0) err5 += kDop853E5[i] * k_[i];
                if (kDop853E3[i] != 0.0) err3 += kDop853E3[i] * k_[i];
            }
            double e5 = 0.0, e3 = 0.0;
            for (int i = 0; i < kSize; ++i) {
                const double scale =
                    opt_.atol +
                    opt_.rtol * std::max(std::abs(y_(i)), std::abs(y_new(i)));
                const double a = std::abs(err5(i)) / scale;
                const double b = std::abs(err3(i)) / scale;
                e5 += a * a;
                e3 += b * b;
            }
            double err_norm = 0.0;
            if (e5 != 0.0 || e3 != 0.0)
                err_norm = std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * kSize);

            if (err_norm <= 1.0) {
                double factor = (err_norm == 0.0)
                                    ? kMaxFactor
                                    : std::min(kMaxFactor,
                                               kSafety * std::pow(err_norm, kErrExp));
                if (rejected) factor = std::min(1.0, factor);
                t_ += h;
                y_ = y_new;
                comp_ = comp_new;
                f_ = f_new;
                h_ = h * factor;
                return;
            }
            rejected = true;
            ++stats_.rejected;
            h_ = h * std::max(kMinFactor, kSafety * std::pow(err_norm, kErrExp));
        }
    }

    static constexpr double kSafety = 0.9;
    static constexpr double kMinFactor = 0.2;
    static constexpr double kMaxFactor = 10.0;
    static constexpr double kErrExp = -1.0 / 8.0;

    Rhs rhs_;
    OdeOptions opt_;
    double t_;
    State y_;
    State f_;
    State comp_;
    double h_ = 0.0;
    std::array<State, kStages + 1> k_;
    OdeStats stats_;
};

/// One-shot convenience wrapper: integrate y' = rhs(t, y) from t0 to t1.
template <class State, class Rhs>
State integrate_ode(Rhs&& rhs, double t0, const State& y0, double t1,
                    const OdeOptions& opt = {}, OdeStats* stats = nullptr) {
    if (t1 < t0) throw ArgumentError("integrate_ode: t1 < t0");
    Dop853<State, std::decay_t<Rhs>> solver(std::forward<Rhs>(rhs), t0, y0, opt);
    solver.advance_to(t1);
    if (stats) *stats = solver.stats();
    return solver.state();
}

}  // namespace wavescat
