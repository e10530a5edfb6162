#pragma once

// Dormand-Prince 5(4) integrator with PI step-size control and the
// standard fourth-order continuous extension.
//
// Works for any Eigen column vector (real or complex). The state type must
// support +, scalar *, cwiseAbs() and allFinite().

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ptbec/errors.hpp"

namespace ptbec::numerics {

struct IntegratorSettings {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 10'000'000;
    /// 0 selects the step automatically.
    double initial_step = 0.0;

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(max_step > 0.0))
            throw InvalidArgument("integrator settings: rel_tol, abs_tol and max_step must be positive");
        if (!(initial_step >= 0.0))
            throw InvalidArgument("integrator settings: initial_step must be non-negative");
    }
};

struct TimeSpan {
    double start = 0.0;
    double end = 0.0;
};

template <class Vec>
struct Sample {
    double t;
    Vec y;
};

template <class Vec>
using Derivative = std::function<Vec(double, const Vec&)>;

template <class Vec>
class DormandPrince45 {
public:
    DormandPrince45(Derivative<Vec> rhs, double t0, Vec y0, double t_end, IntegratorSettings settings)
        : rhs_(std::move(rhs)), settings_(settings), t_(t0), y_(std::move(y0)), t_end_(t_end) {
        settings_.validate();
        if (!(std::isfinite(t0) && std::isfinite(t_end)) || t_end == t0)
            throw InvalidArgument("integration span must be finite and non-degenerate");
        direction_ = t_end > t0 ? 1.0 : -1.0;
        k1_ = evaluate(t_, y_);
        h_ = settings_.initial_step > 0.0 ? settings_.initial_step : initial_step();
        h_ = std::min(h_, settings_.max_step);
        last_t_ = t_;
    }

    double time() const { return t_; }
    const Vec& state() const { return y_; }
    const Vec& derivative() const { return k1_; }
    bool finished() const { return t_ == t_end_; }
    std::size_t accepted_steps() const { return accepted_; }
    std::size_t rejected_steps() const { return rejected_; }
    double step_size() const { return h_; }

    /// Takes one accepted step, never passing the end of the span.
    void step() {
        if (finished()) return;
        for (;;) {
            if (accepted_ + rejected_ >= settings_.max_steps)
                throw StepLimitExceeded("integrator exceeded " + std::to_string(settings_.max_steps) + " steps at t=" +
                                        std::to_string(t_));
            double h = std::min(h_, std::abs(t_end_ - t_));
            const double min_h = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_));
            if (h < min_h && std::abs(t_end_ - t_) > min_h)
                throw StepSizeUnderflow("step size underflow at t=" + std::to_string(t_));
            const double hs = direction_ * h;

            const Vec k2 = evaluate(t_ + c2 * hs, y_ + hs * (a21 * k1_));
            const Vec k3 = evaluate(t_ + c3 * hs, y_ + hs * (a31 * k1_ + a32 * k2));
            const Vec k4 = evaluate(t_ + c4 * hs, y_ + hs * (a41 * k1_ + a42 * k2 + a43 * k3));
            const Vec k5 = evaluate(t_ + c5 * hs, y_ + hs * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
            const double t_new = (std::abs(t_end_ - t_) <= h) ? t_end_ : t_ + hs;
            const Vec k6 =
                evaluate(t_ + hs, y_ + hs * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
            Vec y_new = y_ + hs * (a71 * k1_ + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
            const Vec k7 = evaluate(t_new, y_new);

            const Vec err_vec = hs * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
            const auto scale = (settings_.abs_tol +
                                settings_.rel_tol * y_.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array());
            const double err = (err_vec.cwiseAbs().array() / scale).maxCoeff();

            const double fac11 = std::pow(err, expo1);
            if (err <= 1.0 && std::isfinite(err)) {
                double fac = fac11 / std::pow(err_old_, beta);
                fac = std::clamp(fac / safety, 1.0 / fac_max, 1.0 / fac_min);
                double h_next = h / fac;
                err_old_ = std::max(err, 1e-4);

                // continuous extension coefficients
                r1_ = y_;
                r2_ = y_new - y_;
                r3_ = hs * k1_ - r2_;
                r4_ = r2_ - hs * k7 - r3_;
                r5_ = hs * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                last_t_ = t_;
                last_h_ = hs;

                t_ = t_new;
                y_ = std::move(y_new);
                k1_ = k7;
                if (rejected_last_) h_next = std::min(h_next, h);
                rejected_last_ = false;
                h_ = std::min(h_next, settings_.max_step);
                ++accepted_;
                return;
            }
            ++rejected_;
            rejected_last_ = true;
            const double shrink = std::isfinite(err) ? std::min(1.0 / fac_min, fac11 / safety) : 10.0;
            h_ = h / shrink;
        }
    }

    /// Dense output inside the last accepted step.
    Vec interpolate(double t) const {
        if (accepted_ == 0) return y_;
        const double theta = (t - last_t_) / last_h_;
        const double theta1 = 1.0 - theta;
        return r1_ + theta * (r2_ + theta1 * (r3_ + theta * (r4_ + theta1 * r5_)));
    }

    /// Steps until `t` lies inside the last accepted step and returns the
    /// interpolated state there.
    Vec advance_to(double t) {
        if (direction_ * (t - t_end_) > 0.0) throw InvalidArgument("requested time beyond integration span");
        while (direction_ * (t - t_) > 0.0) step();
        if (t == t_) return y_;
        return interpolate(t);
    }

private:
    Vec evaluate(double t, const Vec& y) {
        Vec dy = rhs_(t, y);
        if (!dy.allFinite()) throw NonFiniteDerivative("right-hand side is not finite at t=" + std::to_string(t));
        return dy;
    }

    double error_norm(const Vec& v, const Vec& y) const {
        const auto scale = settings_.abs_tol + settings_.rel_tol * y.cwiseAbs().array();
        return std::sqrt((v.cwiseAbs().array() / scale).square().mean());
    }

    double initial_step() {
        const double d0 = error_norm(y_, y_);
        const double d1n = error_norm(k1_, y_);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, std::abs(t_end_ - t_));
        const Vec y1 = y_ + direction_ * h0 * k1_;
        const Vec f1 = evaluate(t_ + direction_ * h0, y1);
        const double d2 = error_norm(f1 - k1_, y_) / h0;
        const double m = std::max(d1n, d2);
        const double h1 = m <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / m, 0.2);
        return std::min({100.0 * h0, h1, std::abs(t_end_ - t_)});
    }

    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                            a76 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    static constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                            d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                            d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
    static constexpr double beta = 0.04, expo1 = 0.2 - beta * 0.75, safety = 0.9, fac_min = 0.2, fac_max = 10.0;

    Derivative<Vec> rhs_;
    IntegratorSettings settings_;
    double t_;
    Vec y_;
    double t_end_;
    double direction_ = 1.0;
    Vec k1_;
    double h_ = 0.0;
    double err_old_ = 1e-4;
    bool rejected_last_ = false;
    std::size_t accepted_ = 0;
    std::size_t rejected_ = 0;
    double last_t_ = 0.0;
    double last_h_ = 1.0;
    Vec r1_, r2_, r3_, r4_, r5_;
};

/// Integrates over `span` and returns every accepted step, both endpoints included.
template <class Vec>
std::vector<Sample<Vec>> integrate_adaptive(Derivative<Vec> rhs, const Vec& y0, TimeSpan span,
                                            const IntegratorSettings& settings) {
    DormandPrince45<Vec> stepper(std::move(rhs), span.start, y0, span.end, settings);
    std::vector<Sample<Vec>> out;
    out.push_back({span.start, y0});
    while (!stepper.finished()) {
        stepper.step();
        out.push_back({stepper.time(), stepper.state()});
    }
    return out;
}

/// Integrates from times.front() and returns the state at every entry of
/// `times` (monotone) via dense output.
template <class Vec>
std::vector<Sample<Vec>> integrate_at(Derivative<Vec> rhs, const Vec& y0, std::span<const double> times,
                                      const IntegratorSettings& settings) {
    if (times.size() < 2) throw InvalidArgument("integrate_at needs at least two output times");
    DormandPrince45<Vec> stepper(std::move(rhs), times.front(), y0, times.back(), settings);
    std::vector<Sample<Vec>> out;
    out.reserve(times.size());
    out.push_back({times.front(), y0});
    for (std::size_t i = 1; i < times.size(); ++i) out.push_back({times[i], stepper.advance_to(times[i])});
    return out;
}

}  // namespace ptbec::numerics
