// Copyright 2026 The nanomech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <sstream>
#include <utility>

#include "nanomech/errors.hpp"

namespace nanomech {

struct IntegratorOptions {
    double rtol = 1e-9;
    double atol = 1e-12;
    double initial_step = 0.0;  // 0 picks a step from the initial derivative
    double min_step = 1e-13;    // relative to max(1, |t|)
    std::size_t max_steps = 50'000'000;
};

struct IntegratorStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_calls = 0;
};

/// Adaptive Dormand-Prince 5(4) stepper with first-same-as-last reuse.
///
/// State is any Eigen dense type (vector or matrix, real or complex). The
/// error estimate is the scaled max norm
///     max_i |err_i| / (atol + rtol * max(|y_i|, |y_new_i|)).
template <typename State>
class DormandPrince {
   public:
    using Rhs = std::function<void(double t, const State& y, State& dydt)>;

    DormandPrince(Rhs rhs, State y0, double t0, IntegratorOptions opts = {})
        : rhs_(std::move(rhs)), y_(std::move(y0)), t_(t0), opts_(opts) {
        if (!(opts_.rtol > 0.0) || !(opts_.atol >= 0.0)) {
            throw ParameterError("integrator tolerances must be positive");
        }
        k1_ = y_;
        eval(t_, y_, k1_);
        h_ = opts_.initial_step > 0.0 ? opts_.initial_step : guess_step();
    }

    double time() const { return t_; }
    const State& state() const { return y_; }
    const IntegratorStats& stats() const { return stats_; }

    /// Integrate forward until time() == t_end. The final step is clipped so
    /// sample times are hit exactly.
    void advance_to(double t_end) {
        if (t_end < t_) throw ParameterError("cannot integrate backwards in time");
        while (t_ < t_end) {
            if (stats_.accepted + stats_.rejected >= opts_.max_steps) {
                fail("step budget exhausted", t_end);
            }
            const bool last = t_ + h_ >= t_end;
            const double h = last ? t_end - t_ : h_;
            if (h < opts_.min_step * std::max(1.0, std::abs(t_)) && !last) {
                fail("step size underflow", t_end);
            }
            const double err = attempt(h);
            if (err <= 1.0) {
                t_ = last ? t_end : t_ + h;
                std::swap(y_, y_new_);
                std::swap(k1_, k7_);
                ++stats_.accepted;
                const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
                // a clipped final step says nothing about the natural step size
                if (!last || grow < 1.0) h_ = h * std::max(0.2, grow);
            } else {
                ++stats_.rejected;
                h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
                if (h_ < opts_.min_step * std::max(1.0, std::abs(t_))) {
                    fail("step size underflow", t_end);
                }
            }
        }
    }

   private:
    void eval(double t, const State& y, State& out) {
        rhs_(t, y, out);
        ++stats_.rhs_calls;
    }

    double guess_step() {
        const double y_scale = y_.cwiseAbs().maxCoeff();
        const double d_scale = k1_.cwiseAbs().maxCoeff();
        if (d_scale == 0.0) return 1.0;
        return 0.01 * std::max(y_scale, opts_.atol) / d_scale;
    }

    double attempt(double h) {
        // Dormand & Prince (1980) tableau
        constexpr double a21 = 1.0 / 5.0;
        constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                         a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                         a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
        constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                         b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                         e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        tmp_ = y_ + h * a21 * k1_;
        eval(t_ + h / 5.0, tmp_, k2_);
        tmp_ = y_ + h * (a31 * k1_ + a32 * k2_);
        eval(t_ + 3.0 * h / 10.0, tmp_, k3_);
        tmp_ = y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        eval(t_ + 4.0 * h / 5.0, tmp_, k4_);
        tmp_ = y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        eval(t_ + 8.0 * h / 9.0, tmp_, k5_);
        tmp_ = y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        eval(t_ + h, tmp_, k6_);
        y_new_ = y_ + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        eval(t_ + h, y_new_, k7_);

        tmp_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
        const auto scale =
            (opts_.atol + opts_.rtol * y_.cwiseAbs().cwiseMax(y_new_.cwiseAbs()).array());
        return (tmp_.cwiseAbs().array() / scale).maxCoeff();
    }

    [[noreturn]] void fail(const char* what, double t_end) const {
        std::ostringstream os;
        os << "integration failed: " << what << " at t = " << t_ << " (target " << t_end
           << ", step " << h_ << ", accepted " << stats_.accepted << ", rejected "
           << stats_.rejected << ", rtol " << opts_.rtol << ")";
        throw IntegrationError(os.str());
    }

    Rhs rhs_;
    State y_;
    double t_;
    IntegratorOptions opts_;
    double h_ = 0.0;
    IntegratorStats stats_;
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, y_new_, tmp_;
};

}  // namespace nanomech
