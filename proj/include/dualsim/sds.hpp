/*
* Copyright (C) 2026 The dualsim Authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef DUALSIM_SDS_HPP
#define DUALSIM_SDS_HPP

#include "dualsim/model.hpp"
#include "dualsim/trajectory.hpp"

#include <cmath>
#include <limits>

namespace dualsim
{

/// Fixed-step integration settings. Times in days.
struct IntegratorConfig {
    double dt               = 0.001;
    double t_end            = 100.0;
    double sample_every     = 0.1;
    double blowup_threshold = 1e300;

    void validate() const;
    long long steps() const;
    long long sample_stride() const;
};

namespace detail
{

inline constexpr int max_step_halvings = 40;

template <typename Scalar, typename Rhs>
Vector2<Scalar> rk4_step(const Rhs& rhs, const Vector2<Scalar>& x, Scalar h)
{
    const Scalar half = h / Scalar(2);
    const Vector2<Scalar> k1 = rhs(x);
    const Vector2<Scalar> k2 = rhs(Vector2<Scalar>(x + half * k1));
    const Vector2<Scalar> k3 = rhs(Vector2<Scalar>(x + half * k2));
    const Vector2<Scalar> k4 = rhs(Vector2<Scalar>(x + h * k3));
    return x + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

// Advances x by h. Steps that undershoot zero are split in halves; tiny negative residues are
// clamped. Returns false (x untouched) when the step leaves the finite range or crosses the
// blow-up threshold.
template <typename Scalar, typename Rhs>
bool advance(const Rhs& rhs, Vector2<Scalar>& x, Scalar h, Scalar threshold, int depth = 0)
{
    Vector2<Scalar> y = rk4_step(rhs, x, h);
    if (!y.allFinite() || (y.array() > threshold).any()) {
        return false;
    }
    const Vector2<Scalar> tolerance = Scalar(1e-12) * x.cwiseAbs();
    if ((y.array() < -tolerance.array()).any()) {
        if (depth >= max_step_halvings) {
            throw EngineError("positivity could not be preserved after step halving");
        }
        Vector2<Scalar> mid = x;
        if (!advance(rhs, mid, h / Scalar(2), threshold, depth + 1) ||
            !advance(rhs, mid, h / Scalar(2), threshold, depth + 1)) {
            return false;
        }
        x = mid;
        return true;
    }
    x = y.cwiseMax(Scalar(0));
    return true;
}

template <typename Scalar, typename Rhs>
Trajectory<Scalar, Scalar> integrate_rk4(const Rhs& rhs, Vector2<Scalar> x, int populations,
                                         const IntegratorConfig& cfg)
{
    cfg.validate();
    if (!x.allFinite() || (x.array() < Scalar(0)).any()) {
        throw ConfigError("initial state must be finite and nonnegative");
    }
    const long long n_steps = cfg.steps();
    const long long stride  = cfg.sample_stride();
    const Scalar dt         = Scalar(cfg.dt);
    const Scalar threshold  = Scalar(cfg.blowup_threshold);

    Trajectory<Scalar, Scalar> traj;
    traj.populations = populations;
    traj.paradigm    = Paradigm::SDS;
    traj.times.reserve(static_cast<std::size_t>(n_steps / stride + 2));
    traj.states.reserve(static_cast<std::size_t>(n_steps / stride + 2));
    traj.push(Scalar(0), x);

    for (long long i = 1; i <= n_steps; ++i) {
        if (!advance(rhs, x, dt, threshold)) {
            const Scalar t_last = Scalar(i - 1) * dt;
            if (traj.end_time() < t_last) {
                traj.push(t_last, x);
            }
            traj.termination = Termination::BlowUp;
            return traj;
        }
        if (i % stride == 0 || i == n_steps) {
            traj.push(Scalar(i) * dt, x);
        }
    }
    traj.termination = Termination::Completed;
    return traj;
}

} // namespace detail

/**
 * Integrates dT/dt = T f(T) with classic fixed-step RK4.
 *
 * Samples are emitted every cfg.sample_every days and at t_end. If the state would leave the
 * finite range or exceed cfg.blowup_threshold the run stops with Termination::BlowUp and the
 * last valid state as final sample.
 */
template <typename Scalar>
Trajectory<Scalar, Scalar> integrate(const BasicGrowthLaw<Scalar>& law, Scalar T0, const IntegratorConfig& cfg)
{
    law.validate();
    if (law.kind == LawKind::Gompertz && !(T0 > 0)) {
        throw ConfigError("gompertz integration requires T0 > 0");
    }
    auto rhs = [&law](const Vector2<Scalar>& x) -> Vector2<Scalar> {
        const Scalar T = x(0);
        if (!(T > 0)) {
            return Vector2<Scalar>::Zero();
        }
        const auto rates = detail::percapita_unchecked(law, T);
        return {T * (rates.proliferation - rates.death), Scalar(0)};
    };
    return detail::integrate_rk4<Scalar>(rhs, Vector2<Scalar>(T0, Scalar(0)), 1, cfg);
}

/// Integrates the two-equation tumour/effector model with classic fixed-step RK4.
template <typename Scalar>
Trajectory<Scalar, Scalar> integrate(const BasicKuznetsovParams<Scalar>& params, const Vector2<Scalar>& initial,
                                     const IntegratorConfig& cfg)
{
    params.validate();
    auto rhs = [&params](const Vector2<Scalar>& x) -> Vector2<Scalar> {
        return detail::kuznetsov_unchecked(params, x);
    };
    return detail::integrate_rk4<Scalar>(rhs, initial, 2, cfg);
}

template <typename Scalar>
struct ClosedFormValue {
    Scalar value;     ///< linear-scale population, +inf when not representable
    Scalar log_value; ///< natural logarithm of the population
    bool overflow;
};

/**
 * Analytic solution of the logistic (alpha = 0, beta = 1) and Gompertz laws.
 *
 * logistic: T(t) = K T0 e^{at} / (K + T0 (e^{at} - 1)), K = a/b
 * gompertz: ln T(t) = ln(T0) e^{-bt} + (a/b)(1 - e^{-bt})
 */
template <typename Scalar>
ClosedFormValue<Scalar> closed_form(const BasicGrowthLaw<Scalar>& law, Scalar T0, Scalar t)
{
    using std::exp;
    using std::expm1;
    using std::log;
    if (!(T0 > 0)) {
        throw DomainError("closed form requires T0 > 0");
    }
    if (!(t >= 0)) {
        throw ConfigError("closed form requires t >= 0");
    }
    if (law.kind == LawKind::Gompertz) {
        const Scalar log_t = log(T0) * exp(-law.b * t) - (law.a / law.b) * expm1(-law.b * t);
        const bool overflow = log_t >= log(std::numeric_limits<Scalar>::max());
        return {overflow ? std::numeric_limits<Scalar>::infinity() : exp(log_t), log_t, overflow};
    }
    if (!law.is_logistic()) {
        throw ConfigError("closed form is only available for the logistic and gompertz laws");
    }
    // Divided through by e^{at} so that the expression stays finite for large t.
    const Scalar K     = law.a / law.b;
    const Scalar value = K * T0 / (K * exp(-law.a * t) - T0 * expm1(-law.a * t));
    return {value, log(value), false};
}

} // namespace dualsim

#endif // DUALSIM_SDS_HPP
