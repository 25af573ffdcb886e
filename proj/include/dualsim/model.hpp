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
#ifndef DUALSIM_MODEL_HPP
#define DUALSIM_MODEL_HPP

#include "dualsim/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace dualsim
{

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/// Continuous population state (tumour, effector) used by the deterministic engine.
using State = Vector2<double>;

/// Integer population state (tumour, effector) used by the stochastic engine.
using Counts = Vector2<std::int64_t>;

enum class LawKind
{
    PowerLaw,
    Gompertz,
};

/// The named one-equation growth models.
enum class GrowthModel
{
    Logistic,
    Bertalanffy,
    Gompertz,
};

std::string_view to_string(GrowthModel model);
GrowthModel growth_model_from_string(std::string_view name);

/**
 * One-equation tumour growth rule dT/dt = T f(T), f = p - d.
 *
 * PowerLaw: p(T) = a T^alpha, d(T) = b T^beta.
 * Gompertz: p(T) = a, d(T) = b ln T (alpha and beta unused).
 */
template <typename Scalar>
struct BasicGrowthLaw {
    LawKind kind = LawKind::PowerLaw;
    Scalar a     = 1;
    Scalar b     = 1;
    Scalar alpha = 0;
    Scalar beta  = 0;

    static BasicGrowthLaw power_law(Scalar a, Scalar b, Scalar alpha, Scalar beta)
    {
        BasicGrowthLaw law{LawKind::PowerLaw, a, b, alpha, beta};
        law.validate();
        return law;
    }

    static BasicGrowthLaw logistic(Scalar a, Scalar b)
    {
        auto law = power_law(a, b, Scalar(0), Scalar(1));
        law.require_growth();
        return law;
    }

    static BasicGrowthLaw bertalanffy(Scalar a, Scalar b)
    {
        auto law = power_law(a, b, Scalar(1) / Scalar(3), Scalar(0));
        law.require_growth();
        return law;
    }

    static BasicGrowthLaw gompertz(Scalar a, Scalar b)
    {
        BasicGrowthLaw law{LawKind::Gompertz, a, b, Scalar(0), Scalar(0)};
        law.validate();
        return law;
    }

    static BasicGrowthLaw of(GrowthModel model, Scalar a, Scalar b)
    {
        switch (model) {
        case GrowthModel::Logistic:
            return logistic(a, b);
        case GrowthModel::Bertalanffy:
            return bertalanffy(a, b);
        case GrowthModel::Gompertz:
            return gompertz(a, b);
        }
        throw ConfigError("unknown growth model");
    }

    bool is_logistic() const
    {
        return kind == LawKind::PowerLaw && alpha == Scalar(0) && beta == Scalar(1);
    }

    void validate() const
    {
        using std::isfinite;
        if (!(a > 0) || !(b > 0) || !isfinite(a) || !isfinite(b)) {
            throw ConfigError("growth law requires finite a > 0 and b > 0");
        }
        if (kind == LawKind::PowerLaw && (!isfinite(alpha) || !isfinite(beta))) {
            throw ConfigError("growth law exponents must be finite");
        }
    }

    template <typename Other>
    BasicGrowthLaw<Other> cast() const
    {
        return {kind, Other(a), Other(b), Other(alpha), Other(beta)};
    }

private:
    void require_growth() const
    {
        if (!(b < a)) {
            throw ConfigError("logistic and von Bertalanffy laws require b < a for growth");
        }
    }
};

using GrowthLaw = BasicGrowthLaw<double>;

template <typename Scalar>
struct PerCapitaRates {
    Scalar proliferation;
    Scalar death;
};

namespace detail
{

// Unchecked evaluation; callers guarantee T > 0 and inspect finiteness themselves.
template <typename Scalar>
PerCapitaRates<Scalar> percapita_unchecked(const BasicGrowthLaw<Scalar>& law, Scalar T)
{
    using std::log;
    using std::pow;
    if (law.kind == LawKind::Gompertz) {
        return {law.a, law.b * log(T)};
    }
    return {law.a * pow(T, law.alpha), law.b * pow(T, law.beta)};
}

} // namespace detail

/// Per-capita proliferation p(T) and death d(T). Throws DomainError for T <= 0, OverflowError if not finite.
template <typename Scalar>
PerCapitaRates<Scalar> percapita_rates(const BasicGrowthLaw<Scalar>& law, Scalar T)
{
    using std::isfinite;
    if (!(T > 0)) {
        throw DomainError("per-capita rates require T > 0");
    }
    auto rates = detail::percapita_unchecked(law, T);
    if (!isfinite(rates.proliferation) || !isfinite(rates.death)) {
        throw OverflowError("per-capita rate overflow at T = " + std::to_string(static_cast<double>(T)));
    }
    return rates;
}

/// Net per-capita growth f(T) = p(T) - d(T).
template <typename Scalar>
Scalar growth_f(const BasicGrowthLaw<Scalar>& law, Scalar T)
{
    auto rates = percapita_rates(law, T);
    return rates.proliferation - rates.death;
}

/**
 * Two-equation tumour/effector model:
 *   dT/dt = a T (1 - b T) - n T E
 *   dE/dt = p T E / (g + T) - m T E - d E + s
 */
template <typename Scalar>
struct BasicKuznetsovParams {
    Scalar a = 0;
    Scalar b = 0;
    Scalar g = 1;
    Scalar m = 0;
    Scalar n = 0;
    Scalar p = 0;
    Scalar d = 0;
    Scalar s = 0;
    int scenario = 0; ///< 1..4 for the preset scenarios, 0 for custom parameters

    void validate() const
    {
        using std::isfinite;
        for (Scalar v : {a, b, g, m, n, p, d, s}) {
            if (!isfinite(v) || v < 0) {
                throw ConfigError("kuznetsov parameters must be finite and >= 0");
            }
        }
        if (!(g > 0)) {
            throw ConfigError("kuznetsov parameter g must be > 0");
        }
    }

    template <typename Other>
    BasicKuznetsovParams<Other> cast() const
    {
        return {Other(a), Other(b), Other(g), Other(m), Other(n), Other(p), Other(d), Other(s), scenario};
    }
};

using KuznetsovParams = BasicKuznetsovParams<double>;

namespace detail
{

template <typename Scalar>
Vector2<Scalar> kuznetsov_unchecked(const BasicKuznetsovParams<Scalar>& k, const Vector2<Scalar>& x)
{
    const Scalar T = x(0);
    const Scalar E = x(1);
    return {k.a * T * (Scalar(1) - k.b * T) - k.n * T * E,
            k.p * T * E / (k.g + T) - k.m * T * E - k.d * E + k.s};
}

} // namespace detail

/// Right-hand side (dT/dt, dE/dt) of the two-equation model.
template <typename Scalar>
Vector2<Scalar> kuznetsov_derivatives(const BasicKuznetsovParams<Scalar>& params, const Vector2<Scalar>& state)
{
    if (!state.allFinite()) {
        throw DomainError("kuznetsov state must be finite");
    }
    if (state(0) < 0 || state(1) < 0) {
        throw DomainError("kuznetsov state must be nonnegative");
    }
    return detail::kuznetsov_unchecked(params, state);
}

/// Preset scenarios 1..4: per-scenario (b, d, s) merged with the shared constants.
KuznetsovParams scenario_preset(int id);

/// Growth law for the a/b ratio sweep: a = 1, b = 1/c. Requires c > 1.
GrowthLaw experiment_one_law(GrowthModel model, double c);

} // namespace dualsim

#endif // DUALSIM_MODEL_HPP
