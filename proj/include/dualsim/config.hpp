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
#ifndef DUALSIM_CONFIG_HPP
#define DUALSIM_CONFIG_HPP

#include "dualsim/abs.hpp"
#include "dualsim/model.hpp"
#include "dualsim/sds.hpp"
#include "dualsim/stats.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dualsim
{

enum class ModelKind
{
    Logistic,
    Bertalanffy,
    Gompertz,
    Kuznetsov,
};

enum class ParadigmChoice
{
    SDS,
    ABS,
    Both,
};

enum class Fix
{
    None,
    Tumour,
    Both,
};

std::string_view to_string(ModelKind model);
std::string_view to_string(ParadigmChoice paradigm);
std::string_view to_string(Fix fix);

/// Default two-equation initial condition (tumour, effector).
inline constexpr double default_kuznetsov_t0 = 100.0;
inline constexpr double default_kuznetsov_e0 = 10.0;

/// A fully validated experiment definition.
struct RunSpec {
    ModelKind model = ModelKind::Logistic;
    int scenario    = 0;
    std::optional<double> c; ///< a/b ratio, when the law was given that way
    double a = 0.0;          ///< resolved one-equation parameters
    double b = 0.0;
    double t0                = 1.0;
    double e0                = 0.0;
    ParadigmChoice paradigm  = ParadigmChoice::Both;
    double dt                = 0.001;
    double t_end             = 100.0;
    double grid              = 1.0;
    double sample_every      = 0.1;
    std::size_t reps         = default_replicates;
    std::uint64_t seed       = 1;
    Method method            = Method::Exact;
    RatePolicy policy        = RatePolicy::Live;
    Fix fix                  = Fix::None;
    double alpha             = 0.05;
    std::string out          = "out";
    bool plot                = false;
    unsigned threads         = 0;

    bool one_equation() const
    {
        return model != ModelKind::Kuznetsov;
    }
    bool runs_sds() const
    {
        return paradigm != ParadigmChoice::ABS;
    }
    bool runs_abs() const
    {
        return paradigm != ParadigmChoice::SDS;
    }

    GrowthLaw law() const;
    KuznetsovParams kuznetsov() const;
    Floors floors() const;
    IntegratorConfig integrator() const;
    Grid output_grid() const;

    /// Canonical configuration document. parse_config(to_json()) reproduces this spec up to the
    /// thread count, which never affects results and is left out.
    nlohmann::json to_json() const;

    bool operator==(const RunSpec&) const = default;
};

/**
 * Parses and validates a JSON configuration document.
 *
 * Accepts either a plain configuration object or a run manifest (whose "config" member is
 * used). Unknown keys, wrong types and violated invariants raise ConfigError naming the
 * offending field as a JSON pointer.
 */
RunSpec parse_config(std::string_view text);
RunSpec parse_config(const nlohmann::json& document);
inline RunSpec parse_config(const std::string& text)
{
    return parse_config(std::string_view(text));
}
inline RunSpec parse_config(const char* text)
{
    return parse_config(std::string_view(text));
}

/// Overlays patch onto the configuration part of document (manifests are unwrapped first).
nlohmann::json merge_config(nlohmann::json document, const nlohmann::json& patch);

} // namespace dualsim

#endif // DUALSIM_CONFIG_HPP
