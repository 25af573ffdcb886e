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
#include "dualsim/model.hpp"
#include "dualsim/trajectory.hpp"

#include <array>

namespace dualsim
{

std::string_view to_string(GrowthModel model)
{
    switch (model) {
    case GrowthModel::Logistic:
        return "logistic";
    case GrowthModel::Bertalanffy:
        return "bertalanffy";
    case GrowthModel::Gompertz:
        return "gompertz";
    }
    return "unknown";
}

GrowthModel growth_model_from_string(std::string_view name)
{
    if (name == "logistic") {
        return GrowthModel::Logistic;
    }
    if (name == "bertalanffy") {
        return GrowthModel::Bertalanffy;
    }
    if (name == "gompertz") {
        return GrowthModel::Gompertz;
    }
    throw ConfigError("unknown growth model '" + std::string(name) + "'");
}

std::string_view to_string(Termination termination)
{
    switch (termination) {
    case Termination::Completed:
        return "completed";
    case Termination::BlowUp:
        return "blowup";
    case Termination::Extinct:
        return "extinct";
    }
    return "unknown";
}

std::string_view to_string(Paradigm paradigm)
{
    return paradigm == Paradigm::SDS ? "sds" : "abs";
}

KuznetsovParams scenario_preset(int id)
{
    struct Row {
        double b, d, s;
    };
    // clang-format off
    static constexpr std::array<Row, 4> rows{{
        {0.002, 0.1908, 0.318},
        {0.004, 2.0,    0.318},
        {0.002, 0.3743, 0.1181},
        {0.002, 0.3743, 0.0},
    }};
    // clang-format on
    if (id < 1 || id > static_cast<int>(rows.size())) {
        throw ConfigError("unknown scenario " + std::to_string(id) + " (expected 1..4)");
    }
    const Row& row = rows[static_cast<std::size_t>(id - 1)];
    KuznetsovParams k;
    k.a        = 1.636;
    k.g        = 20.19;
    k.m        = 0.00311;
    k.n        = 1.0;
    k.p        = 1.131;
    k.b        = row.b;
    k.d        = row.d;
    k.s        = row.s;
    k.scenario = id;
    return k;
}

GrowthLaw experiment_one_law(GrowthModel model, double c)
{
    if (!(c > 1) || !std::isfinite(c)) {
        throw ConfigError("ratio c = a/b must be finite and > 1");
    }
    return GrowthLaw::of(model, 1.0, 1.0 / c);
}

} // namespace dualsim
