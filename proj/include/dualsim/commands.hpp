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
#ifndef DUALSIM_COMMANDS_HPP
#define DUALSIM_COMMANDS_HPP

#include "dualsim/abs.hpp"
#include "dualsim/config.hpp"
#include "dualsim/output.hpp"
#include "dualsim/stats.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dualsim
{

/// Deterministic run of the configured model.
SdsTrajectory run_sds(const RunSpec& spec);

/// Engine inputs for the configured agent-based ensemble; replicates record on the output grid.
EnsembleSpec ensemble_spec(const RunSpec& spec);

/**
 * Throws PopulationCapError when the mean-field trajectory of the configured model crosses the
 * agent population cap before t_end, since the discrete run would then be infeasible.
 */
void check_feasible(const RunSpec& spec);

/// Feasibility check followed by the seeded ensemble.
Ensemble run_abs(const RunSpec& spec);

/// Everything a command computed, with its files staged but not yet written.
struct Outcome {
    StagedOutput files;
    std::optional<SdsTrajectory> sds;
    std::optional<Ensemble> ensemble;
    std::optional<ComparisonReport> report;
};

/// sds.csv and/or abs_ensemble.csv, run.svg when plotting, and manifest.json.
Outcome plan_run(const RunSpec& spec);

/// report.json, comparison.csv, comparison.svg and manifest.json; requires paradigm both.
Outcome plan_compare(const RunSpec& spec);

std::vector<std::filesystem::path> cmd_run(const RunSpec& spec);
std::vector<std::filesystem::path> cmd_compare(const RunSpec& spec);

/// Reproducibility record: the canonical configuration, resolved parameters, seeds and results.
nlohmann::json manifest(const RunSpec& spec, const Outcome& outcome, const std::string& command);

/// Plain-text table of the preset Kuznetsov scenarios.
std::string list_scenarios();

} // namespace dualsim

#endif // DUALSIM_COMMANDS_HPP
