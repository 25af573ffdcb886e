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
#include "dualsim/commands.hpp"

#include "dualsim/error.hpp"
#include "dualsim/sds.hpp"
#include "dualsim/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dualsim
{

using nlohmann::json;

SdsTrajectory run_sds(const RunSpec& spec)
{
    const auto cfg = spec.integrator();
    if (spec.one_equation()) {
        return integrate(spec.law(), spec.t0, cfg);
    }
    return integrate(spec.kuznetsov(), State(spec.t0, spec.e0), cfg);
}

EnsembleSpec ensemble_spec(const RunSpec& spec)
{
    EnsembleSpec ens;
    ens.channels             = spec.one_equation() ? make_channels(spec.law()) : make_channels(spec.kuznetsov());
    ens.initial              = to_counts(State(spec.t0, spec.one_equation() ? 0.0 : spec.e0));
    ens.t_end                = spec.t_end;
    ens.method               = spec.method;
    ens.tau_dt               = spec.dt;
    ens.options.policy       = spec.policy;
    ens.options.floors       = spec.floors();
    ens.options.record_every = spec.grid;
    return ens;
}

void check_feasible(const RunSpec& spec)
{
    auto cfg             = spec.integrator();
    cfg.blowup_threshold = static_cast<double>(default_population_cap);
    const auto traj      = spec.one_equation() ? integrate(spec.law(), spec.t0, cfg)
                                               : integrate(spec.kuznetsov(), State(spec.t0, spec.e0), cfg);
    if (traj.termination == Termination::BlowUp) {
        char when[32];
        std::snprintf(when, sizeof when, "%.3f", traj.end_time());
        throw PopulationCapError("population cap of 1e12 agents: the mean-field " + std::string(to_string(spec.model)) +
                                 " trajectory exceeds it by t = " + when +
                                 " days, so the agent-based run is infeasible at this scale");
    }
}

Ensemble run_abs(const RunSpec& spec)
{
    check_feasible(spec);
    return run_ensemble(ensemble_spec(spec), spec.reps, spec.seed, spec.threads);
}

namespace
{

std::vector<PlotSeries> ensemble_series(const Ensemble& ensemble, const Grid& grid)
{
    const auto summary = ensemble_mean(ensemble, grid);
    std::vector<PlotSeries> out;
    out.push_back({"ABS mean tumour", summary.mean.values.col(0), Axis::Left});
    if (summary.mean.populations() > 1) {
        out.push_back({"ABS mean effector", summary.mean.values.col(1), Axis::Right});
    }
    return out;
}

std::vector<PlotSeries> sds_series(const SdsTrajectory& sds, const Grid& grid)
{
    const auto series = sample_on_grid(sds, grid, Interpolation::Linear);
    std::vector<PlotSeries> out;
    out.push_back({"SDS tumour", series.values.col(0), Axis::Left});
    if (series.populations() > 1) {
        out.push_back({"SDS effector", series.values.col(1), Axis::Right});
    }
    return out;
}

// The output grid, shortened to the deterministic run when it ended early.
Grid plot_grid(const RunSpec& spec, const std::optional<SdsTrajectory>& sds)
{
    const Grid grid = spec.output_grid();
    if (!sds || sds->end_time() >= grid.end()) {
        return grid;
    }
    for (double spacing : {spec.grid, spec.sample_every, spec.dt}) {
        const auto points = static_cast<std::size_t>(std::floor(sds->end_time() / spacing + 1e-9)) + 1;
        if (points >= 2) {
            return Grid{spacing, points};
        }
    }
    throw EngineError("deterministic run ended before a plot could be drawn");
}

std::string title(const RunSpec& spec)
{
    std::string text(to_string(spec.model));
    if (!spec.one_equation()) {
        text += " scenario " + std::to_string(spec.scenario);
    }
    if (spec.fix != Fix::None) {
        text += std::string(", fix ") + std::string(to_string(spec.fix));
    }
    if (spec.policy == RatePolicy::FrozenAtBirth) {
        text += ", frozen rates";
    }
    return text;
}

json metadata(const RunSpec& spec)
{
    const Floors floors = spec.floors();
    json meta           = {{"model", std::string(to_string(spec.model))},
                           {"policy", std::string(to_string(spec.policy))},
                           {"method", std::string(to_string(spec.method))},
                           {"fix", std::string(to_string(spec.fix))},
                           {"floors", {{"tumour", floors.min_tumour}, {"effector", floors.min_effector}}},
                           {"reps", spec.reps},
                           {"base_seed", spec.seed}};
    if (!spec.one_equation()) {
        meta["scenario"] = spec.scenario;
    }
    return meta;
}

void finish(const RunSpec& spec, Outcome& outcome, const std::string& command)
{
    std::vector<std::string> names;
    for (const auto& [name, content] : outcome.files.files()) {
        names.push_back(name);
    }
    auto doc       = manifest(spec, outcome, command);
    doc["outputs"] = names;
    outcome.files.add("manifest.json", dump_json(doc));
}

} // namespace

json manifest(const RunSpec& spec, const Outcome& outcome, const std::string& command)
{
    json derived;
    if (spec.one_equation()) {
        const auto law = spec.law();
        derived["law"] = {{"kind", law.kind == LawKind::Gompertz ? "gompertz" : "power_law"},
                          {"a", law.a},
                          {"b", law.b},
                          {"alpha", law.alpha},
                          {"beta", law.beta}};
    }
    else {
        const auto k          = spec.kuznetsov();
        derived["kuznetsov"] = {{"a", k.a}, {"b", k.b}, {"g", k.g}, {"m", k.m},
                                {"n", k.n}, {"p", k.p}, {"d", k.d}, {"s", k.s}};
    }
    const Grid grid   = spec.output_grid();
    derived["grid"]   = {{"spacing", grid.spacing}, {"size", grid.size}};
    derived["floors"] = metadata(spec)["floors"];
    derived["population_cap"] = default_population_cap;
    if (spec.method == Method::TauLeap) {
        derived["tau_dt"] = spec.dt;
    }

    json seeds = {{"base", spec.seed}, {"replicates", json::array()}};
    json results;
    if (outcome.sds) {
        results["sds"] = {{"termination", std::string(to_string(outcome.sds->termination))},
                          {"end_time", outcome.sds->end_time()},
                          {"samples", outcome.sds->size()}};
    }
    if (outcome.ensemble) {
        std::size_t extinct = 0;
        for (const auto& rep : outcome.ensemble->replicates) {
            seeds["replicates"].push_back(rep.seed);
            extinct += rep.trajectory.termination == Termination::Extinct ? 1 : 0;
        }
        results["abs"] = {{"replicates", outcome.ensemble->size()}, {"extinct", extinct}};
    }
    return {{"dualsim", "0.1.0"},
            {"command", command},
            {"config", spec.to_json()},
            {"derived", std::move(derived)},
            {"seeds", std::move(seeds)},
            {"results", std::move(results)}};
}

Outcome plan_run(const RunSpec& spec)
{
    Outcome outcome{StagedOutput(spec.out), std::nullopt, std::nullopt, std::nullopt};
    if (spec.runs_sds()) {
        outcome.sds = run_sds(spec);
        outcome.files.add("sds.csv", sds_csv(*outcome.sds));
    }
    if (spec.runs_abs()) {
        outcome.ensemble = run_abs(spec);
        outcome.files.add("abs_ensemble.csv", ensemble_csv(*outcome.ensemble, spec.output_grid()));
    }
    if (spec.plot) {
        const Grid grid = plot_grid(spec, outcome.sds);
        std::vector<PlotSeries> series;
        if (outcome.sds) {
            series = sds_series(*outcome.sds, grid);
        }
        if (outcome.ensemble) {
            auto more = ensemble_series(*outcome.ensemble, grid);
            series.insert(series.end(), more.begin(), more.end());
        }
        PlotAxes axes;
        axes.title = title(spec);
        outcome.files.add("run.svg", emit_svg_plot(grid, series, axes));
    }
    finish(spec, outcome, "run");
    return outcome;
}

Outcome plan_compare(const RunSpec& spec)
{
    if (spec.paradigm != ParadigmChoice::Both) {
        throw ConfigError("/paradigm: compare requires paradigm both");
    }
    Outcome outcome{StagedOutput(spec.out), std::nullopt, std::nullopt, std::nullopt};
    outcome.sds = run_sds(spec);
    if (outcome.sds->termination == Termination::BlowUp) {
        char when[32];
        std::snprintf(when, sizeof when, "%.3f", outcome.sds->end_time());
        throw EngineError(std::string("deterministic run blew up at t = ") + when +
                          " days; there is no finite series to compare");
    }
    outcome.ensemble = run_abs(spec);

    const Grid grid = spec.output_grid();
    outcome.report  = compare(*outcome.sds, *outcome.ensemble, grid, spec.alpha);

    json report        = to_json(*outcome.report);
    report["metadata"] = metadata(spec);
    outcome.files.add("report.json", dump_json(report));
    outcome.files.add("comparison.csv", comparison_csv(*outcome.report));

    std::vector<PlotSeries> series;
    for (const auto& pop : outcome.report->populations) {
        const Axis axis = pop.population == "tumour" ? Axis::Left : Axis::Right;
        series.push_back({"SDS " + pop.population, pop.sds, axis});
        series.push_back({"ABS mean " + pop.population, pop.abs_mean, axis});
    }
    PlotAxes axes;
    axes.title = title(spec);
    outcome.files.add("comparison.svg", emit_svg_plot(grid, series, axes));
    finish(spec, outcome, "compare");
    return outcome;
}

std::vector<std::filesystem::path> cmd_run(const RunSpec& spec)
{
    return plan_run(spec).files.commit();
}

std::vector<std::filesystem::path> cmd_compare(const RunSpec& spec)
{
    return plan_compare(spec).files.commit();
}

std::string list_scenarios()
{
    std::string out = "scenario,a,b,g,m,n,p,d,s\n";
    for (int id = 1; id <= 4; ++id) {
        const auto k = scenario_preset(id);
        out += std::to_string(id);
        for (double v : {k.a, k.b, k.g, k.m, k.n, k.p, k.d, k.s}) {
            out += ',';
            out += format_value(v);
        }
        out += '\n';
    }
    return out;
}

} // namespace dualsim
