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
#include "dualsim/config.hpp"
#include "dualsim/error.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace
{

using nlohmann::json;

struct Flags {
    std::string config;
    std::optional<std::string> model, paradigm, method, policy, fix, out;
    std::optional<int> scenario;
    std::optional<double> c, a, b, t0, e0, t_end, dt, grid, alpha;
    std::optional<std::uint64_t> reps, seed;
    std::optional<unsigned> threads;
    bool plot = false;
};

void add_options(CLI::App& cmd, Flags& f)
{
    cmd.add_option("--config", f.config, "JSON configuration or manifest");
    cmd.add_option("--model", f.model, "logistic, bertalanffy, gompertz or kuznetsov");
    cmd.add_option("--scenario", f.scenario, "Kuznetsov scenario 1..4");
    cmd.add_option("--paradigm", f.paradigm, "sds, abs or both");
    cmd.add_option("--c", f.c, "ratio a/b with a = 1");
    cmd.add_option("--a", f.a, "proliferation rate");
    cmd.add_option("--b", f.b, "death rate");
    cmd.add_option("--t0", f.t0, "initial tumour cells");
    cmd.add_option("--e0", f.e0, "initial effector cells");
    cmd.add_option("--t-end", f.t_end, "horizon in days");
    cmd.add_option("--dt", f.dt, "integration and tau step in days");
    cmd.add_option("--grid", f.grid, "output grid spacing in days");
    cmd.add_option("--reps", f.reps, "agent-based replicates");
    cmd.add_option("--seed", f.seed, "base seed");
    cmd.add_option("--method", f.method, "exact or tau");
    cmd.add_option("--policy", f.policy, "live or frozen");
    cmd.add_option("--fix", f.fix, "none, tumour or both");
    cmd.add_option("--alpha", f.alpha, "significance level");
    cmd.add_option("--out", f.out, "output directory");
    cmd.add_option("--threads", f.threads, "worker threads, 0 for all cores");
    cmd.add_flag("--plot", f.plot, "also write an SVG plot");
}

json patch_of(const Flags& f)
{
    json patch = json::object();
    auto put   = [&](const char* key, const auto& value) {
        if (value) {
            patch[key] = *value;
        }
    };
    put("model", f.model);
    put("scenario", f.scenario);
    put("paradigm", f.paradigm);
    put("c", f.c);
    put("a", f.a);
    put("b", f.b);
    put("t0", f.t0);
    put("e0", f.e0);
    put("t_end", f.t_end);
    put("dt", f.dt);
    put("grid", f.grid);
    put("reps", f.reps);
    put("seed", f.seed);
    put("method", f.method);
    put("policy", f.policy);
    put("fix", f.fix);
    put("alpha", f.alpha);
    put("out", f.out);
    put("threads", f.threads);
    if (f.plot) {
        patch["plot"] = true;
    }
    return patch;
}

dualsim::RunSpec resolve(const Flags& f)
{
    json base = json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config, std::ios::binary);
        if (!in) {
            throw dualsim::IoError("cannot read configuration '" + f.config + "'");
        }
        std::stringstream text;
        text << in.rdbuf();
        try {
            base = json::parse(text.str());
        }
        catch (const json::parse_error& e) {
            throw dualsim::ConfigError(f.config + ": malformed JSON: " + e.what());
        }
    }
    return dualsim::parse_config(dualsim::merge_config(std::move(base), patch_of(f)));
}

void report(const std::vector<std::filesystem::path>& files)
{
    for (const auto& path : files) {
        std::cout << "wrote " << path.string() << '\n';
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic and agent-based tumour growth simulations"};
    app.require_subcommand(1);
    Flags run_flags;
    Flags compare_flags;
    auto* run     = app.add_subcommand("run", "run the configured paradigm(s) and write trajectories");
    auto* compare = app.add_subcommand("compare", "compare deterministic and agent-based results");
    auto* list    = app.add_subcommand("list-scenarios", "print the preset Kuznetsov scenarios");
    add_options(*run, run_flags);
    add_options(*compare, compare_flags);

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (list->parsed()) {
            std::cout << dualsim::list_scenarios();
        }
        else if (run->parsed()) {
            report(dualsim::cmd_run(resolve(run_flags)));
        }
        else if (compare->parsed()) {
            report(dualsim::cmd_compare(resolve(compare_flags)));
        }
        return 0;
    }
    catch (const dualsim::ConfigError& e) {
        std::cerr << "dualsim: configuration error: " << e.what() << '\n';
        return 2;
    }
    catch (const dualsim::EngineError& e) {
        std::cerr << "dualsim: engine error: " << e.what() << '\n';
        return 3;
    }
    catch (const dualsim::IoError& e) {
        std::cerr << "dualsim: i/o error: " << e.what() << '\n';
        return 4;
    }
    catch (const std::exception& e) {
        std::cerr << "dualsim: internal error: " << e.what() << '\n';
        return 3;
    }
}
