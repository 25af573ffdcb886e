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
#include "dualsim/config.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace dualsim
{

using nlohmann::json;

std::string_view to_string(ModelKind model)
{
    switch (model) {
    case ModelKind::Logistic:
        return "logistic";
    case ModelKind::Bertalanffy:
        return "bertalanffy";
    case ModelKind::Gompertz:
        return "gompertz";
    case ModelKind::Kuznetsov:
        return "kuznetsov";
    }
    return "unknown";
}

std::string_view to_string(ParadigmChoice paradigm)
{
    switch (paradigm) {
    case ParadigmChoice::SDS:
        return "sds";
    case ParadigmChoice::ABS:
        return "abs";
    case ParadigmChoice::Both:
        return "both";
    }
    return "unknown";
}

std::string_view to_string(Fix fix)
{
    switch (fix) {
    case Fix::None:
        return "none";
    case Fix::Tumour:
        return "tumour";
    case Fix::Both:
        return "both";
    }
    return "unknown";
}

namespace
{

const std::set<std::string> known_keys{"model", "scenario", "c",      "a",      "b",      "t0",     "e0",
                                       "paradigm", "dt",     "t_end", "grid",   "sample_every", "reps",
                                       "seed",  "method",   "policy", "fix",    "alpha",  "out",    "plot",
                                       "threads"};

[[noreturn]] void fail(const std::string& key, const std::string& message)
{
    throw ConfigError("/" + key + ": " + message);
}

double number(const json& doc, const std::string& key)
{
    const auto& v = doc.at(key);
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
        fail(key, "expected a finite number");
    }
    return v.get<double>();
}

double positive(const json& doc, const std::string& key)
{
    const double v = number(doc, key);
    if (!(v > 0)) {
        fail(key, "expected a number > 0");
    }
    return v;
}

std::uint64_t unsigned_integer(const json& doc, const std::string& key)
{
    const auto& v = doc.at(key);
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(key, "expected a nonnegative integer");
}

std::string text(const json& doc, const std::string& key)
{
    const auto& v = doc.at(key);
    if (!v.is_string()) {
        fail(key, "expected a string");
    }
    return v.get<std::string>();
}

template <typename Enum, std::size_t N>
Enum choice(const json& doc, const std::string& key, const std::pair<const char*, Enum> (&options)[N])
{
    const std::string value = text(doc, key);
    std::string allowed;
    for (const auto& [name, e] : options) {
        if (value == name) {
            return e;
        }
        allowed += allowed.empty() ? name : std::string("|") + name;
    }
    fail(key, "expected one of " + allowed + ", got '" + value + "'");
}

constexpr std::pair<const char*, ModelKind> model_names[] = {{"logistic", ModelKind::Logistic},
                                                             {"bertalanffy", ModelKind::Bertalanffy},
                                                             {"gompertz", ModelKind::Gompertz},
                                                             {"kuznetsov", ModelKind::Kuznetsov}};
constexpr std::pair<const char*, ParadigmChoice> paradigm_names[] = {
    {"sds", ParadigmChoice::SDS}, {"abs", ParadigmChoice::ABS}, {"both", ParadigmChoice::Both}};
constexpr std::pair<const char*, Method> method_names[]       = {{"exact", Method::Exact}, {"tau", Method::TauLeap}};
constexpr std::pair<const char*, RatePolicy> policy_names[]   = {{"live", RatePolicy::Live},
                                                                 {"frozen", RatePolicy::FrozenAtBirth}};
constexpr std::pair<const char*, Fix> fix_names[] = {{"none", Fix::None}, {"tumour", Fix::Tumour}, {"both", Fix::Both}};

GrowthModel growth_model(ModelKind kind)
{
    switch (kind) {
    case ModelKind::Logistic:
        return GrowthModel::Logistic;
    case ModelKind::Bertalanffy:
        return GrowthModel::Bertalanffy;
    case ModelKind::Gompertz:
        return GrowthModel::Gompertz;
    case ModelKind::Kuznetsov:
        break;
    }
    throw ConfigError("kuznetsov is not a one-equation growth model");
}

// Re-raises a library ConfigError under the given field.
template <typename F>
auto at_field(const std::string& key, F&& f)
{
    try {
        return f();
    }
    catch (const ConfigError& e) {
        fail(key, e.what());
    }
}

} // namespace

GrowthLaw RunSpec::law() const
{
    return GrowthLaw::of(growth_model(model), a, b);
}

KuznetsovParams RunSpec::kuznetsov() const
{
    if (model != ModelKind::Kuznetsov) {
        throw ConfigError("one-equation run has no kuznetsov parameters");
    }
    return scenario_preset(scenario);
}

Floors RunSpec::floors() const
{
    switch (fix) {
    case Fix::None:
        return Floors::none();
    case Fix::Tumour:
        return Floors::tumour();
    case Fix::Both:
        return Floors::both();
    }
    return Floors::none();
}

IntegratorConfig RunSpec::integrator() const
{
    IntegratorConfig cfg;
    cfg.dt           = dt;
    cfg.t_end        = t_end;
    cfg.sample_every = sample_every;
    return cfg;
}

Grid RunSpec::output_grid() const
{
    return Grid::covering(t_end, grid);
}

json RunSpec::to_json() const
{
    json doc;
    doc["model"] = to_string(model);
    if (model == ModelKind::Kuznetsov) {
        doc["scenario"] = scenario;
        doc["e0"]       = e0;
    }
    else if (c) {
        doc["c"] = *c;
    }
    else {
        doc["a"] = a;
        doc["b"] = b;
    }
    doc["t0"]           = t0;
    doc["paradigm"]     = to_string(paradigm);
    doc["dt"]           = dt;
    doc["t_end"]        = t_end;
    doc["grid"]         = grid;
    doc["sample_every"] = sample_every;
    doc["reps"]         = reps;
    doc["seed"]         = seed;
    doc["method"]       = to_string(method);
    doc["policy"]       = to_string(policy);
    doc["fix"]          = to_string(fix);
    doc["alpha"]        = alpha;
    doc["out"]          = out;
    doc["plot"]         = plot;
    return doc;
}

RunSpec parse_config(std::string_view source)
{
    json doc;
    try {
        doc = json::parse(source);
    }
    catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON document: ") + e.what());
    }
    return parse_config(doc);
}

RunSpec parse_config(const json& document)
{
    if (!document.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    const json& doc = document.contains("config") ? document.at("config") : document;
    if (!doc.is_object()) {
        throw ConfigError("/config: expected an object");
    }
    for (const auto& [key, value] : doc.items()) {
        if (!known_keys.contains(key)) {
            fail(key, "unknown key");
        }
    }

    RunSpec spec;
    if (!doc.contains("model")) {
        fail("model", "required");
    }
    spec.model = choice(doc, "model", model_names);
    const bool kuznetsov = spec.model == ModelKind::Kuznetsov;

    if (kuznetsov) {
        for (const char* key : {"c", "a", "b"}) {
            if (doc.contains(key)) {
                fail(key, "not applicable to kuznetsov; parameters come from the scenario preset");
            }
        }
        if (!doc.contains("scenario")) {
            fail("scenario", "required for kuznetsov");
        }
        const auto id = unsigned_integer(doc, "scenario");
        spec.scenario = static_cast<int>(std::min<std::uint64_t>(id, 1000));
        at_field("scenario", [&] { return scenario_preset(spec.scenario); });
    }
    else {
        if (doc.contains("scenario")) {
            fail("scenario", "only valid with the kuznetsov model");
        }
        const bool has_ab = doc.contains("a") || doc.contains("b");
        if (doc.contains("c") && has_ab) {
            fail("c", "give either c or a and b, not both");
        }
        if (doc.contains("c")) {
            spec.c         = number(doc, "c");
            const auto law = at_field("c", [&] { return experiment_one_law(growth_model(spec.model), *spec.c); });
            spec.a         = law.a;
            spec.b         = law.b;
        }
        else if (doc.contains("a") && doc.contains("b")) {
            spec.a = number(doc, "a");
            spec.b = number(doc, "b");
            at_field("a", [&] { return spec.law(); });
        }
        else {
            fail(has_ab ? (doc.contains("a") ? "b" : "a") : "c", "one-equation models need either c or both a and b");
        }
    }

    if (doc.contains("paradigm")) {
        spec.paradigm = choice(doc, "paradigm", paradigm_names);
    }

    spec.t0 = kuznetsov ? default_kuznetsov_t0 : 1.0;
    spec.e0 = kuznetsov ? default_kuznetsov_e0 : 0.0;
    if (doc.contains("t0")) {
        spec.t0 = number(doc, "t0");
        if (spec.t0 < 0) {
            fail("t0", "expected a number >= 0");
        }
    }
    if (doc.contains("e0")) {
        if (!kuznetsov) {
            fail("e0", "only valid with the kuznetsov model");
        }
        spec.e0 = number(doc, "e0");
        if (spec.e0 < 0) {
            fail("e0", "expected a number >= 0");
        }
    }
    if (spec.model == ModelKind::Gompertz && !(spec.t0 > 0)) {
        fail("t0", "gompertz requires t0 > 0");
    }
    if (spec.runs_abs()) {
        at_field("t0", [&] { return to_counts(State(spec.t0, spec.e0)); });
    }

    if (doc.contains("dt")) {
        spec.dt = positive(doc, "dt");
    }
    if (doc.contains("t_end")) {
        spec.t_end = positive(doc, "t_end");
    }
    if (doc.contains("grid")) {
        spec.grid = positive(doc, "grid");
    }
    if (doc.contains("sample_every")) {
        spec.sample_every = positive(doc, "sample_every");
    }
    at_field("dt", [&] {
        spec.integrator().validate();
        return 0;
    });
    at_field("grid", [&] { return spec.output_grid(); });

    if (doc.contains("reps")) {
        spec.reps = unsigned_integer(doc, "reps");
        if (spec.reps < 1) {
            fail("reps", "expected an integer >= 1");
        }
    }
    if (doc.contains("seed")) {
        spec.seed = unsigned_integer(doc, "seed");
    }
    if (doc.contains("method")) {
        spec.method = choice(doc, "method", method_names);
    }
    if (doc.contains("policy")) {
        spec.policy = choice(doc, "policy", policy_names);
        if (kuznetsov && spec.policy == RatePolicy::FrozenAtBirth) {
            fail("policy", "frozen-at-birth rates are only defined for one-equation models");
        }
    }
    if (doc.contains("fix")) {
        spec.fix = choice(doc, "fix", fix_names);
        if (!kuznetsov && spec.fix == Fix::Both) {
            fail("fix", "an effector floor needs the kuznetsov model");
        }
    }
    if (spec.runs_abs() && spec.fix != Fix::None && spec.t0 < 1) {
        fail("t0", "tumour floor requires t0 >= 1");
    }
    if (spec.runs_abs() && spec.fix == Fix::Both && spec.e0 < 1) {
        fail("e0", "effector floor requires e0 >= 1");
    }
    if (doc.contains("alpha")) {
        spec.alpha = number(doc, "alpha");
        if (!(spec.alpha > 0 && spec.alpha < 1)) {
            fail("alpha", "expected a number in (0, 1)");
        }
    }
    if (doc.contains("out")) {
        spec.out = text(doc, "out");
        if (spec.out.empty()) {
            fail("out", "expected a nonempty path");
        }
    }
    if (doc.contains("plot")) {
        if (!doc.at("plot").is_boolean()) {
            fail("plot", "expected true or false");
        }
        spec.plot = doc.at("plot").get<bool>();
    }
    if (doc.contains("threads")) {
        const auto threads = unsigned_integer(doc, "threads");
        if (threads > 4096) {
            fail("threads", "expected at most 4096");
        }
        spec.threads = static_cast<unsigned>(threads);
    }
    return spec;
}

json merge_config(json document, const json& patch)
{
    json config = document.is_object() && document.contains("config") ? document.at("config") : std::move(document);
    if (config.is_null()) {
        config = json::object();
    }
    if (!config.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    if (patch.contains("a") || patch.contains("b")) {
        config.erase("c");
    }
    if (patch.contains("c")) {
        config.erase("a");
        config.erase("b");
    }
    if (patch.contains("model") && patch.at("model") != "kuznetsov") {
        config.erase("scenario");
        config.erase("e0");
    }
    for (const auto& [key, value] : patch.items()) {
        config[key] = value;
    }
    return config;
}

} // namespace dualsim
