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
#include "dualsim/abs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <random>
#include <thread>

namespace dualsim
{

std::string_view to_string(RatePolicy policy)
{
    return policy == RatePolicy::Live ? "live" : "frozen";
}

std::string_view to_string(Method method)
{
    return method == Method::Exact ? "exact" : "tau";
}

Counts to_counts(const State& state)
{
    Counts counts;
    for (int i = 0; i < 2; ++i) {
        const double v = state(i);
        if (!std::isfinite(v) || v < 0 || v != std::floor(v) || v > 9.0e15) {
            throw ConfigError("discrete initial state must consist of nonnegative integers");
        }
        counts(i) = static_cast<std::int64_t>(v);
    }
    return counts;
}

ChannelSet make_channels(const GrowthLaw& law)
{
    law.validate();
    ChannelSet set;
    set.populations = 1;
    set.channels.push_back({"tumour_birth",
                            [law](const Counts& x) {
                                if (x(0) <= 0) {
                                    return 0.0;
                                }
                                const double T = static_cast<double>(x(0));
                                return T * detail::percapita_unchecked(law, T).proliferation;
                            },
                            Counts(1, 0),
                            {}});
    set.channels.push_back({"tumour_death",
                            [law](const Counts& x) {
                                if (x(0) <= 0) {
                                    return 0.0;
                                }
                                const double T = static_cast<double>(x(0));
                                return T * detail::percapita_unchecked(law, T).death;
                            },
                            Counts(-1, 0),
                            [law](std::int64_t n) {
                                return detail::percapita_unchecked(law, static_cast<double>(n)).death;
                            }});
    return set;
}

ChannelSet make_channels(const KuznetsovParams& k)
{
    k.validate();
    auto T = [](const Counts& x) {
        return static_cast<double>(x(0));
    };
    auto E = [](const Counts& x) {
        return static_cast<double>(x(1));
    };
    ChannelSet set;
    set.populations = 2;
    set.channels    = {
        {"tumour_birth", [=](const Counts& x) { return k.a * T(x); }, Counts(1, 0), {}},
        {"tumour_death", [=](const Counts& x) { return k.a * k.b * T(x) * T(x); }, Counts(-1, 0), {}},
        {"tumour_kill", [=](const Counts& x) { return k.n * T(x) * E(x); }, Counts(-1, 0), {}},
        {"effector_proliferation", [=](const Counts& x) { return k.p * T(x) * E(x) / (k.g + T(x)); }, Counts(0, 1),
         {}},
        {"effector_interaction_death", [=](const Counts& x) { return k.m * T(x) * E(x); }, Counts(0, -1), {}},
        {"effector_apoptosis", [=](const Counts& x) { return k.d * E(x); }, Counts(0, -1), {}},
        {"effector_influx", [=](const Counts&) { return k.s; }, Counts(0, 1), {}},
    };
    return set;
}

namespace
{

// Agents sharing one frozen per-capita rate, keyed by that rate.
class Cohorts
{
public:
    void add(double rate, std::int64_t n)
    {
        if (!std::isfinite(rate) || rate < 0) {
            throw EngineError("frozen per-capita rate must be finite and >= 0");
        }
        if (n > 0) {
            m_counts[rate] += n;
        }
    }

    double total_rate() const
    {
        double r = 0.0;
        for (const auto& [rate, count] : m_counts) {
            r += static_cast<double>(count) * rate;
        }
        return r;
    }

    // Removes one agent, chosen with probability proportional to its rate; u in [0, total_rate()).
    void remove_one(double u)
    {
        double cum = 0.0;
        auto chosen = m_counts.end();
        for (auto it = m_counts.begin(); it != m_counts.end(); ++it) {
            const double r = static_cast<double>(it->second) * it->first;
            if (r <= 0) {
                continue;
            }
            chosen = it;
            cum += r;
            if (u < cum) {
                break;
            }
        }
        if (chosen == m_counts.end()) {
            throw EngineError("no agent available for a frozen-rate event");
        }
        remove(chosen, 1);
    }

    std::map<double, std::int64_t>& counts()
    {
        return m_counts;
    }

    void remove(std::map<double, std::int64_t>::iterator it, std::int64_t n)
    {
        it->second -= n;
        if (it->second <= 0) {
            m_counts.erase(it);
        }
    }

private:
    std::map<double, std::int64_t> m_counts;
};

// Writes samples according to the recording mode and keeps times strictly increasing.
class Recorder
{
public:
    Recorder(AbsTrajectory& traj, double t_end, double every)
        : m_traj(traj)
        , m_t_end(t_end)
        , m_every(every)
    {
    }

    void start(const Counts& x)
    {
        m_traj.push(0.0, x);
    }

    // x is the state that held up to (but excluding) time t.
    void before_change(double t, const Counts& x)
    {
        if (m_every > 0) {
            emit_grid_until(t, x, false);
        }
    }

    void after_change(double t, const Counts& x)
    {
        if (m_every > 0) {
            return;
        }
        if (t > m_traj.end_time()) {
            m_traj.push(t, x);
        }
        else {
            m_traj.states.back() = x;
        }
    }

    void finish(const Counts& x)
    {
        if (m_every > 0) {
            emit_grid_until(m_t_end, x, true);
        }
        if (m_traj.end_time() < m_t_end) {
            m_traj.push(m_t_end, x);
        }
    }

private:
    void emit_grid_until(double t, const Counts& x, bool inclusive)
    {
        for (;;) {
            const double g = static_cast<double>(m_next) * m_every;
            if (g > m_t_end * (1 + 1e-12) || (inclusive ? g > t : g >= t)) {
                return;
            }
            m_traj.push(std::min(g, m_t_end), x);
            ++m_next;
        }
    }

    AbsTrajectory& m_traj;
    double m_t_end;
    double m_every;
    long long m_next = 1;
};

struct Prepared {
    Counts floor;
    int frozen_index = -1; // channel whose rate is carried by cohorts; -1 when rates are live
};

Prepared prepare(const ChannelSet& set, const Counts& initial, double t_end, const AbsOptions& options)
{
    if (set.populations != 1 && set.populations != 2) {
        throw ConfigError("channel set must describe one or two populations");
    }
    if (set.channels.empty()) {
        throw ConfigError("channel set is empty");
    }
    for (const auto& ch : set.channels) {
        if (!ch.rate) {
            throw ConfigError("channel '" + ch.name + "' has no rate function");
        }
    }
    if (!(t_end > 0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end must be finite and > 0");
    }
    if ((initial.array() < 0).any()) {
        throw ConfigError("initial populations must be nonnegative");
    }
    if (set.populations == 1 && initial(1) != 0) {
        throw ConfigError("one-equation models have no effector population");
    }
    if (options.floors.min_tumour < 0 || options.floors.min_effector < 0) {
        throw ConfigError("floors must be nonnegative");
    }
    if (options.record_every < 0 || !std::isfinite(options.record_every)) {
        throw ConfigError("record_every must be finite and >= 0");
    }
    if (options.population_cap <= 0) {
        throw ConfigError("population cap must be positive");
    }
    Prepared prep;
    prep.floor = options.floors.as_counts();
    if (set.populations == 1) {
        prep.floor(1) = 0;
    }
    if ((initial.array() < prep.floor.array()).any()) {
        throw ConfigError("initial populations lie below the configured floors");
    }
    if (options.policy == RatePolicy::FrozenAtBirth) {
        if (set.populations != 1) {
            throw ConfigError("frozen-at-birth rates are only defined for one-equation models");
        }
        for (std::size_t j = 0; j < set.channels.size(); ++j) {
            const auto& ch = set.channels[j];
            if (ch.frozen_percapita) {
                if (prep.frozen_index >= 0) {
                    throw ConfigError("at most one channel may carry frozen rates");
                }
                prep.frozen_index = static_cast<int>(j);
            }
        }
        for (std::size_t j = 0; j < set.channels.size(); ++j) {
            if (static_cast<int>(j) != prep.frozen_index && set.channels[j].delta(0) < 0) {
                throw ConfigError("under frozen-at-birth rates only the frozen channel may remove tumour agents");
            }
        }
    }
    return prep;
}

void evaluate_rates(const ChannelSet& set, const Counts& x, const Prepared& prep, const Cohorts& cohorts,
                    std::vector<double>& rates)
{
    for (std::size_t j = 0; j < set.channels.size(); ++j) {
        const auto& ch = set.channels[j];
        const Counts next = x + ch.delta;
        if ((next.array() < prep.floor.array()).any()) {
            rates[j] = 0.0;
            continue;
        }
        const double r = static_cast<int>(j) == prep.frozen_index ? cohorts.total_rate() : ch.rate(x);
        if (!(r >= 0) || !std::isfinite(r)) {
            throw EngineError("channel '" + ch.name + "' produced an invalid rate " + std::to_string(r));
        }
        rates[j] = r;
    }
}

void check_cap(const Counts& x, std::int64_t cap, double t)
{
    if ((x.array() > cap).any()) {
        throw PopulationCapError("population cap " + std::to_string(cap) + " exceeded at t = " + std::to_string(t) +
                                 " (tumour " + std::to_string(x(0)) + ", effector " + std::to_string(x(1)) + ")");
    }
}

Cohorts initial_cohorts(const ChannelSet& set, const Counts& initial, const Prepared& prep)
{
    Cohorts cohorts;
    if (prep.frozen_index >= 0 && initial(0) > 0) {
        const auto& ch = set.channels[static_cast<std::size_t>(prep.frozen_index)];
        cohorts.add(ch.frozen_percapita(initial(0)), initial(0));
    }
    return cohorts;
}

AbsTrajectory new_trajectory(const ChannelSet& set)
{
    AbsTrajectory traj;
    traj.populations = set.populations;
    traj.paradigm    = Paradigm::ABS;
    return traj;
}

} // namespace

AbsTrajectory simulate_exact(const ChannelSet& set, const Counts& initial, double t_end, std::uint64_t seed,
                             const AbsOptions& options)
{
    const Prepared prep = prepare(set, initial, t_end, options);
    std::mt19937_64 gen(seed);
    Cohorts cohorts = initial_cohorts(set, initial, prep);

    AbsTrajectory traj = new_trajectory(set);
    Recorder recorder(traj, t_end, options.record_every);
    Counts x = initial;
    recorder.start(x);

    std::vector<double> rates(set.channels.size());
    double t = 0.0;
    for (;;) {
        evaluate_rates(set, x, prep, cohorts, rates);
        double total = 0.0;
        for (double r : rates) {
            total += r;
        }
        if (total <= 0.0) {
            break;
        }
        const double t_next = t + std::exponential_distribution<double>(total)(gen);
        if (t_next > t_end) {
            break;
        }
        const double u = std::uniform_real_distribution<double>(0.0, total)(gen);
        std::size_t chosen = rates.size();
        double before      = 0.0;
        double cum         = 0.0;
        for (std::size_t j = 0; j < rates.size(); ++j) {
            if (rates[j] <= 0.0) {
                continue;
            }
            chosen = j;
            before = cum;
            cum += rates[j];
            if (u < cum) {
                break;
            }
        }

        recorder.before_change(t_next, x);
        const Channel& ch = set.channels[chosen];
        if (static_cast<int>(chosen) == prep.frozen_index) {
            cohorts.remove_one(std::min(u - before, rates[chosen]));
        }
        x += ch.delta;
        if (prep.frozen_index >= 0 && ch.delta(0) > 0) {
            const auto& frozen = set.channels[static_cast<std::size_t>(prep.frozen_index)];
            cohorts.add(frozen.frozen_percapita(x(0)), ch.delta(0));
        }
        check_cap(x, options.population_cap, t_next);
        t = t_next;
        recorder.after_change(t, x);
    }
    recorder.finish(x);
    traj.termination = x(0) == 0 ? Termination::Extinct : Termination::Completed;
    return traj;
}

AbsTrajectory simulate_tau_leap(const ChannelSet& set, const Counts& initial, double t_end, double dt,
                                std::uint64_t seed, const AbsOptions& options)
{
    if (!(dt > 0) || !std::isfinite(dt)) {
        throw ConfigError("tau-leap step must be finite and > 0");
    }
    const Prepared prep = prepare(set, initial, t_end, options);
    std::mt19937_64 gen(seed);
    Cohorts cohorts = initial_cohorts(set, initial, prep);
    const double cap = static_cast<double>(options.population_cap);

    AbsTrajectory traj = new_trajectory(set);
    Recorder recorder(traj, t_end, options.record_every);
    Counts x = initial;
    recorder.start(x);

    auto poisson = [&](double mean) -> std::int64_t {
        if (mean <= 0.0) {
            return 0;
        }
        if (mean > cap) {
            throw PopulationCapError("population cap " + std::to_string(options.population_cap) +
                                     " exceeded: expected event count " + std::to_string(mean) + " in one step");
        }
        return std::poisson_distribution<std::int64_t>(mean)(gen);
    };

    std::vector<double> rates(set.channels.size());
    std::vector<std::pair<double, std::int64_t>> removals;
    const long long n_steps = std::max(1LL, static_cast<long long>(std::ceil(t_end / dt - 1e-9)));
    double t = 0.0;
    for (long long i = 1; i <= n_steps; ++i) {
        const double t_next = i == n_steps ? t_end : static_cast<double>(i) * dt;
        const double h      = t_next - t;
        evaluate_rates(set, x, prep, cohorts, rates);
        double total = 0.0;
        for (double r : rates) {
            total += r;
        }
        if (total <= 0.0) {
            break;
        }

        Counts change       = Counts::Zero();
        std::int64_t births = 0;
        removals.clear();
        for (std::size_t j = 0; j < rates.size(); ++j) {
            if (rates[j] <= 0.0) {
                continue;
            }
            const Channel& ch = set.channels[j];
            if (static_cast<int>(j) == prep.frozen_index) {
                for (const auto& [rate, count] : cohorts.counts()) {
                    const std::int64_t k = std::min(count, poisson(static_cast<double>(count) * rate * h));
                    removals.emplace_back(rate, k);
                    change += k * ch.delta;
                }
                continue;
            }
            const std::int64_t k = poisson(rates[j] * h);
            change += k * ch.delta;
            if (prep.frozen_index >= 0 && ch.delta(0) > 0) {
                births += k * ch.delta(0);
            }
        }

        Counts next = x + change;
        if (prep.frozen_index >= 0) {
            // Give back removals until the tumour floor holds, then update the cohorts.
            std::int64_t deficit = prep.floor(0) - next(0);
            for (auto& [rate, k] : removals) {
                if (deficit <= 0) {
                    break;
                }
                const std::int64_t back = std::min(k, deficit);
                k -= back;
                deficit -= back;
                next(0) += back;
            }
            for (const auto& [rate, k] : removals) {
                if (k > 0) {
                    cohorts.remove(cohorts.counts().find(rate), k);
                }
            }
        }
        next = next.cwiseMax(prep.floor);
        if (prep.frozen_index >= 0 && births > 0) {
            const auto& frozen = set.channels[static_cast<std::size_t>(prep.frozen_index)];
            cohorts.add(frozen.frozen_percapita(next(0)), births);
        }
        check_cap(next, options.population_cap, t_next);
        if (next != x) {
            recorder.before_change(t_next, x);
            x = next;
            recorder.after_change(t_next, x);
        }
        t = t_next;
    }
    recorder.finish(x);
    traj.termination = x(0) == 0 ? Termination::Extinct : Termination::Completed;
    return traj;
}

Ensemble run_ensemble(const EnsembleSpec& spec, std::size_t reps, std::uint64_t base_seed, unsigned threads)
{
    if (reps < 1) {
        throw ConfigError("an ensemble needs at least one replicate");
    }
    prepare(spec.channels, spec.initial, spec.t_end, spec.options);
    if (spec.method == Method::TauLeap && (!(spec.tau_dt > 0) || !std::isfinite(spec.tau_dt))) {
        throw ConfigError("tau-leap step must be finite and > 0");
    }

    Ensemble ens;
    ens.base_seed = base_seed;
    ens.replicates.resize(reps);
    std::vector<std::exception_ptr> errors(reps);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= reps || failed.load()) {
                return;
            }
            const std::uint64_t seed = base_seed + i;
            try {
                AbsTrajectory traj =
                    spec.method == Method::Exact
                        ? simulate_exact(spec.channels, spec.initial, spec.t_end, seed, spec.options)
                        : simulate_tau_leap(spec.channels, spec.initial, spec.t_end, spec.tau_dt, seed, spec.options);
                ens.replicates[i] = Replicate{i, seed, std::move(traj)};
            }
            catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    n_threads          = static_cast<unsigned>(std::min<std::size_t>(n_threads, reps));
    if (n_threads <= 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (unsigned w = 0; w < n_threads; ++w) {
            pool.emplace_back(worker);
        }
    }

    for (std::size_t i = 0; i < reps; ++i) {
        if (errors[i]) {
            std::string what = "unknown error";
            try {
                std::rethrow_exception(errors[i]);
            }
            catch (const std::exception& e) {
                what = e.what();
            }
            catch (...) {
            }
            throw ReplicateError(i, base_seed + i, what, errors[i]);
        }
    }
    return ens;
}

} // namespace dualsim
