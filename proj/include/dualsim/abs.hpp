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
#ifndef DUALSIM_ABS_HPP
#define DUALSIM_ABS_HPP

#include "dualsim/model.hpp"
#include "dualsim/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dualsim
{

/// One event type of the discrete population process.
struct Channel {
    std::string name;
    /// Total event rate (per day) in the given state.
    std::function<double(const Counts&)> rate;
    /// Change applied to (tumour, effector) when the event fires.
    Counts delta = Counts::Zero();
    /// Per-capita rate assigned to a tumour agent created while the tumour population is N.
    /// Only consulted under RatePolicy::FrozenAtBirth; empty for channels that are never frozen.
    std::function<double(std::int64_t)> frozen_percapita;
};

struct ChannelSet {
    int populations = 1;
    std::vector<Channel> channels;
};

/// Tumour birth (T p(T)) and tumour death (T d(T)); the death channel can be frozen at birth.
ChannelSet make_channels(const GrowthLaw& law);

/// The seven Kuznetsov events: tumour birth, intrinsic death and kill; effector proliferation,
/// interaction death, apoptosis and influx.
ChannelSet make_channels(const KuznetsovParams& params);

enum class RatePolicy
{
    Live,
    FrozenAtBirth,
};

enum class Method
{
    Exact,
    TauLeap,
};

std::string_view to_string(RatePolicy policy);
std::string_view to_string(Method method);

/// Lower bounds on the discrete populations. (0,0) no fix, (1,0) tumour floor, (1,1) both.
struct Floors {
    std::int64_t min_tumour   = 0;
    std::int64_t min_effector = 0;

    static Floors none()
    {
        return {0, 0};
    }
    static Floors tumour()
    {
        return {1, 0};
    }
    static Floors both()
    {
        return {1, 1};
    }

    Counts as_counts() const
    {
        return {min_tumour, min_effector};
    }
    bool operator==(const Floors&) const = default;
};

inline constexpr std::int64_t default_population_cap = 1'000'000'000'000;

struct AbsOptions {
    RatePolicy policy = RatePolicy::Live;
    Floors floors;
    /// 0 records a sample after every event. A positive spacing records only the states at
    /// k * record_every (and t_end), which equals step-sampling the full record on that grid.
    double record_every        = 0.0;
    std::int64_t population_cap = default_population_cap;
};

/// Converts a real-valued state into counts; throws ConfigError unless every component is a
/// nonnegative integer.
Counts to_counts(const State& state);

/**
 * Gillespie direct method over integer populations.
 *
 * A channel whose delta would take a population below its floor (or below zero) contributes
 * rate zero. When the total rate vanishes the state is held until t_end.
 */
AbsTrajectory simulate_exact(const ChannelSet& channels, const Counts& initial, double t_end, std::uint64_t seed,
                             const AbsOptions& options = {});

/// Fixed-step tau-leaping: Poisson event counts per channel and step, populations clamped to floors.
AbsTrajectory simulate_tau_leap(const ChannelSet& channels, const Counts& initial, double t_end, double dt,
                                std::uint64_t seed, const AbsOptions& options = {});

struct EnsembleSpec {
    ChannelSet channels;
    Counts initial = Counts::Zero();
    double t_end   = 100.0;
    Method method  = Method::Exact;
    double tau_dt  = 0.001;
    AbsOptions options;
};

struct Replicate {
    std::size_t index;
    std::uint64_t seed;
    AbsTrajectory trajectory;
};

struct Ensemble {
    std::uint64_t base_seed = 0;
    std::vector<Replicate> replicates;

    std::size_t size() const
    {
        return replicates.size();
    }
    int populations() const
    {
        return replicates.empty() ? 0 : replicates.front().trajectory.populations;
    }
};

inline constexpr std::size_t default_replicates = 50;

/// Runs reps independent replicates seeded base_seed + index, in parallel when threads != 1.
/// Results are ordered by replicate index regardless of completion order.
Ensemble run_ensemble(const EnsembleSpec& spec, std::size_t reps = default_replicates, std::uint64_t base_seed = 0,
                      unsigned threads = 0);

} // namespace dualsim

#endif // DUALSIM_ABS_HPP
