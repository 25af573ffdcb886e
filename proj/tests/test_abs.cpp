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
#include "dualsim/stats.hpp"

#include "birth_death_oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace dualsim;

namespace
{

ChannelSet death_only(double b)
{
    ChannelSet set;
    set.channels.push_back({"death", [b](const Counts& x) { return b * static_cast<double>(x(0)); }, Counts(-1, 0), {}});
    return set;
}

struct Moments {
    double mean;
    double standard_error;
};

Moments moments(const std::vector<double>& v)
{
    const double n    = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss         = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

std::int64_t value_at(const AbsTrajectory& traj, double t)
{
    auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
    return traj.states[static_cast<std::size_t>(it - traj.times.begin()) - 1](0);
}

// Floors realised by thinning: draw from the unrestricted rates and drop events that would
// cross a floor. Independent from the rate-zeroing path in simulate_exact.
std::int64_t veto_simulation(const ChannelSet& set, std::int64_t T0, std::int64_t floor, double t_end,
                             std::mt19937_64& gen)
{
    Counts x(T0, 0);
    double t = 0.0;
    std::vector<double> rates(set.channels.size());
    for (;;) {
        double total = 0.0;
        for (std::size_t j = 0; j < rates.size(); ++j) {
            rates[j] = set.channels[j].rate(x);
            total += rates[j];
        }
        if (total <= 0.0) {
            return x(0);
        }
        t += std::exponential_distribution<double>(total)(gen);
        if (t > t_end) {
            return x(0);
        }
        std::discrete_distribution<std::size_t> pick(rates.begin(), rates.end());
        const Counts next = x + set.channels[pick(gen)].delta;
        if (next(0) >= floor) {
            x = next;
        }
    }
}

} // namespace

TEST(TestChannels, oneEquationShape)
{
    const auto set = make_channels(GrowthLaw::logistic(1.0, 0.2));
    ASSERT_EQ(set.channels.size(), 2u);
    EXPECT_EQ(set.populations, 1);
    const Counts x(5, 0);
    EXPECT_DOUBLE_EQ(set.channels[0].rate(x), 5.0);
    EXPECT_DOUBLE_EQ(set.channels[1].rate(x), 5.0);
    EXPECT_DOUBLE_EQ(set.channels[1].frozen_percapita(5), 1.0);
    EXPECT_FALSE(set.channels[0].frozen_percapita);
    EXPECT_EQ(set.channels[0].rate(Counts(0, 0)), 0.0);
    // Gompertz must not evaluate ln 0.
    const auto gompertz = make_channels(GrowthLaw::gompertz(1.0, 0.5));
    EXPECT_EQ(gompertz.channels[1].rate(Counts(0, 0)), 0.0);
    EXPECT_EQ(gompertz.channels[1].rate(Counts(1, 0)), 0.0);
}

TEST(TestChannels, kuznetsovShape)
{
    const auto k   = scenario_preset(1);
    const auto set = make_channels(k);
    ASSERT_EQ(set.channels.size(), 7u);
    EXPECT_EQ(set.populations, 2);
    const Counts x(10, 3);
    const double T = 10, E = 3;
    const double expected[] = {k.a * T,       k.a * k.b * T * T, k.n * T * E, k.p * T * E / (k.g + T),
                               k.m * T * E,   k.d * E,           k.s};
    for (std::size_t j = 0; j < 7; ++j) {
        EXPECT_DOUBLE_EQ(set.channels[j].rate(x), expected[j]) << set.channels[j].name;
    }
    // Net drift of the channels reproduces the deterministic right-hand side.
    Eigen::Vector2d drift = Eigen::Vector2d::Zero();
    for (const auto& ch : set.channels) {
        drift += ch.rate(x) * ch.delta.cast<double>();
    }
    const auto rhs = kuznetsov_derivatives(k, State(T, E));
    EXPECT_NEAR(drift(0), rhs(0), 1e-12);
    EXPECT_NEAR(drift(1), rhs(1), 1e-12);

    std::mt19937_64 gen(3);
    std::uniform_int_distribution<std::int64_t> count(0, 1000);
    for (int i = 0; i < 200; ++i) {
        const Counts y(count(gen), count(gen));
        for (int id = 1; id <= 4; ++id) {
            for (const auto& ch : make_channels(scenario_preset(id)).channels) {
                EXPECT_GE(ch.rate(y), 0.0);
            }
        }
    }
}

TEST(TestSimulateExact, exponentialExtinctionTime)
{
    const auto set = death_only(1.0);
    std::vector<double> times;
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        const auto traj = simulate_exact(set, Counts(1, 0), 100.0, seed);
        ASSERT_EQ(traj.size(), 3u);
        EXPECT_EQ(traj.states[1](0), 0);
        EXPECT_EQ(traj.termination, Termination::Extinct);
        times.push_back(traj.times[1]);
    }
    const auto m = moments(times);
    EXPECT_NEAR(m.mean, 1.0, 3 * m.standard_error);
}

TEST(TestSimulateExact, policiesCoincideForStateIndependentRates)
{
    const auto set = make_channels(GrowthLaw::power_law(1.3, 1.0, 0.0, 0.0));
    for (std::uint64_t seed : {1u, 2u, 99u}) {
        AbsOptions live;
        AbsOptions frozen;
        frozen.policy = RatePolicy::FrozenAtBirth;
        const auto a  = simulate_exact(set, Counts(5, 0), 5.0, seed, live);
        const auto b  = simulate_exact(set, Counts(5, 0), 5.0, seed, frozen);
        EXPECT_GT(a.size(), 10u);
        EXPECT_TRUE(a == b);
    }
}

TEST(TestSimulateExact, tumourFloorHolds)
{
    AbsOptions opts;
    opts.floors = Floors::tumour();
    for (int id = 1; id <= 4; ++id) {
        const auto set = make_channels(scenario_preset(id));
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto traj = simulate_exact(set, Counts(100, 10), 30.0, seed, opts);
            for (const auto& x : traj.states) {
                ASSERT_GE(x(0), 1);
                ASSERT_GE(x(1), 0);
            }
        }
    }
}

TEST(TestSimulateExact, bothFloorsHold)
{
    AbsOptions opts;
    opts.floors     = Floors::both();
    const auto set  = make_channels(scenario_preset(4));
    const auto traj = simulate_exact(set, Counts(100, 10), 40.0, 11, opts);
    for (const auto& x : traj.states) {
        ASSERT_GE(x(0), 1);
        ASSERT_GE(x(1), 1);
    }
}

TEST(TestSimulateExact, samplesAreOrderedAndEndAtHorizon)
{
    const auto traj = simulate_exact(make_channels(scenario_preset(2)), Counts(100, 10), 10.0, 5);
    EXPECT_EQ(traj.times.front(), 0.0);
    EXPECT_EQ(traj.states.front(), Counts(100, 10));
    EXPECT_EQ(traj.end_time(), 10.0);
    for (std::size_t i = 1; i < traj.size(); ++i) {
        ASSERT_LT(traj.times[i - 1], traj.times[i]);
        // every event moves one population by exactly one
        if (i + 1 < traj.size()) {
            ASSERT_EQ((traj.states[i] - traj.states[i - 1]).cwiseAbs().sum(), 1);
        }
    }
    EXPECT_EQ(traj.paradigm, Paradigm::ABS);
}

TEST(TestSimulateExact, absorbingExtinction)
{
    EnsembleSpec spec;
    spec.channels   = make_channels(scenario_preset(4));
    spec.initial    = Counts(100, 10);
    spec.t_end      = 60.0;
    const auto ens  = run_ensemble(spec, 20, 7);
    for (const auto& rep : ens.replicates) {
        const auto& states = rep.trajectory.states;
        bool tumour_gone   = false;
        bool effector_gone = false;
        for (const auto& x : states) {
            if (tumour_gone) {
                ASSERT_EQ(x(0), 0);
            }
            if (effector_gone) {
                ASSERT_EQ(x(1), 0);
            }
            tumour_gone   = tumour_gone || x(0) == 0;
            effector_gone = effector_gone || x(1) == 0;
        }
    }
}

TEST(TestSimulateExact, scenarioOneReachesZero)
{
    EnsembleSpec spec;
    spec.channels       = make_channels(scenario_preset(1));
    spec.initial        = Counts(100, 10);
    spec.t_end          = 100.0;
    spec.options.record_every = 1.0;
    const auto ens = run_ensemble(spec, 20, 1);
    std::size_t extinct = 0;
    for (const auto& rep : ens.replicates) {
        extinct += rep.trajectory.states.back()(0) == 0 ? 1 : 0;
    }
    EXPECT_GE(extinct, 18u);
}

TEST(TestSimulateExact, floorByRateZeroingMatchesVeto)
{
    const auto set = make_channels(GrowthLaw::logistic(1.0, 0.5));
    AbsOptions opts;
    opts.floors = Floors::tumour();
    std::vector<double> zeroing;
    std::vector<double> veto;
    std::mt19937_64 gen(12345);
    for (std::uint64_t seed = 0; seed < 10000; ++seed) {
        zeroing.push_back(static_cast<double>(simulate_exact(set, Counts(1, 0), 5.0, seed, opts).states.back()(0)));
        veto.push_back(static_cast<double>(veto_simulation(set, 1, 1, 5.0, gen)));
    }
    const auto a = moments(zeroing);
    const auto b = moments(veto);
    EXPECT_NEAR(a.mean, b.mean, 3 * std::hypot(a.standard_error, b.standard_error));
}

TEST(TestSimulateExact, liveExtinctionMatchesMasterEquation)
{
    EnsembleSpec spec;
    spec.channels  = make_channels(GrowthLaw::logistic(1.0, 0.8));
    spec.initial   = Counts(1, 0);
    spec.t_end     = 5.0;
    const auto ens = run_ensemble(spec, 4000, 300);
    std::vector<double> extinct;
    for (const auto& r : ens.replicates) {
        extinct.push_back(r.trajectory.states.back()(0) == 0 ? 1.0 : 0.0);
    }
    const double expected = oracle::extinction_probability(
        [](std::size_t n) { return static_cast<double>(n); },
        [](std::size_t n) { return 0.8 * static_cast<double>(n * n); }, 1, 5.0, 60);
    const auto m = moments(extinct);
    EXPECT_NEAR(m.mean, expected, 3 * m.standard_error);
}

TEST(TestSimulateExact, frozenRatesAccelerateExtinction)
{
    EnsembleSpec spec;
    spec.channels = make_channels(GrowthLaw::logistic(1.0, 0.8));
    spec.initial  = Counts(1, 0);
    spec.t_end    = 5.0;
    auto live     = run_ensemble(spec, 4000, 100);
    spec.options.policy = RatePolicy::FrozenAtBirth;
    auto frozen         = run_ensemble(spec, 4000, 100);
    auto extinct        = [](const Ensemble& e) {
        std::size_t n = 0;
        for (const auto& r : e.replicates) {
            n += r.trajectory.states.back()(0) == 0 ? 1 : 0;
        }
        return static_cast<double>(n) / static_cast<double>(e.size());
    };
    EXPECT_GT(extinct(live), 0.9);
    EXPECT_GT(extinct(frozen), extinct(live) + 0.015);

    spec.channels       = make_channels(GrowthLaw::logistic(1.0, 0.2));
    spec.options.policy = RatePolicy::Live;
    live                = run_ensemble(spec, 20000, 100);
    spec.options.policy = RatePolicy::FrozenAtBirth;
    frozen              = run_ensemble(spec, 20000, 100);
    EXPECT_GT(extinct(live), 0.0);
    EXPECT_GT(extinct(frozen), extinct(live) + 0.015);
}

TEST(TestSimulateExact, errors)
{
    const auto set = make_channels(GrowthLaw::logistic(1.0, 0.2));
    EXPECT_THROW(simulate_exact(set, Counts(-1, 0), 1.0, 0), ConfigError);
    EXPECT_THROW(simulate_exact(set, Counts(1, 3), 1.0, 0), ConfigError);
    EXPECT_THROW(simulate_exact(set, Counts(1, 0), 0.0, 0), ConfigError);
    AbsOptions frozen;
    frozen.policy = RatePolicy::FrozenAtBirth;
    EXPECT_THROW(simulate_exact(make_channels(scenario_preset(1)), Counts(1, 1), 1.0, 0, frozen), ConfigError);

    ChannelSet broken;
    broken.channels.push_back({"negative", [](const Counts&) { return -1.0; }, Counts(1, 0), {}});
    EXPECT_THROW(simulate_exact(broken, Counts(1, 0), 1.0, 0), EngineError);

    AbsOptions capped;
    capped.population_cap = 50;
    EXPECT_THROW(simulate_exact(make_channels(GrowthLaw::power_law(2.0, 1.0, 0.0, 0.0)), Counts(40, 0), 10.0, 0, capped),
                 PopulationCapError);

    EXPECT_THROW(to_counts(State(1.5, 0.0)), ConfigError);
    EXPECT_THROW(to_counts(State(-1.0, 0.0)), ConfigError);
    EXPECT_EQ(to_counts(State(100.0, 10.0)), Counts(100, 10));
}

TEST(TestSimulateTauLeap, zeroRatesGiveConstantTrajectory)
{
    ChannelSet set;
    set.channels.push_back({"never", [](const Counts&) { return 0.0; }, Counts(1, 0), {}});
    const auto traj = simulate_tau_leap(set, Counts(7, 0), 3.0, 0.01, 1);
    for (const auto& x : traj.states) {
        EXPECT_EQ(x(0), 7);
    }
    EXPECT_EQ(traj.end_time(), 3.0);
}

TEST(TestSimulateTauLeap, linearBirthDeathMean)
{
    const auto set = make_channels(GrowthLaw::power_law(2.0, 1.0, 0.0, 0.0));
    std::vector<double> tau;
    std::vector<double> exact;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        tau.push_back(static_cast<double>(simulate_tau_leap(set, Counts(100, 0), 1.0, 0.001, seed).states.back()(0)));
        exact.push_back(static_cast<double>(simulate_exact(set, Counts(100, 0), 1.0, seed).states.back()(0)));
    }
    const auto t = moments(tau);
    const auto e = moments(exact);
    const double analytic = 100.0 * std::exp(1.0);
    EXPECT_NEAR(t.mean, analytic, 3 * t.standard_error);
    EXPECT_NEAR(e.mean, analytic, 3 * e.standard_error);
    EXPECT_LT(std::abs(t.mean - e.mean) / e.mean, 0.05);
}

TEST(TestSimulateTauLeap, floorsAndCap)
{
    AbsOptions opts;
    opts.floors     = Floors::both();
    const auto traj = simulate_tau_leap(make_channels(scenario_preset(4)), Counts(100, 10), 50.0, 0.01, 4, opts);
    for (const auto& x : traj.states) {
        ASSERT_GE(x(0), 1);
        ASSERT_GE(x(1), 1);
    }
    EXPECT_THROW(simulate_tau_leap(make_channels(GrowthLaw::bertalanffy(1.636, 0.002)), Counts(1, 0), 100.0, 0.001, 1),
                 PopulationCapError);
    EXPECT_THROW(simulate_tau_leap(make_channels(GrowthLaw::logistic(1.0, 0.2)), Counts(1, 0), 1.0, 0.0, 1),
                 ConfigError);
}

TEST(TestSimulateTauLeap, frozenPolicy)
{
    AbsOptions frozen;
    frozen.policy   = RatePolicy::FrozenAtBirth;
    frozen.floors   = Floors::tumour();
    const auto traj = simulate_tau_leap(make_channels(GrowthLaw::logistic(1.0, 0.2)), Counts(3, 0), 20.0, 0.01, 9, frozen);
    for (const auto& x : traj.states) {
        ASSERT_GE(x(0), 1);
    }
}

TEST(TestEnsemble, seedsAndDeterminism)
{
    EnsembleSpec spec;
    spec.channels = make_channels(scenario_preset(2));
    spec.initial  = Counts(100, 10);
    spec.t_end    = 10.0;
    const auto a  = run_ensemble(spec, 8, 42, 4);
    const auto b  = run_ensemble(spec, 8, 42, 1);
    ASSERT_EQ(a.size(), 8u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.replicates[i].index, i);
        EXPECT_EQ(a.replicates[i].seed, 42 + i);
        EXPECT_TRUE(a.replicates[i].trajectory == b.replicates[i].trajectory);
    }
    EXPECT_FALSE(a.replicates[0].trajectory == a.replicates[1].trajectory);
    EXPECT_EQ(run_ensemble(spec).size(), default_replicates);
    EXPECT_THROW(run_ensemble(spec, 0), ConfigError);
}

TEST(TestEnsemble, replicateErrorCarriesIndex)
{
    EnsembleSpec spec;
    spec.channels               = make_channels(GrowthLaw::power_law(2.0, 1.0, 0.0, 0.0));
    spec.initial                = Counts(40, 0);
    spec.t_end                  = 10.0;
    spec.options.population_cap = 45;
    try {
        run_ensemble(spec, 3, 10, 1);
        FAIL() << "expected a replicate error";
    }
    catch (const ReplicateError& e) {
        EXPECT_EQ(e.index(), 0u);
        EXPECT_EQ(e.seed(), 10u);
        EXPECT_THROW(std::rethrow_exception(e.cause()), PopulationCapError);
    }
}

TEST(TestEnsemble, gridRecordingMatchesStepSampling)
{
    const auto set = make_channels(scenario_preset(3));
    const auto grid = Grid::covering(20.0, 0.5);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto full = simulate_exact(set, Counts(100, 10), 20.0, seed);
        AbsOptions thin;
        thin.record_every  = 0.5;
        const auto reduced = simulate_exact(set, Counts(100, 10), 20.0, seed, thin);
        EXPECT_LT(reduced.size(), full.size());
        EXPECT_EQ(sample_on_grid(full, grid).values, sample_on_grid(reduced, grid).values);
        EXPECT_EQ(value_at(full, 20.0), reduced.states.back()(0));
    }
}
