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
#include "dualsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace dualsim
{

std::string_view to_string(WilcoxonMode mode)
{
    switch (mode) {
    case WilcoxonMode::Auto:
        return "auto";
    case WilcoxonMode::Exact:
        return "exact";
    case WilcoxonMode::Normal:
        return "normal";
    }
    return "unknown";
}

Grid Grid::covering(double t_end, double spacing)
{
    if (!(spacing > 0) || !std::isfinite(spacing) || !(t_end > 0) || !std::isfinite(t_end)) {
        throw ConfigError("grid needs finite positive spacing and horizon");
    }
    const auto n = static_cast<std::size_t>(std::floor(t_end / spacing + 1e-9)) + 1;
    if (n < 2) {
        throw ConfigError("grid spacing is larger than the horizon");
    }
    return {spacing, n};
}

namespace
{

template <typename Value>
GridSeries sample_impl(const Trajectory<Value>& traj, const Grid& grid, Interpolation interp, bool extend_extinct)
{
    if (traj.empty()) {
        throw ConfigError("cannot sample an empty trajectory");
    }
    if (grid.size < 2 || !(grid.spacing > 0)) {
        throw ConfigError("grid needs at least two points");
    }
    const double snap = 1e-9 * grid.spacing;
    const bool extinct_tail =
        extend_extinct && traj.termination == Termination::Extinct && traj.states.back()(0) == 0;
    if (grid.end() > static_cast<double>(traj.end_time()) + snap && !extinct_tail) {
        throw ConfigError("grid exceeds the trajectory span");
    }

    GridSeries series{grid, Eigen::MatrixXd(static_cast<Eigen::Index>(grid.size), traj.populations)};
    const std::size_t n = traj.size();
    std::size_t k       = 0;
    for (std::size_t i = 0; i < grid.size; ++i) {
        const double t      = grid.time(i);
        const double reach  = interp == Interpolation::Linear ? t + snap : t;
        while (k + 1 < n && static_cast<double>(traj.times[k + 1]) <= reach) {
            ++k;
        }
        const auto row = static_cast<Eigen::Index>(i);
        const Eigen::Vector2d here = traj.states[k].template cast<double>();
        const double t_k           = static_cast<double>(traj.times[k]);
        if (interp == Interpolation::Step || k + 1 == n || std::abs(t - t_k) <= snap) {
            series.values.row(row) = here.head(traj.populations).transpose();
            continue;
        }
        const Eigen::Vector2d next = traj.states[k + 1].template cast<double>();
        const double w             = (t - t_k) / (static_cast<double>(traj.times[k + 1]) - t_k);
        series.values.row(row)     = (here + w * (next - here)).head(traj.populations).transpose();
    }
    return series;
}

} // namespace

GridSeries sample_on_grid(const SdsTrajectory& traj, const Grid& grid, Interpolation interp)
{
    return sample_impl(traj, grid, interp, false);
}

GridSeries sample_on_grid(const AbsTrajectory& traj, const Grid& grid, Interpolation interp)
{
    return sample_impl(traj, grid, interp, false);
}

EnsembleSummary ensemble_mean(const Ensemble& ensemble, const Grid& grid)
{
    if (ensemble.replicates.empty()) {
        throw ConfigError("cannot aggregate an empty ensemble");
    }
    const int pops  = ensemble.populations();
    const auto rows = static_cast<Eigen::Index>(grid.size);
    std::vector<Eigen::MatrixXd> sampled;
    sampled.reserve(ensemble.size());
    for (const auto& rep : ensemble.replicates) {
        if (rep.trajectory.populations != pops) {
            throw ConfigError("ensemble replicates disagree on population count");
        }
        sampled.push_back(sample_impl(rep.trajectory, grid, Interpolation::Step, true).values);
    }

    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(rows, pops);
    for (const auto& m : sampled) {
        mean += m;
    }
    mean /= static_cast<double>(sampled.size());

    Eigen::MatrixXd variance = Eigen::MatrixXd::Zero(rows, pops);
    if (sampled.size() > 1) {
        for (const auto& m : sampled) {
            variance.array() += (m - mean).array().square();
        }
        variance /= static_cast<double>(sampled.size() - 1);
    }
    return {{grid, std::move(mean)}, {grid, std::move(variance)}};
}

namespace
{

constexpr std::size_t exact_wilcoxon_max = 60;

WilcoxonResult exact_pvalue(const std::vector<std::int64_t>& doubled_ranks, std::size_t n1, std::int64_t observed)
{
    // counts[k][s]: subsets of size k whose doubled-rank sum is s.
    const std::int64_t max_sum = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::int64_t{0});
    const auto width           = static_cast<std::size_t>(max_sum + 1);
    std::vector<std::uint64_t> counts((n1 + 1) * width, 0);
    counts[0] = 1;
    for (std::int64_t r : doubled_ranks) {
        for (std::size_t k = n1; k >= 1; --k) {
            std::uint64_t* row        = &counts[k * width];
            const std::uint64_t* prev = &counts[(k - 1) * width];
            for (std::size_t s = width; s-- > static_cast<std::size_t>(r);) {
                row[s] += prev[s - static_cast<std::size_t>(r)];
            }
        }
    }
    std::uint64_t lower = 0;
    std::uint64_t upper = 0;
    std::uint64_t total = 0;
    const std::uint64_t* row = &counts[n1 * width];
    for (std::size_t s = 0; s < width; ++s) {
        total += row[s];
        if (static_cast<std::int64_t>(s) <= observed) {
            lower += row[s];
        }
        if (static_cast<std::int64_t>(s) >= observed) {
            upper += row[s];
        }
    }
    WilcoxonResult result;
    result.p      = std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(total));
    result.method = WilcoxonMode::Exact;
    return result;
}

} // namespace

WilcoxonResult wilcoxon_ranksum(std::span<const double> x, std::span<const double> y, double alpha, WilcoxonMode mode)
{
    if (x.empty() || y.empty()) {
        throw ConfigError("wilcoxon rank-sum needs two nonempty samples");
    }
    if (!(alpha > 0 && alpha < 1)) {
        throw ConfigError("significance level must lie in (0, 1)");
    }
    const std::size_t n1 = x.size();
    const std::size_t n2 = y.size();
    const std::size_t N  = n1 + n2;

    struct Item {
        double value;
        bool first;
    };
    std::vector<Item> items;
    items.reserve(N);
    for (double v : x) {
        items.push_back({v, true});
    }
    for (double v : y) {
        items.push_back({v, false});
    }
    for (const auto& it : items) {
        if (std::isnan(it.value)) {
            throw ConfigError("wilcoxon rank-sum samples must not contain NaN");
        }
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& l, const Item& r) {
        return l.value < r.value;
    });

    // Midranks, doubled so that they stay integral.
    std::vector<std::int64_t> doubled(N);
    std::int64_t observed = 0;
    double tie_term       = 0.0;
    for (std::size_t i = 0; i < N;) {
        std::size_t j = i + 1;
        while (j < N && items[j].value == items[i].value) {
            ++j;
        }
        const auto r = static_cast<std::int64_t>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) {
            doubled[k] = r;
            if (items[k].first) {
                observed += r;
            }
        }
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }

    const double U = static_cast<double>(observed) / 2.0 - static_cast<double>(n1 * (n1 + 1)) / 2.0;
    if (mode == WilcoxonMode::Auto) {
        mode = N <= exact_wilcoxon_limit ? WilcoxonMode::Exact : WilcoxonMode::Normal;
    }

    WilcoxonResult result;
    if (mode == WilcoxonMode::Exact) {
        if (N > exact_wilcoxon_max) {
            throw ConfigError("exact wilcoxon distribution limited to " + std::to_string(exact_wilcoxon_max) +
                              " observations");
        }
        result = exact_pvalue(doubled, n1, observed);
    }
    else {
        const double nn       = static_cast<double>(N);
        const double mu       = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
        const double variance = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                                ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
        if (variance <= 0.0) {
            result.p = 1.0;
        }
        else {
            const double z = std::max(std::abs(U - mu) - 0.5, 0.0) / std::sqrt(variance);
            result.p       = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
        }
        result.method = WilcoxonMode::Normal;
    }
    result.U     = U;
    result.alpha = alpha;
    result.h     = result.p < alpha ? 1 : 0;
    return result;
}

ComparisonReport compare(const SdsTrajectory& sds, const Ensemble& ensemble, const Grid& grid, double alpha,
                         WilcoxonMode mode)
{
    if (ensemble.replicates.empty()) {
        throw ConfigError("cannot compare against an empty ensemble");
    }
    if (sds.populations != ensemble.populations()) {
        throw ConfigError("deterministic run and ensemble describe different populations");
    }
    const GridSeries sds_series = sample_on_grid(sds, grid, Interpolation::Linear);
    const EnsembleSummary summary = ensemble_mean(ensemble, grid);

    static constexpr const char* names[] = {"tumour", "effector"};
    ComparisonReport report;
    report.grid       = grid;
    report.replicates = ensemble.size();
    report.base_seed  = ensemble.base_seed;
    report.protocol   = "wilcoxon rank-sum: SDS grid values vs ABS ensemble-mean grid values";
    for (int c = 0; c < sds.populations; ++c) {
        PopulationComparison pc;
        pc.population   = names[c];
        pc.sds          = sds_series.values.col(c);
        pc.abs_mean     = summary.mean.values.col(c);
        pc.abs_variance = summary.variance.values.col(c);
        pc.test = wilcoxon_ranksum(std::span<const double>(pc.sds.data(), static_cast<std::size_t>(pc.sds.size())),
                                   std::span<const double>(pc.abs_mean.data(),
                                                           static_cast<std::size_t>(pc.abs_mean.size())),
                                   alpha, mode);
        report.populations.push_back(std::move(pc));
    }
    return report;
}

} // namespace dualsim
