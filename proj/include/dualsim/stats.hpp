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
#ifndef DUALSIM_STATS_HPP
#define DUALSIM_STATS_HPP

#include "dualsim/abs.hpp"
#include "dualsim/trajectory.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dualsim
{

/// Uniform time grid 0, spacing, 2 spacing, ... (size points).
struct Grid {
    double spacing   = 1.0;
    std::size_t size = 0;

    double time(std::size_t i) const
    {
        return static_cast<double>(i) * spacing;
    }
    double end() const
    {
        return time(size - 1);
    }

    /// Largest grid of the given spacing that fits in [0, t_end]. Needs at least two points.
    static Grid covering(double t_end, double spacing);

    bool operator==(const Grid&) const = default;
};

/// Values on a grid: one row per grid point, one column per population.
struct GridSeries {
    Grid grid;
    Eigen::MatrixXd values;

    int populations() const
    {
        return static_cast<int>(values.cols());
    }
};

enum class Interpolation
{
    Step,   ///< right-continuous piecewise constant, for event-driven records
    Linear, ///< linear between samples, for integrated records
};

GridSeries sample_on_grid(const SdsTrajectory& traj, const Grid& grid, Interpolation interp);
GridSeries sample_on_grid(const AbsTrajectory& traj, const Grid& grid, Interpolation interp = Interpolation::Step);

struct EnsembleSummary {
    GridSeries mean;
    GridSeries variance; ///< unbiased; zero for a single replicate
};

/// Step-samples every replicate on the grid and aggregates pointwise.
EnsembleSummary ensemble_mean(const Ensemble& ensemble, const Grid& grid);

enum class WilcoxonMode
{
    Auto,
    Exact,
    Normal,
};

std::string_view to_string(WilcoxonMode mode);

/// Auto switches to the normal approximation above this combined sample size.
inline constexpr std::size_t exact_wilcoxon_limit = 20;

struct WilcoxonResult {
    double U     = 0.0; ///< Mann-Whitney U of the first sample
    double p     = 1.0; ///< two-sided p-value
    int h        = 0;   ///< 1 when p < alpha
    double alpha = 0.05;
    WilcoxonMode method = WilcoxonMode::Exact;
};

/**
 * Wilcoxon rank-sum (Mann-Whitney) test with midranks for ties.
 *
 * Exact mode counts the full permutation distribution of the rank sum; Normal mode uses the
 * tie-corrected normal approximation with continuity correction.
 */
WilcoxonResult wilcoxon_ranksum(std::span<const double> x, std::span<const double> y, double alpha = 0.05,
                                WilcoxonMode mode = WilcoxonMode::Auto);

struct PopulationComparison {
    std::string population;
    Eigen::VectorXd sds;
    Eigen::VectorXd abs_mean;
    Eigen::VectorXd abs_variance;
    WilcoxonResult test;
};

struct ComparisonReport {
    Grid grid;
    std::vector<PopulationComparison> populations;
    std::size_t replicates  = 0;
    std::uint64_t base_seed = 0;
    std::string protocol;
};

/// Aligns the deterministic run (linear) and the ensemble mean (step) on the grid and tests each
/// population's two grid series against each other.
ComparisonReport compare(const SdsTrajectory& sds, const Ensemble& ensemble, const Grid& grid, double alpha = 0.05,
                         WilcoxonMode mode = WilcoxonMode::Auto);

} // namespace dualsim

#endif // DUALSIM_STATS_HPP
