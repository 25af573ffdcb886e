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
#ifndef DUALSIM_OUTPUT_HPP
#define DUALSIM_OUTPUT_HPP

#include "dualsim/abs.hpp"
#include "dualsim/stats.hpp"
#include "dualsim/trajectory.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace dualsim
{

/// Days with six decimals.
std::string format_time(double t);

/// Shortest representation that parses back to the same double.
std::string format_value(double v);

/// `time,tumour` or `time,tumour,effector`, one row per trajectory sample.
std::string sds_csv(const SdsTrajectory& traj);

/// `replicate,time,tumour[,effector]`: every replicate step-sampled on the grid, in replicate order.
std::string ensemble_csv(const Ensemble& ensemble, const Grid& grid);

/// Grid time, then per population the deterministic value, ensemble mean and ensemble variance.
std::string comparison_csv(const ComparisonReport& report);

nlohmann::json to_json(const WilcoxonResult& result);
nlohmann::json to_json(const ComparisonReport& report);

/// Two-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json& doc);

/**
 * Collects named files and publishes them in one directory.
 *
 * commit() writes every file to a temporary sibling and renames it into place only after all
 * temporaries were written, so a failure leaves no output behind. Errors raise IoError.
 */
class StagedOutput
{
public:
    explicit StagedOutput(std::filesystem::path directory);

    void add(std::string name, std::string content);
    const std::vector<std::pair<std::string, std::string>>& files() const
    {
        return m_files;
    }
    const std::filesystem::path& directory() const
    {
        return m_directory;
    }

    std::vector<std::filesystem::path> commit() const;

private:
    std::filesystem::path m_directory;
    std::vector<std::pair<std::string, std::string>> m_files;
};

} // namespace dualsim

#endif // DUALSIM_OUTPUT_HPP
