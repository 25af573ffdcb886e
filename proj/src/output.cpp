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
#include "dualsim/output.hpp"

#include "dualsim/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <system_error>

namespace dualsim
{

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_time(double t)
{
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.6f", t == 0.0 ? 0.0 : t);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string format_value(double v)
{
    if (!std::isfinite(v)) {
        throw EngineError("refusing to serialize a non-finite value");
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v == 0.0 ? 0.0 : v);
    return std::string(buf, res.ptr);
}

namespace
{

const char* const population_names[] = {"tumour", "effector"};

std::string header(const char* first, int populations)
{
    std::string line = first;
    for (int i = 0; i < populations; ++i) {
        line += ',';
        line += population_names[i];
    }
    return line + '\n';
}

} // namespace

std::string sds_csv(const SdsTrajectory& traj)
{
    std::string out = header("time", traj.populations);
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out += format_time(traj.times[k]);
        for (int i = 0; i < traj.populations; ++i) {
            out += ',';
            out += format_value(traj.states[k][i]);
        }
        out += '\n';
    }
    return out;
}

std::string ensemble_csv(const Ensemble& ensemble, const Grid& grid)
{
    const int pops  = ensemble.populations();
    std::string out = "replicate," + header("time", pops);
    for (const auto& rep : ensemble.replicates) {
        const auto series = sample_on_grid(rep.trajectory, grid, Interpolation::Step);
        const auto id     = std::to_string(rep.index);
        for (std::size_t k = 0; k < grid.size; ++k) {
            out += id;
            out += ',';
            out += format_time(grid.time(k));
            for (int i = 0; i < pops; ++i) {
                out += ',';
                out += format_value(series.values(static_cast<Eigen::Index>(k), i));
            }
            out += '\n';
        }
    }
    return out;
}

std::string comparison_csv(const ComparisonReport& report)
{
    std::string out = "time";
    for (const auto& pop : report.populations) {
        out += ",sds_" + pop.population + ",abs_mean_" + pop.population + ",abs_var_" + pop.population;
    }
    out += '\n';
    for (std::size_t k = 0; k < report.grid.size; ++k) {
        const auto row = static_cast<Eigen::Index>(k);
        out += format_time(report.grid.time(k));
        for (const auto& pop : report.populations) {
            for (const auto* column : {&pop.sds, &pop.abs_mean, &pop.abs_variance}) {
                out += ',';
                out += format_value((*column)(row));
            }
        }
        out += '\n';
    }
    return out;
}

json to_json(const WilcoxonResult& result)
{
    return {{"U", result.U},
            {"p", result.p},
            {"h", result.h},
            {"alpha", result.alpha},
            {"method", std::string(to_string(result.method))}};
}

json to_json(const ComparisonReport& report)
{
    auto vec = [](const Eigen::VectorXd& v) {
        return std::vector<double>(v.data(), v.data() + v.size());
    };
    json pops = json::array();
    for (const auto& pop : report.populations) {
        pops.push_back({{"population", pop.population},
                        {"wilcoxon", to_json(pop.test)},
                        {"sds", vec(pop.sds)},
                        {"abs_mean", vec(pop.abs_mean)},
                        {"abs_variance", vec(pop.abs_variance)}});
    }
    return {{"protocol", report.protocol},
            {"grid", {{"spacing", report.grid.spacing}, {"size", report.grid.size}}},
            {"replicates", report.replicates},
            {"base_seed", report.base_seed},
            {"populations", std::move(pops)}};
}

std::string dump_json(const json& doc)
{
    return doc.dump(2) + '\n';
}

StagedOutput::StagedOutput(fs::path directory)
    : m_directory(std::move(directory))
{
}

void StagedOutput::add(std::string name, std::string content)
{
    m_files.emplace_back(std::move(name), std::move(content));
}

std::vector<fs::path> StagedOutput::commit() const
{
    std::error_code ec;
    const bool existed = fs::exists(m_directory, ec);
    if (!existed) {
        fs::create_directories(m_directory, ec);
        if (ec) {
            throw IoError("cannot create output directory '" + m_directory.string() + "': " + ec.message());
        }
    }
    else if (!fs::is_directory(m_directory, ec)) {
        throw IoError("output path '" + m_directory.string() + "' is not a directory");
    }

    std::vector<fs::path> staged;
    auto cleanup = [&] {
        std::error_code ignored;
        for (const auto& path : staged) {
            fs::remove(path, ignored);
        }
        if (!existed) {
            fs::remove(m_directory, ignored);
        }
    };

    for (const auto& [name, content] : m_files) {
        const fs::path tmp = m_directory / ("." + name + ".tmp");
        staged.push_back(tmp);
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.close();
        if (!stream) {
            cleanup();
            throw IoError("cannot write '" + tmp.string() + "'");
        }
    }

    std::vector<fs::path> published;
    for (std::size_t i = 0; i < m_files.size(); ++i) {
        const fs::path target = m_directory / m_files[i].first;
        fs::rename(staged[i], target, ec);
        if (ec) {
            for (const auto& path : published) {
                std::error_code ignored;
                fs::remove(path, ignored);
            }
            cleanup();
            throw IoError("cannot publish '" + target.string() + "': " + ec.message());
        }
        published.push_back(target);
    }
    return published;
}

} // namespace dualsim
