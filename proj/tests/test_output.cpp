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
#include "dualsim/error.hpp"
#include "dualsim/output.hpp"
#include "dualsim/svg.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

using namespace dualsim;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("dualsim_test_output_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& text)
{
    return text.substr(0, text.find('\n'));
}

AbsTrajectory abs_path(std::initializer_list<std::pair<double, std::int64_t>> points, int populations = 1)
{
    AbsTrajectory traj;
    traj.paradigm    = Paradigm::ABS;
    traj.populations = populations;
    for (const auto& [t, v] : points) {
        traj.push(t, Counts(v, populations > 1 ? 2 * v : 0));
    }
    return traj;
}

} // namespace

TEST(TestFormat, timesUseSixDecimals)
{
    EXPECT_EQ(format_time(0.0), "0.000000");
    EXPECT_EQ(format_time(-0.0), "0.000000");
    EXPECT_EQ(format_time(1.5), "1.500000");
    EXPECT_EQ(format_time(100.0), "100.000000");
}

TEST(TestFormat, valuesRoundTrip)
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int i = 0; i < 2000; ++i) {
        const double v = std::ldexp(mant(gen), expo(gen));
        EXPECT_EQ(std::stod(format_value(v)), v);
    }
    EXPECT_EQ(format_value(0.0), "0");
    EXPECT_EQ(format_value(12.0), "12");
    EXPECT_THROW(format_value(std::numeric_limits<double>::infinity()), EngineError);
}

TEST(TestCsv, headers)
{
    SdsTrajectory one;
    one.push(0.0, State(1.0, 0.0));
    one.push(0.1, State(1.5, 0.0));
    EXPECT_EQ(sds_csv(one), "time,tumour\n0.000000,1\n0.100000,1.5\n");

    SdsTrajectory two = one;
    two.populations   = 2;
    EXPECT_EQ(first_line(sds_csv(two)), "time,tumour,effector");

    Ensemble ens;
    ens.replicates.push_back({0, 5, abs_path({{0.0, 1}, {0.5, 2}, {2.0, 1}})});
    ens.replicates.push_back({1, 6, abs_path({{0.0, 1}, {2.0, 0}})});
    const auto csv = ensemble_csv(ens, Grid{1.0, 3});
    EXPECT_EQ(csv, "replicate,time,tumour\n"
                   "0,0.000000,1\n0,1.000000,2\n0,2.000000,1\n"
                   "1,0.000000,1\n1,1.000000,1\n1,2.000000,0\n");

    Ensemble pair;
    pair.replicates.push_back({0, 5, abs_path({{0.0, 1}, {2.0, 1}}, 2)});
    EXPECT_EQ(first_line(ensemble_csv(pair, Grid{1.0, 3})), "replicate,time,tumour,effector");
}

TEST(TestCsv, comparisonColumns)
{
    ComparisonReport report;
    report.grid = Grid{1.0, 2};
    PopulationComparison tumour;
    tumour.population   = "tumour";
    tumour.sds          = Eigen::Vector2d(1.0, 2.0);
    tumour.abs_mean     = Eigen::Vector2d(1.0, 2.5);
    tumour.abs_variance = Eigen::Vector2d(0.0, 0.25);
    report.populations.push_back(tumour);
    EXPECT_EQ(comparison_csv(report), "time,sds_tumour,abs_mean_tumour,abs_var_tumour\n"
                                      "0.000000,1,1,0\n1.000000,2,2.5,0.25\n");
    const auto doc = to_json(report);
    EXPECT_EQ(doc.at("populations").at(0).at("abs_mean").at(1).get<double>(), 2.5);
    EXPECT_TRUE(doc.at("populations").at(0).at("wilcoxon").contains("U"));
}

TEST(TestStagedOutput, publishesAllFiles)
{
    const auto dir = scratch("publish");
    StagedOutput out(dir / "nested");
    out.add("a.csv", "x\n");
    out.add("b.json", "{}\n");
    const auto written = out.commit();
    ASSERT_EQ(written.size(), 2u);
    EXPECT_EQ(slurp(dir / "nested" / "a.csv"), "x\n");
    EXPECT_EQ(slurp(dir / "nested" / "b.json"), "{}\n");
    std::size_t count = 0;
    for ([[maybe_unused]] const auto& entry : fs::directory_iterator(dir / "nested")) {
        ++count;
    }
    EXPECT_EQ(count, 2u);
    fs::remove_all(dir);
}

TEST(TestStagedOutput, failureLeavesNothingBehind)
{
    const auto dir = scratch("failure");
    StagedOutput out(dir);
    out.add("good.csv", "x\n");
    out.add("missing/child.csv", "y\n");
    EXPECT_THROW(out.commit(), IoError);
    EXPECT_FALSE(fs::exists(dir));

    fs::create_directories(dir.parent_path());
    std::ofstream(dir) << "not a directory";
    StagedOutput blocked(dir);
    blocked.add("a.csv", "x\n");
    EXPECT_THROW(blocked.commit(), IoError);
    fs::remove(dir);
}

TEST(TestSvg, constantSeriesIsHorizontal)
{
    PlotSeries s{"constant", Eigen::VectorXd::Constant(5, 3.0), Axis::Left};
    const auto svg = emit_svg_plot(Grid{1.0, 5}, {s});
    std::smatch match;
    ASSERT_TRUE(std::regex_search(svg, match, std::regex("points=\"([^\"]*)\"")));
    std::regex point("[0-9.]+,([0-9.]+)");
    std::string points = match[1];
    std::set<std::string> ys;
    for (std::sregex_iterator it(points.begin(), points.end(), point), end; it != end; ++it) {
        ys.insert((*it)[1]);
    }
    EXPECT_EQ(ys.size(), 1u);
    EXPECT_EQ(svg.find("stroke-dasharray"), std::string::npos);
}

TEST(TestSvg, tumourSolidEffectorDotted)
{
    Eigen::VectorXd t(3), e(3);
    t << 100, 50, 10;
    e << 1, 2, 3;
    const auto svg = emit_svg_plot(Grid{1.0, 3}, {{"tumour", t, Axis::Left}, {"effector", e, Axis::Right}});
    const auto left  = svg.find("<polyline class=\"left\"");
    const auto right = svg.find("<polyline class=\"right\"");
    ASSERT_NE(left, std::string::npos);
    ASSERT_NE(right, std::string::npos);
    const std::string left_line  = svg.substr(left, svg.find('\n', left) - left);
    const std::string right_line = svg.substr(right, svg.find('\n', right) - right);
    EXPECT_EQ(left_line.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(right_line.find("stroke-dasharray"), std::string::npos);
    EXPECT_NE(svg.find("effector cells"), std::string::npos);
    EXPECT_NE(svg.find("tumour cells"), std::string::npos);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
}

TEST(TestSvg, deterministicAndValidated)
{
    Eigen::VectorXd v(4);
    v << 0.5, 1e64, 3, 4;
    const std::vector<PlotSeries> series{{"a & b", v, Axis::Left}};
    EXPECT_EQ(emit_svg_plot(Grid{0.5, 4}, series), emit_svg_plot(Grid{0.5, 4}, series));
    EXPECT_NE(emit_svg_plot(Grid{0.5, 4}, series).find("a &amp; b"), std::string::npos);
    EXPECT_THROW(emit_svg_plot(Grid{1.0, 4}, {}), ConfigError);
    EXPECT_THROW(emit_svg_plot(Grid{1.0, 3}, series), ConfigError);
    Eigen::VectorXd bad = v;
    bad(1)              = std::nan("");
    EXPECT_THROW(emit_svg_plot(Grid{1.0, 4}, {{"bad", bad, Axis::Left}}), ConfigError);
}
