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
#ifndef DUALSIM_SVG_HPP
#define DUALSIM_SVG_HPP

#include "dualsim/stats.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace dualsim
{

enum class Axis
{
    Left,  ///< tumour scale, solid lines
    Right, ///< effector scale, dotted lines
};

struct PlotSeries {
    std::string label;
    Eigen::VectorXd values;
    Axis axis = Axis::Left;
};

struct PlotAxes {
    std::string title;
    std::string x_label     = "time (days)";
    std::string left_label  = "tumour cells";
    std::string right_label = "effector cells";
    int width               = 800;
    int height              = 480;
};

/**
 * Line chart of series sharing one grid, as an SVG 1.1 document.
 *
 * Left-axis series are drawn solid and right-axis series dotted; the right axis only appears
 * when some series uses it. Identical input gives byte-identical output.
 */
std::string emit_svg_plot(const Grid& grid, const std::vector<PlotSeries>& series, const PlotAxes& axes = {});

} // namespace dualsim

#endif // DUALSIM_SVG_HPP
