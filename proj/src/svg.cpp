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
#include "dualsim/svg.hpp"

#include "dualsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace dualsim
{

namespace
{

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
constexpr double margin_left   = 80;
constexpr double margin_right  = 80;
constexpr double margin_top    = 40;
constexpr double margin_bottom = 50;
constexpr int ticks            = 5;

std::string fixed(double v)
{
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.2f", v == 0.0 ? 0.0 : v);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string tick_label(double v)
{
    char buf[64];
    const int n = std::snprintf(buf, sizeof buf, "%.4g", v == 0.0 ? 0.0 : v);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string escape(const std::string& text)
{
    std::string out;
    for (char ch : text) {
        switch (ch) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

struct Range {
    double lo = 0.0;
    double hi = 1.0;
    bool used = false;

    void include(const Eigen::VectorXd& v)
    {
        if (!used) {
            lo   = std::min(0.0, v.minCoeff());
            hi   = v.maxCoeff();
            used = true;
        }
        else {
            lo = std::min(lo, v.minCoeff());
            hi = std::max(hi, v.maxCoeff());
        }
    }
    void finish()
    {
        if (!(hi > lo)) {
            hi = lo + 1.0;
        }
    }
};

} // namespace

std::string emit_svg_plot(const Grid& grid, const std::vector<PlotSeries>& series, const PlotAxes& axes)
{
    if (series.empty()) {
        throw ConfigError("plot needs at least one series");
    }
    if (grid.size < 2) {
        throw ConfigError("plot grid needs at least two points");
    }
    Range left;
    Range right;
    for (const auto& s : series) {
        if (static_cast<std::size_t>(s.values.size()) != grid.size) {
            throw ConfigError("series '" + s.label + "' does not match the plot grid");
        }
        if (!s.values.allFinite()) {
            throw ConfigError("series '" + s.label + "' has non-finite values");
        }
        (s.axis == Axis::Left ? left : right).include(s.values);
    }
    left.finish();
    right.finish();

    const double w  = axes.width;
    const double h  = axes.height;
    const double x0 = margin_left;
    const double x1 = w - margin_right;
    const double y0 = h - margin_bottom;
    const double y1 = margin_top;
    auto px         = [&](double t) {
        return x0 + (x1 - x0) * t / grid.end();
    };
    auto py = [&](double v, const Range& r) {
        return y0 - (y0 - y1) * (v - r.lo) / (r.hi - r.lo);
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(axes.width) +
           "\" height=\"" + std::to_string(axes.height) + "\" viewBox=\"0 0 " + std::to_string(axes.width) + " " +
           std::to_string(axes.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!axes.title.empty()) {
        out += "<text x=\"" + fixed(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"16\">" + escape(axes.title) + "</text>\n";
    }

    out += "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
    out += "<line x1=\"" + fixed(x0) + "\" y1=\"" + fixed(y0) + "\" x2=\"" + fixed(x1) + "\" y2=\"" + fixed(y0) +
           "\"/>\n";
    out += "<line x1=\"" + fixed(x0) + "\" y1=\"" + fixed(y0) + "\" x2=\"" + fixed(x0) + "\" y2=\"" + fixed(y1) +
           "\"/>\n";
    if (right.used) {
        out += "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(y0) + "\" x2=\"" + fixed(x1) + "\" y2=\"" +
               fixed(y1) + "\"/>\n";
    }
    out += "</g>\n";

    out += "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int i = 0; i <= ticks; ++i) {
        const double f = static_cast<double>(i) / ticks;
        const double t = f * grid.end();
        const double x = px(t);
        out += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(y0) + "\" x2=\"" + fixed(x) + "\" y2=\"" +
               fixed(y0 + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(y0 + 18) + "\" text-anchor=\"middle\">" +
               tick_label(t) + "</text>\n";

        const double lv = left.lo + f * (left.hi - left.lo);
        const double ly = py(lv, left);
        out += "<line x1=\"" + fixed(x0 - 5) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(x0) + "\" y2=\"" +
               fixed(ly) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fixed(x0 - 8) + "\" y=\"" + fixed(ly + 4) + "\" text-anchor=\"end\">" +
               tick_label(lv) + "</text>\n";
        if (right.used) {
            const double rv = right.lo + f * (right.hi - right.lo);
            const double ry = py(rv, right);
            out += "<line x1=\"" + fixed(x1) + "\" y1=\"" + fixed(ry) + "\" x2=\"" + fixed(x1 + 5) + "\" y2=\"" +
                   fixed(ry) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + fixed(x1 + 8) + "\" y=\"" + fixed(ry + 4) + "\" text-anchor=\"start\">" +
                   tick_label(rv) + "</text>\n";
        }
    }
    out += "<text x=\"" + fixed((x0 + x1) / 2) + "\" y=\"" + fixed(h - 10) + "\" text-anchor=\"middle\">" +
           escape(axes.x_label) + "</text>\n";
    out += "<text x=\"16\" y=\"" + fixed((y0 + y1) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
           fixed((y0 + y1) / 2) + ")\">" + escape(axes.left_label) + "</text>\n";
    if (right.used) {
        out += "<text x=\"" + fixed(w - 16) + "\" y=\"" + fixed((y0 + y1) / 2) +
               "\" text-anchor=\"middle\" transform=\"rotate(90 " + fixed(w - 16) + " " + fixed((y0 + y1) / 2) +
               ")\">" + escape(axes.right_label) + "</text>\n";
    }
    out += "</g>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& item   = series[s];
        const Range& range = item.axis == Axis::Left ? left : right;
        const char* colour = palette[s % std::size(palette)];
        out += "<polyline class=\"" + std::string(item.axis == Axis::Left ? "left" : "right") + "\" fill=\"none\" "
               "stroke=\"" + colour + "\" stroke-width=\"1.5\"";
        if (item.axis == Axis::Right) {
            out += " stroke-dasharray=\"2,3\"";
        }
        out += " points=\"";
        for (std::size_t k = 0; k < grid.size; ++k) {
            if (k > 0) {
                out += ' ';
            }
            out += fixed(px(grid.time(k))) + "," + fixed(py(item.values(static_cast<Eigen::Index>(k)), range));
        }
        out += "\"/>\n";

        const double ly = margin_top + 14.0 * static_cast<double>(s);
        out += "<line x1=\"" + fixed(x0 + 10) + "\" y1=\"" + fixed(ly) + "\" x2=\"" + fixed(x0 + 30) + "\" y2=\"" +
               fixed(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"1.5\"" +
               (item.axis == Axis::Right ? " stroke-dasharray=\"2,3\"" : "") + "/>\n";
        out += "<text x=\"" + fixed(x0 + 36) + "\" y=\"" + fixed(ly + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(item.label) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace dualsim
