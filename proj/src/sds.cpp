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
#include "dualsim/sds.hpp"

#include <cmath>

namespace dualsim
{

namespace
{

long long whole_multiple(double span, double unit, const char* what)
{
    const double ratio = span / unit;
    const long long n  = std::llround(ratio);
    if (n < 1 || std::abs(static_cast<double>(n) * unit - span) > 1e-9 * span) {
        throw ConfigError(std::string(what) + " must be a whole multiple of dt");
    }
    return n;
}

} // namespace

void IntegratorConfig::validate() const
{
    if (!(dt > 0) || !std::isfinite(dt)) {
        throw ConfigError("dt must be finite and > 0");
    }
    if (!(t_end > 0) || !std::isfinite(t_end)) {
        throw ConfigError("t_end must be finite and > 0");
    }
    if (!(sample_every > 0) || !std::isfinite(sample_every)) {
        throw ConfigError("sample_every must be finite and > 0");
    }
    if (dt > sample_every || sample_every > t_end) {
        throw ConfigError("integrator requires dt <= sample_every <= t_end");
    }
    if (!(blowup_threshold > 0)) {
        throw ConfigError("blowup_threshold must be > 0");
    }
    whole_multiple(t_end, dt, "t_end");
    whole_multiple(sample_every, dt, "sample_every");
}

long long IntegratorConfig::steps() const
{
    return whole_multiple(t_end, dt, "t_end");
}

long long IntegratorConfig::sample_stride() const
{
    return whole_multiple(sample_every, dt, "sample_every");
}

} // namespace dualsim
