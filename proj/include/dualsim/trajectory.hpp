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
#ifndef DUALSIM_TRAJECTORY_HPP
#define DUALSIM_TRAJECTORY_HPP

#include "dualsim/model.hpp"

#include <cstddef>
#include <vector>

namespace dualsim
{

enum class Termination
{
    Completed,
    BlowUp,
    Extinct,
};

enum class Paradigm
{
    SDS,
    ABS,
};

std::string_view to_string(Termination termination);
std::string_view to_string(Paradigm paradigm);

/**
 * Time-ordered population samples of one simulation run.
 *
 * Times are strictly increasing and start at 0 with the initial condition. One-equation
 * models carry populations == 1 and keep the effector component at zero.
 */
template <typename Value, typename Time = double>
struct Trajectory {
    std::vector<Time> times;
    std::vector<Vector2<Value>> states;
    int populations         = 1;
    Termination termination = Termination::Completed;
    Paradigm paradigm       = Paradigm::SDS;

    std::size_t size() const
    {
        return times.size();
    }
    bool empty() const
    {
        return times.empty();
    }
    Time end_time() const
    {
        return times.back();
    }

    void push(Time t, const Vector2<Value>& x)
    {
        times.push_back(t);
        states.push_back(x);
    }

    bool operator==(const Trajectory&) const = default;
};

using SdsTrajectory = Trajectory<double>;
using AbsTrajectory = Trajectory<std::int64_t>;

} // namespace dualsim

#endif // DUALSIM_TRAJECTORY_HPP
