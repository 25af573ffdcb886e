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
#ifndef DUALSIM_TESTS_WILCOXON_ORACLE_HPP
#define DUALSIM_TESTS_WILCOXON_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

namespace dualsim::oracle
{

// Two-sided rank-sum p-value by enumerating every assignment of the pooled observations to the
// first sample. Midranks are computed by counting, independently of the library's sort-based pass.
inline double brute_force_ranksum_p(const std::vector<double>& x, const std::vector<double>& y)
{
    std::vector<double> pooled(x);
    pooled.insert(pooled.end(), y.begin(), y.end());
    const std::size_t n = pooled.size();
    std::vector<std::int64_t> doubled_rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int64_t less = 0, equal = 0;
        for (double v : pooled) {
            less += v < pooled[i] ? 1 : 0;
            equal += v == pooled[i] ? 1 : 0;
        }
        doubled_rank[i] = 2 * less + equal + 1;
    }
    std::int64_t observed = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        observed += doubled_rank[i];
    }
    std::uint64_t lower = 0, upper = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != x.size()) {
            continue;
        }
        std::int64_t sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sum += doubled_rank[i];
            }
        }
        ++total;
        lower += sum <= observed ? 1 : 0;
        upper += sum >= observed ? 1 : 0;
    }
    return std::min(1.0, 2.0 * static_cast<double>(std::min(lower, upper)) / static_cast<double>(total));
}

} // namespace dualsim::oracle

#endif // DUALSIM_TESTS_WILCOXON_ORACLE_HPP
