/*
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef MARLIN_SWEEP_HPP
#define MARLIN_SWEEP_HPP

#include "marlin/scenario.hpp"
#include "marlin/solver.hpp"

#include <string>
#include <vector>

namespace marlin {

enum class Scheme { proposed, myopic, equal_power };

std::string scheme_name(Scheme scheme);
Scheme parse_scheme(const std::string& name);

enum class SweepAxis { slots_m, subcarriers_n };

struct SweepSpec {
    SweepAxis axis = SweepAxis::slots_m;
    std::vector<int> values;     // nonempty, strictly increasing
    std::vector<Scheme> schemes; // nonempty
    int replications = 1;
};

struct SweepRow {
    SweepAxis axis;
    int value = 0;
    Scheme scheme = Scheme::proposed;
    int replication = 0;
    double avg_power_w = 0.0;
    bool feasible = false;
    int iterations = 0;
};

/// Service horizon truncated to the first `slots` slots; demands unchanged.
Scenario with_slot_count(const Scenario& base, int slots);

/// Subcarrier grid re-divided at fixed total bandwidth.
Scenario with_subcarrier_count(const Scenario& base, int subcarriers);

/// One solver run per (axis value, scheme, replication), in a deterministic
/// row order regardless of `jobs`. Myopic draws are seeded per cell from
/// config.seed and the replication index.
std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec,
                                const SolverConfig& config, int jobs);

}  // namespace marlin

#endif
