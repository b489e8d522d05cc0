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
#ifndef MARLIN_BASELINES_HPP
#define MARLIN_BASELINES_HPP

#include "marlin/solver.hpp"

namespace marlin {

enum class BaselineKind { myopic_full_csit, equal_power };

/// Per-slot re-optimization with instantaneous effective gains beta * X / L
/// (X a fresh fading draw per link) and per-slot demand C/M. Each slot is an
/// independent single-slot run of the iterative solver; results are
/// aggregated into one allocation.
AllocationResult run_myopic(const ChannelTensor& channel, const Scenario& scenario,
                            const SolverConfig& config, RngStream& rng);

/// Greedy gain-based assignment with one common per-subcarrier power level,
/// bisected until every user's demand is met (or the per-station cap binds,
/// in which case the result is marked infeasible).
AllocationResult run_equal_power(const ChannelTensor& channel, const Scenario& scenario,
                                 const SolverConfig& config);

/// Single-slot scenario view used by the myopic baseline: slot m's geometry,
/// demands scaled to C/M.
Scenario make_single_slot_scenario(const Scenario& scenario, int m);

}  // namespace marlin

#endif
