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
#ifndef MARLIN_IO_HPP
#define MARLIN_IO_HPP

#include "marlin/solver.hpp"
#include "marlin/sweep.hpp"
#include "marlin/verify.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace marlin {

/// Fixed 9-significant-digit rendering used by every CSV writer; keeps
/// output byte-stable across runs.
std::string format_g9(double value);

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
void write_rate_csv(const std::vector<verify::RateRow>& rows, std::ostream& out);
void write_checks_csv(const std::vector<verify::CheckResult>& checks, std::ostream& out);

/// Allocation dump: one row per assigned cell, columns k,m,j,n,power_w,assigned.
void write_allocation_csv(const AllocationTensor& allocation, std::ostream& out);

/// Result summary as a JSON document: avg_power_w, feasible,
/// per_user_delivered_bits, iterations_used, plus a deficit table when the
/// run is infeasible.
std::string result_summary(const AllocationResult& result, const Scenario& scenario);

}  // namespace marlin

#endif
