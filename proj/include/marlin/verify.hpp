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
#ifndef MARLIN_VERIFY_HPP
#define MARLIN_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace marlin::verify {

/// One verification check: an observed quantity against its tolerance.
struct CheckResult {
    std::string name;
    double observed = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Row of the rate-verification CSV (deterministic equivalent vs Monte Carlo).
struct RateRow {
    double snr_db = 0.0;
    double rate_de = 0.0;
    double rate_mc = 0.0;
    double mc_stderr = 0.0;
    double rel_err = 0.0;
};

struct RateReport {
    std::vector<RateRow> rows;
    std::vector<CheckResult> checks;
};

/// Fixed-point equation: residuals and bounds over random links plus the
/// single-antenna closed form.
std::vector<CheckResult> fixedpoint_suite(std::uint64_t seed);

/// Deterministic equivalent vs Monte Carlo across an SNR grid, plus the exact
/// single-antenna ergodic value.
RateReport rate_suite(std::uint64_t seed);

/// Surrogate identities: f/g substitution, monotonicity around the fixed
/// point, and grid-search tightness of the surrogate minimum.
std::vector<CheckResult> theorem1_suite(std::uint64_t seed);

/// Desk-scale optimality: solver objective against exhaustive enumeration.
std::vector<CheckResult> smallcase_suite(std::uint64_t seed);

bool all_pass(const std::vector<CheckResult>& checks);

}  // namespace marlin::verify

#endif
