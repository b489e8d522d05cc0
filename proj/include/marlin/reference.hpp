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
#ifndef MARLIN_REFERENCE_HPP
#define MARLIN_REFERENCE_HPP

#include "marlin/channel.hpp"
#include "marlin/scenario.hpp"

#include <functional>
#include <optional>
#include <vector>

/// Slow, independent implementations used to cross-check the fast paths:
/// closed forms, grid searches, derivative-free convex solves and exhaustive
/// enumeration. Nothing here shares code with the solver.
namespace marlin::reference {

/// Exponential integral E1(x), x > 0 (series for small x, continued fraction
/// otherwise).
double exponential_integral_e1(double x);

/// Exact single-antenna ergodic efficiency E[log2(1 + s X)], X ~ Exp(1):
///   e^{1/s} E1(1/s) / ln 2   (bits/s/Hz)
double exact_ergodic_efficiency_l1(double snr);

/// Erlang (Gamma with integer shape) CDF, for goodness-of-fit checks.
double erlang_cdf(int shape, double x);

/// Minimum of a scalar function over [lo, hi] by dense grid scan plus one
/// parabolic refinement around the best grid point.
struct GridMinimum {
    double argmin = 0.0;
    double value = 0.0;
};
GridMinimum grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                          double step);

/// One link of the enumeration oracle.
struct OracleLink {
    double gain = 0.0;
    int station = 0;  // j index (for cap bookkeeping)
    int slot = 0;     // m index
};

/// Derivative-free minimum-power fill of one user's links to meet a bit
/// demand: min sum(P) s.t. sum_i dT Bs r(P_i) >= demand, P_i in [0, cap].
/// Returns std::nullopt when the demand is unreachable even at the cap.
struct OracleFill {
    double total_power = 0.0;
    std::vector<double> power;
};
std::optional<OracleFill> waterfill_demand(const std::vector<OracleLink>& links, double demand,
                                           double sigma2, int antennas, double bs_bandwidth,
                                           double slot_length, double power_cap);

/// Exhaustive optimum of the joint assignment/power problem on a desk-scale
/// instance: every cell assignment in {idle, user 0..K-1} is enumerated and
/// the inner convex power problem solved per user. Cap-violating assignments
/// are discarded. Returns the best objective (total power / (K M)), or
/// nullopt when no assignment is feasible.
std::optional<double> brute_force_objective(const ChannelTensor& channel,
                                            const Scenario& scenario);

}  // namespace marlin::reference

#endif
