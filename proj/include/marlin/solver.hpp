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
#ifndef MARLIN_SOLVER_HPP
#define MARLIN_SOLVER_HPP

#include "marlin/channel.hpp"
#include "marlin/rate.hpp"
#include "marlin/scenario.hpp"
#include "marlin/tensor.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace marlin {

/// Joint power/assignment solution. Power is strictly zero wherever the
/// assignment indicator is zero, and each (m, j, n) cell serves at most one
/// user.
struct AllocationTensor {
    Tensor4d power;        // W
    Tensor4u8 assignment;  // 0/1
};

/// Multiplier state of the dual iteration.
struct DualState {
    Eigen::ArrayXXd gamma;  // (M, J) per-slot/per-BS power price
    Eigen::ArrayXd nu;      // (K) per-user data price
    Tensor4d omega;         // (K, M, J, N) substitution variable, ln u*
    int iteration = 0;
};

struct SolverConfig {
    int max_iterations = 600;
    double step_gamma_0 = 0.0;  // <= 0 selects an instance-scaled default
    double step_nu_0 = 0.0;     // <= 0 selects an instance-scaled default
    double step_decay = 0.51;   // delta(i) = delta0 / i^step_decay
    double convergence_tol = 1e-4;
    int convergence_window = 5;
    double fixed_point_tol = 1e-10;
    std::uint64_t seed = 0;
    int repair_rounds = 40;        // cap/QoS repair passes after the loop
    int local_search_moves = 200;  // bounded exact reassignment moves, 0 disables
    int jobs = 1;                  // parallelism across (m, j) blocks
};

struct AllocationResult {
    AllocationTensor allocation;
    double avg_power = 0.0;          // objective: total power / (K M)
    Eigen::ArrayXd delivered_bits;   // (K)
    Eigen::ArrayXd deficits_bits;    // (K) max(demand - delivered, 0)
    bool feasible = false;
    DualState dual_state;
    int iterations_used = 0;
    std::vector<double> convergence_trace;  // objective per dual iteration
};

enum class RateMode { deterministic, monte_carlo };

struct EvalMetrics {
    double avg_power = 0.0;
    Eigen::ArrayXd delivered_bits;    // (K)
    Eigen::ArrayXXd station_power;    // (M, J) sums of assigned power
    std::vector<std::string> violations;
};

/// Closed-form power step from the Lagrangian stationarity condition:
///   P = [ nu Bs dT log2(e) / (gamma + 1/(KM)) - e^w sigma^2 / beta ]^+
/// Returns 0 when beta == 0.
double power_update(double nu_k, double gamma_mj, double omega, double beta, double noise,
                    double bs_bandwidth, double slot_length, int users, int slots);

/// Assignment preference; smaller is better, negative means worth serving:
///   U = P/(KM) + gamma P - nu Bs dT g(P, w)
double assignment_metric(double p_hat, double omega, double nu_k, double gamma_mj, double beta,
                         double noise, double bs_bandwidth, double slot_length, int users,
                         int slots, int antennas);

/// Winner of one cell: index of the smallest metric when it is negative,
/// otherwise -1 (cell left idle). Ties break to the lowest user index.
int assign_subcarriers(const Eigen::ArrayXd& metrics);

/// Projected subgradient step for the per-(m, j) power price.
double update_gamma(double gamma_mj, double step, double p_max, double used_power_mj);

/// Projected subgradient step for the per-user data price.
double update_nu(double nu_k, double step, double demand_bits, double delivered_bits_k);

/// Substitution variable pinned at the tightness point: w = ln u*(P).
double update_omega(double p_hat, double beta, double noise, int antennas);

/// Full iterative allocation: dual subgradient loop over (m, j, n, k) with the
/// updates above, followed by primal repair (exact per-user power polish, cap
/// enforcement, bounded local reassignment search). Deterministic for a given
/// scenario and config.
AllocationResult run_allocation(const ChannelTensor& channel, const Scenario& scenario,
                                const SolverConfig& config);

/// Objective, per-user delivered bits, per-(m, j) power sums and the list of
/// constraint violations for an arbitrary allocation.
EvalMetrics evaluate_allocation(const AllocationTensor& allocation, const ChannelTensor& channel,
                                const Scenario& scenario, RateMode mode, long mc_samples = 20000,
                                std::uint64_t seed = 0);

}  // namespace marlin

#endif
