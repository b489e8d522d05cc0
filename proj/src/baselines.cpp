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
#include "marlin/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace marlin {

Scenario make_single_slot_scenario(const Scenario& scenario, int m) {
    Scenario slice = scenario;
    const double t0 = m * scenario.time_grid.slot_length;
    const double t1 = t0 + scenario.time_grid.slot_length;
    slice.time_grid.slot_count = 1;
    for (User& u : slice.users) {
        const Eigen::Vector2d a = position_at(u.lane, t0);
        const Eigen::Vector2d b = position_at(u.lane, t1);
        u.lane.waypoints = {Waypoint{0.0, a}, Waypoint{scenario.time_grid.slot_length, b}};
        u.demand_bits /= scenario.time_grid.slot_count;
    }
    return slice;
}

AllocationResult run_myopic(const ChannelTensor& channel, const Scenario& scenario,
                            const SolverConfig& config, RngStream& rng) {
    const int K = scenario.user_count();
    const int M = scenario.time_grid.slot_count;
    const int J = scenario.station_count();
    const int N = scenario.carrier.subcarrier_count;
    if (channel.gains.users() != K || channel.gains.slots() != M)
        throw std::invalid_argument("run_myopic: channel tensor shape does not match scenario");
    (void)rng;  // draws are taken from per-slot substreams for reproducibility

    AllocationResult agg;
    agg.allocation.power = Tensor4d(K, M, J, N);
    agg.allocation.assignment = Tensor4u8(K, M, J, N);
    agg.dual_state.omega = Tensor4d(K, M, J, N);
    agg.dual_state.gamma = Eigen::ArrayXXd::Zero(M, J);
    agg.dual_state.nu = Eigen::ArrayXd::Zero(K);
    agg.delivered_bits = Eigen::ArrayXd::Zero(K);
    agg.feasible = true;

    double total_power = 0.0;
    for (int m = 0; m < M; ++m) {
        Scenario slice = make_single_slot_scenario(scenario, m);
        ChannelTensor inst{Tensor4d(K, 1, J, N)};
        RngStream slot_rng = RngStream::substream(config.seed, {0x6d796f70ULL, static_cast<std::uint64_t>(m)});
        for (int k = 0; k < K; ++k)
            for (int j = 0; j < J; ++j) {
                const int L = scenario.base_stations[j].antenna_count;
                for (int n = 0; n < N; ++n) {
                    const double x = sample_small_scale(L, slot_rng).vector_gain;
                    inst.gains(k, 0, j, n) = channel.gains(k, m, j, n) * x / L;
                }
            }

        AllocationResult slot = run_allocation(inst, slice, config);
        agg.feasible = agg.feasible && slot.feasible;
        agg.iterations_used = std::max(agg.iterations_used, slot.iterations_used);
        for (int k = 0; k < K; ++k) {
            agg.delivered_bits[k] += slot.delivered_bits[k];
            agg.dual_state.nu[k] += slot.dual_state.nu[k] / M;
            for (int j = 0; j < J; ++j)
                for (int n = 0; n < N; ++n) {
                    agg.allocation.power(k, m, j, n) = slot.allocation.power(k, 0, j, n);
                    agg.allocation.assignment(k, m, j, n) = slot.allocation.assignment(k, 0, j, n);
                    agg.dual_state.omega(k, m, j, n) = slot.dual_state.omega(k, 0, j, n);
                    total_power += slot.allocation.power(k, 0, j, n);
                }
        }
        for (int j = 0; j < J; ++j) agg.dual_state.gamma(m, j) = slot.dual_state.gamma(0, j);
        agg.convergence_trace.push_back(slot.avg_power);
    }
    agg.avg_power = total_power / (static_cast<double>(K) * M);
    Eigen::ArrayXd demand(K);
    for (int k = 0; k < K; ++k) demand[k] = scenario.users[k].demand_bits;
    agg.deficits_bits = (demand - agg.delivered_bits).max(0.0);
    agg.dual_state.iteration = agg.iterations_used;
    return agg;
}

AllocationResult run_equal_power(const ChannelTensor& channel, const Scenario& scenario,
                                 const SolverConfig& config) {
    (void)config;
    const int K = scenario.user_count();
    const int M = scenario.time_grid.slot_count;
    const int J = scenario.station_count();
    const int N = scenario.carrier.subcarrier_count;
    const double sigma2 = scenario.noise.per_subcarrier_power;
    const double bs = scenario.carrier.subcarrier_bandwidth;
    const double dt = scenario.time_grid.slot_length;

    // greedy assignment: every cell goes to its strongest user
    std::vector<int> winner(static_cast<std::size_t>(M) * J * N, -1);
    auto id_of = [&](int m, int j, int n) { return (m * J + j) * N + n; };
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < J; ++j)
            for (int n = 0; n < N; ++n) {
                int best = 0;
                double best_gain = channel.gains(0, m, j, n);
                for (int k = 1; k < K; ++k)
                    if (channel.gains(k, m, j, n) > best_gain) {
                        best_gain = channel.gains(k, m, j, n);
                        best = k;
                    }
                winner[id_of(m, j, n)] = best;
            }

    double p_cap = std::numeric_limits<double>::infinity();
    for (const BaseStation& b : scenario.base_stations)
        p_cap = std::min(p_cap, b.max_power / N);

    auto delivered_at = [&](double p, Eigen::ArrayXd& out) {
        out.setZero();
        for (int m = 0; m < M; ++m)
            for (int j = 0; j < J; ++j)
                for (int n = 0; n < N; ++n) {
                    const int k = winner[id_of(m, j, n)];
                    const double beta = channel.gains(k, m, j, n);
                    if (beta <= 0.0 || p <= 0.0) continue;
                    const double s = p * beta / sigma2;
                    const int L = scenario.base_stations[j].antenna_count;
                    out[k] += dt * bs * de_spectral_efficiency(s, fixed_point_root(s, L), L);
                }
    };

    Eigen::ArrayXd demand(K);
    for (int k = 0; k < K; ++k) demand[k] = scenario.users[k].demand_bits;

    Eigen::ArrayXd delivered(K);
    bool feasible = true;
    double level = 0.0;
    if (demand.maxCoeff() > 0.0) {
        delivered_at(p_cap, delivered);
        if ((delivered < demand).any()) {
            feasible = false;
            level = p_cap;
        } else {
            double lo = 0.0, hi = p_cap;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                delivered_at(mid, delivered);
                if ((delivered < demand).any())
                    lo = mid;
                else
                    hi = mid;
            }
            level = hi;
        }
    }
    delivered_at(level, delivered);

    AllocationResult result;
    result.allocation.power = Tensor4d(K, M, J, N);
    result.allocation.assignment = Tensor4u8(K, M, J, N);
    result.dual_state.omega = Tensor4d(K, M, J, N);
    result.dual_state.gamma = Eigen::ArrayXXd::Zero(M, J);
    result.dual_state.nu = Eigen::ArrayXd::Zero(K);
    for (int m = 0; m < M; ++m)
        for (int j = 0; j < J; ++j)
            for (int n = 0; n < N; ++n) {
                const int k = winner[id_of(m, j, n)];
                result.allocation.assignment(k, m, j, n) = 1;
                result.allocation.power(k, m, j, n) = level;
                const double beta = channel.gains(k, m, j, n);
                if (level > 0.0 && beta > 0.0)
                    result.dual_state.omega(k, m, j, n) =
                        std::log(fixed_point_root(level * beta / sigma2,
                                                  scenario.base_stations[j].antenna_count));
            }
    result.avg_power = level * static_cast<double>(M) * J * N / (static_cast<double>(K) * M);
    result.delivered_bits = delivered;
    result.deficits_bits = (demand - delivered).max(0.0);
    result.feasible = feasible;
    result.iterations_used = 0;
    return result;
}

}  // namespace marlin
