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
#include "marlin/sweep.hpp"

#include "marlin/baselines.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace marlin {

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::proposed: return "proposed";
        case Scheme::myopic: return "myopic";
        case Scheme::equal_power: return "equal_power";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    if (name == "proposed") return Scheme::proposed;
    if (name == "myopic") return Scheme::myopic;
    if (name == "equal_power") return Scheme::equal_power;
    throw std::invalid_argument("unknown scheme: " + name);
}

Scenario with_slot_count(const Scenario& base, int slots) {
    Scenario s = base;
    s.time_grid.slot_count = slots;
    validate_scenario(s);
    return s;
}

Scenario with_subcarrier_count(const Scenario& base, int subcarriers) {
    Scenario s = base;
    s.carrier.subcarrier_count = subcarriers;
    s.carrier.subcarrier_bandwidth = s.carrier.total_bandwidth / subcarriers;
    s.noise.per_subcarrier_power = s.noise.density_w_per_hz * s.carrier.subcarrier_bandwidth;
    validate_scenario(s);
    return s;
}

std::vector<SweepRow> run_sweep(const Scenario& base, const SweepSpec& spec,
                                const SolverConfig& config, int jobs) {
    if (spec.values.empty()) throw std::invalid_argument("sweep: values must be nonempty");
    for (std::size_t i = 1; i < spec.values.size(); ++i)
        if (spec.values[i] <= spec.values[i - 1])
            throw std::invalid_argument("sweep: values must be strictly increasing");
    if (spec.schemes.empty()) throw std::invalid_argument("sweep: schemes must be nonempty");
    if (spec.replications < 1) throw std::invalid_argument("sweep: replications must be >= 1");

    struct Cell {
        int value;
        Scheme scheme;
        int replication;
    };
    std::vector<Cell> cells;
    for (int value : spec.values)
        for (Scheme scheme : spec.schemes)
            for (int r = 0; r < spec.replications; ++r) cells.push_back(Cell{value, scheme, r});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            const Cell& cell = cells[i];
            Scenario scenario = spec.axis == SweepAxis::slots_m
                                    ? with_slot_count(base, cell.value)
                                    : with_subcarrier_count(base, cell.value);
            ChannelTensor channel = build_channel_tensor(scenario);
            SolverConfig cfg = config;
            cfg.jobs = 1;
            cfg.seed = RngStream::substream(config.seed,
                                            {static_cast<std::uint64_t>(cell.value),
                                             static_cast<std::uint64_t>(cell.scheme),
                                             static_cast<std::uint64_t>(cell.replication)})
                           .next_u64();
            AllocationResult result;
            switch (cell.scheme) {
                case Scheme::proposed:
                    result = run_allocation(channel, scenario, cfg);
                    break;
                case Scheme::myopic: {
                    RngStream rng(cfg.seed);
                    result = run_myopic(channel, scenario, cfg, rng);
                    break;
                }
                case Scheme::equal_power:
                    result = run_equal_power(channel, scenario, cfg);
                    break;
            }
            rows[i] = SweepRow{spec.axis,   cell.value,       cell.scheme,    cell.replication,
                               result.avg_power, result.feasible, result.iterations_used};
        }
    };

    const int workers = std::max(1, jobs);
    if (workers == 1 || cells.size() <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace marlin
