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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "marlin/baselines.hpp"
#include "marlin/generate.hpp"
#include "marlin/sweep.hpp"

#include <cmath>

using namespace marlin;

namespace {

Scenario tiny_world(int users, int slots, std::vector<double> demands, double p_max = 1e3) {
    GeneratorParams params;
    params.seed = 77;
    params.users = users;
    params.slots = slots;
    params.stations = 1;
    params.subcarriers = 2;
    params.total_bandwidth_hz = 4e6;
    params.max_power_w = p_max;
    params.offshore_min_m = 5e3;
    params.offshore_max_m = 2e4;
    Scenario s = make_paper_scenario(params);
    for (int k = 0; k < users; ++k) s.users[k].demand_bits = demands[k];
    return s;
}

}  // namespace

TEST_CASE("zero demands cost zero power in both baselines") {
    const Scenario s = tiny_world(2, 3, {0.0, 0.0});
    const ChannelTensor channel = build_channel_tensor(s);
    SolverConfig config;
    config.seed = 3;

    RngStream rng(3);
    const AllocationResult myopic = run_myopic(channel, s, config, rng);
    CHECK(myopic.avg_power == 0.0);
    CHECK(myopic.feasible);

    const AllocationResult equal = run_equal_power(channel, s, config);
    CHECK(equal.avg_power == 0.0);
    CHECK(equal.feasible);
}

TEST_CASE("single-slot myopic run matches the solver on instantaneous gains") {
    const Scenario s = tiny_world(2, 1, {1e8, 2e8});
    const ChannelTensor channel = build_channel_tensor(s);
    SolverConfig config;
    config.seed = 17;

    RngStream rng(17);
    const AllocationResult myopic = run_myopic(channel, s, config, rng);

    // rebuild the same instantaneous gains the myopic pass draws for slot 0
    ChannelTensor inst{Tensor4d(2, 1, 1, 2)};
    RngStream slot_rng = RngStream::substream(config.seed, {0x6d796f70ULL, 0});
    for (int k = 0; k < 2; ++k)
        for (int n = 0; n < 2; ++n) {
            const double x = sample_small_scale(16, slot_rng).vector_gain;
            inst.gains(k, 0, 0, n) = channel.gains(k, 0, 0, n) * x / 16.0;
        }
    const AllocationResult direct = run_allocation(inst, make_single_slot_scenario(s, 0), config);
    CHECK(myopic.avg_power == doctest::Approx(direct.avg_power).epsilon(1e-12));
    CHECK(myopic.feasible == direct.feasible);
}

TEST_CASE("myopic runs are reproducible for a fixed seed") {
    const Scenario s = tiny_world(3, 4, {1e8, 2e8, 1.5e8});
    const ChannelTensor channel = build_channel_tensor(s);
    SolverConfig config;
    config.seed = 23;
    RngStream r1(23), r2(23);
    const AllocationResult a = run_myopic(channel, s, config, r1);
    const AllocationResult b = run_myopic(channel, s, config, r2);
    CHECK((a.allocation.power.flat() == b.allocation.power.flat()).all());
    CHECK(a.avg_power == b.avg_power);
}

TEST_CASE("equal power inverts the rate at a single link") {
    const Scenario s = tiny_world(1, 1, {2e8});
    Scenario one = s;
    one.carrier.subcarrier_count = 1;
    one.carrier.subcarrier_bandwidth = one.carrier.total_bandwidth;
    one.noise.per_subcarrier_power = one.noise.density_w_per_hz * one.carrier.subcarrier_bandwidth;
    const ChannelTensor channel = build_channel_tensor(one);
    const AllocationResult r = run_equal_power(channel, one, SolverConfig{});
    REQUIRE(r.feasible);
    const double p = r.allocation.power(0, 0, 0, 0);

    auto delivered = [&](double power) {
        return one.time_grid.slot_length *
               deterministic_rate(LinkParams{power, channel.gains(0, 0, 0, 0),
                                             one.noise.per_subcarrier_power, 16,
                                             one.carrier.subcarrier_bandwidth});
    };
    double lo = 0.0, hi = 1.0;
    while (delivered(hi) < 2e8) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (delivered(mid) < 2e8 ? lo : hi) = mid;
    }
    CHECK(p == doctest::Approx(hi).epsilon(0.02));
}

TEST_CASE("equal power reports cap-bound infeasibility") {
    const Scenario s = tiny_world(2, 2, {1e13, 1e13}, 1.0);
    const ChannelTensor channel = build_channel_tensor(s);
    const AllocationResult r = run_equal_power(channel, s, SolverConfig{});
    CHECK_FALSE(r.feasible);
    CHECK(r.deficits_bits.maxCoeff() > 0.0);
    // every cell holds the cap-level power
    CHECK(r.allocation.power.flat().maxCoeff() == doctest::Approx(0.5));
}

TEST_CASE("baseline allocations satisfy the structural constraints") {
    const Scenario s = tiny_world(3, 3, {1e8, 5e7, 2e8});
    const ChannelTensor channel = build_channel_tensor(s);
    SolverConfig config;
    config.seed = 29;

    RngStream rng(29);
    for (const AllocationResult& r :
         {run_myopic(channel, s, config, rng), run_equal_power(channel, s, config)}) {
        const EvalMetrics eval =
            evaluate_allocation(r.allocation, channel, s, RateMode::deterministic);
        for (const std::string& v : eval.violations) {
            CAPTURE(v);
            CHECK(v.find("power without assignment") == std::string::npos);
            CHECK(v.find("multiple users") == std::string::npos);
            CHECK(v.find("negative power") == std::string::npos);
        }
    }
}

TEST_CASE("proposed scheme beats both baselines on a modest world") {
    GeneratorParams params;
    params.seed = 5;
    params.users = 8;
    params.slots = 24;
    params.stations = 2;
    params.subcarriers = 4;
    params.total_bandwidth_hz = 8e6;
    params.demand_min_bits = 1e8;
    params.demand_max_bits = 3e8;
    const Scenario s = make_paper_scenario(params);
    const ChannelTensor channel = build_channel_tensor(s);
    SolverConfig config;
    config.seed = 31;

    const AllocationResult proposed = run_allocation(channel, s, config);
    RngStream rng(31);
    const AllocationResult myopic = run_myopic(channel, s, config, rng);
    const AllocationResult equal = run_equal_power(channel, s, config);

    REQUIRE(proposed.feasible);
    CHECK(proposed.avg_power <= myopic.avg_power * (1.0 + 1e-9));
    CHECK(proposed.avg_power <= equal.avg_power * (1.0 + 1e-9));
}
