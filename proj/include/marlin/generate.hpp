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
#ifndef MARLIN_GENERATE_HPP
#define MARLIN_GENERATE_HPP

#include "marlin/scenario.hpp"

#include <cstdint>

namespace marlin {

/// Synthetic world in the style of the published evaluation setup: a few
/// high-power stations along a straight coastline serving ships on random
/// straight alongshore tracks within the offshore band. Closest approaches
/// are biased toward the later part of the voyage so that longer horizons
/// genuinely enlarge the useful optimization space.
struct GeneratorParams {
    std::uint64_t seed = 1;
    int stations = 3;
    int users = 90;
    int slots = 250;
    int subcarriers = 15;
    double slot_length_s = 60.0;
    double carrier_frequency_hz = 1.9e9;
    double total_bandwidth_hz = 30e6;  // 15 subcarriers of 2 MHz
    double bs_antenna_height_m = 100.0;
    double user_antenna_height_m = 10.0;
    int antennas = 16;
    double max_power_w = 40.0;
    double noise_density_dbm_per_hz = -174.0;
    double demand_min_bits = 2e8;
    double demand_max_bits = 6e8;
    double offshore_min_m = 2e3;
    double offshore_max_m = 5e4;
    double speed_min_mps = 5.0;
    double speed_max_mps = 15.0;
    double coast_span_m = 6e4;  // stations evenly placed across this span
};

Scenario make_paper_scenario(const GeneratorParams& params);

}  // namespace marlin

#endif
