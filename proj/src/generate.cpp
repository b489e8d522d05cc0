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
#include "marlin/generate.hpp"

#include "marlin/rng.hpp"

#include <cmath>

namespace marlin {

Scenario make_paper_scenario(const GeneratorParams& p) {
    Scenario s;
    s.carrier.carrier_frequency = p.carrier_frequency_hz;
    s.carrier.total_bandwidth = p.total_bandwidth_hz;
    s.carrier.subcarrier_count = p.subcarriers;
    s.carrier.subcarrier_bandwidth = p.total_bandwidth_hz / p.subcarriers;
    s.time_grid.slot_count = p.slots;
    s.time_grid.slot_length = p.slot_length_s;
    s.noise.density_dbm_per_hz = p.noise_density_dbm_per_hz;
    s.noise.density_w_per_hz = std::pow(10.0, (p.noise_density_dbm_per_hz - 30.0) / 10.0);
    s.noise.per_subcarrier_power = s.noise.density_w_per_hz * s.carrier.subcarrier_bandwidth;

    for (int j = 0; j < p.stations; ++j) {
        BaseStation bs;
        bs.id = j;
        const double frac = p.stations > 1 ? static_cast<double>(j) / (p.stations - 1) : 0.5;
        bs.position = Eigen::Vector2d{(frac - 0.5) * p.coast_span_m, 0.0};
        bs.antenna_height = p.bs_antenna_height_m;
        bs.antenna_count = p.antennas;
        bs.max_power = p.max_power_w;
        s.base_stations.push_back(bs);
    }

    RngStream rng = RngStream::substream(p.seed, {0x9e4e});
    const double duration = p.slots * p.slot_length_s;
    for (int k = 0; k < p.users; ++k) {
        User u;
        u.id = k;
        u.antenna_height = p.user_antenna_height_m;
        u.demand_bits =
            p.demand_min_bits + rng.uniform() * (p.demand_max_bits - p.demand_min_bits);

        const double offshore =
            p.offshore_min_m + rng.uniform() * (p.offshore_max_m - p.offshore_min_m);
        const double speed = p.speed_min_mps + rng.uniform() * (p.speed_max_mps - p.speed_min_mps);
        const double direction = rng.uniform() < 0.5 ? 1.0 : -1.0;
        // alongshore track passing abeam of the station cluster late in the
        // voyage, so that longer horizons include better channel conditions
        const double pass_x = (rng.uniform() - 0.5) * p.coast_span_m;
        const double pass_fraction = 0.35 + rng.uniform() * 0.6;
        const double x0 = pass_x - direction * speed * pass_fraction * duration;
        const Eigen::Vector2d start{x0, offshore};
        const Eigen::Vector2d end{x0 + direction * speed * duration, offshore};
        u.lane.waypoints = {Waypoint{0.0, start}, Waypoint{duration, end}};
        s.users.push_back(u);
    }

    validate_scenario(s);
    return s;
}

}  // namespace marlin
