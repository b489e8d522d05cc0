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
#ifndef MARLIN_SCENARIO_HPP
#define MARLIN_SCENARIO_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

namespace marlin {

/// Error raised for scenario documents that fail to parse or violate an
/// invariant; the message names the offending entity or field.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// Onshore base station. Positions are planar shore coordinates in meters;
/// the antenna height enters the propagation model separately.
struct BaseStation {
    int id = 0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double antenna_height = 0.0;  // H1, m
    int antenna_count = 1;        // L
    double max_power = 0.0;       // Pmax, W
};

struct Waypoint {
    double t = 0.0;  // s
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
};

/// Timestamped piecewise-linear track. Waypoint times are strictly
/// increasing and the track must cover the whole service duration.
struct Lane {
    std::vector<Waypoint> waypoints;
};

struct User {
    int id = 0;
    Lane lane;
    double antenna_height = 0.0;  // H2, m
    double demand_bits = 0.0;     // Cmin
};

struct CarrierPlan {
    double carrier_frequency = 0.0;     // Hz
    double total_bandwidth = 0.0;       // B, Hz
    int subcarrier_count = 0;           // N
    double subcarrier_bandwidth = 0.0;  // Bs = B/N, Hz
};

struct TimeGrid {
    int slot_count = 0;      // M
    double slot_length = 0;  // dT, s
};

struct NoiseModel {
    double density_dbm_per_hz = 0.0;    // as given in the document
    double density_w_per_hz = 0.0;      // W/Hz
    double per_subcarrier_power = 0.0;  // sigma_n^2 = density * Bs, W
};

struct Scenario {
    std::vector<BaseStation> base_stations;
    std::vector<User> users;
    CarrierPlan carrier;
    TimeGrid time_grid;
    NoiseModel noise;

    int station_count() const { return static_cast<int>(base_stations.size()); }
    int user_count() const { return static_cast<int>(users.size()); }
    double service_duration() const { return time_grid.slot_count * time_grid.slot_length; }
};

/// Parse and validate a scenario document (JSON text). Throws ScenarioError
/// with the offending line/field on parse failures and the offending entity
/// on invariant violations.
Scenario load_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);

/// Serialize back to document form; load_scenario(emit_scenario(s)) is
/// value-identical to s.
std::string emit_scenario(const Scenario& scenario);

/// Position along a lane at time t (piecewise-linear), t within the waypoint
/// span.
Eigen::Vector2d position_at(const Lane& lane, double t);

/// Representative time of slot m (0-based): midpoint (m + 1/2) dT.
inline double slot_time(const TimeGrid& grid, int m) { return (m + 0.5) * grid.slot_length; }

/// Horizontal distance between BS j and user k at slot m; strictly positive.
double slot_distance(const Scenario& scenario, int k, int m, int j);

/// Re-validate invariants of an in-memory scenario (used by generators and
/// sweep transforms). Throws ScenarioError on violation.
void validate_scenario(const Scenario& scenario);

}  // namespace marlin

#endif
