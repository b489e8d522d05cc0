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
#include "marlin/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace marlin {
namespace {

using nlohmann::json;

double require_number(const json& obj, const std::string& field, const std::string& where) {
    if (!obj.contains(field))
        throw ScenarioError(where + ": missing field '" + field + "'");
    const json& v = obj.at(field);
    if (!v.is_number())
        throw ScenarioError(where + ": field '" + field + "' must be a number");
    return v.get<double>();
}

int require_int(const json& obj, const std::string& field, const std::string& where) {
    const double d = require_number(obj, field, where);
    const int i = static_cast<int>(std::llround(d));
    if (std::abs(d - i) > 1e-9)
        throw ScenarioError(where + ": field '" + field + "' must be an integer");
    return i;
}

void check(bool ok, const std::string& message) {
    if (!ok) throw ScenarioError(message);
}

std::string bs_name(int id) { return "bs[" + std::to_string(id) + "]"; }
std::string user_name(int id) { return "user[" + std::to_string(id) + "]"; }

}  // namespace

void validate_scenario(const Scenario& s) {
    check(!s.base_stations.empty(), "scenario: at least one base station required");
    check(!s.users.empty(), "scenario: at least one user required");

    const CarrierPlan& c = s.carrier;
    check(c.subcarrier_count >= 1, "system: subcarrier_count must be >= 1");
    check(c.total_bandwidth > 0.0, "system: total_bandwidth_hz must be > 0");
    check(std::abs(c.subcarrier_bandwidth * c.subcarrier_count - c.total_bandwidth) <=
              1e-6 * c.total_bandwidth,
          "system: subcarrier_bandwidth * subcarrier_count must equal total bandwidth");
    check(c.carrier_frequency > c.total_bandwidth,
          "system: carrier_frequency_hz must exceed total_bandwidth_hz");

    check(s.time_grid.slot_count >= 1, "system: slot_count must be >= 1");
    check(s.time_grid.slot_length > 0.0, "system: slot_length_s must be > 0");

    check(s.noise.density_w_per_hz > 0.0, "system: noise density must be positive");
    check(std::abs(s.noise.per_subcarrier_power -
                   s.noise.density_w_per_hz * c.subcarrier_bandwidth) <=
              1e-9 * s.noise.per_subcarrier_power,
          "system: per-subcarrier noise power inconsistent with density");

    for (std::size_t i = 0; i < s.base_stations.size(); ++i) {
        const BaseStation& b = s.base_stations[i];
        const std::string where = bs_name(b.id);
        check(b.id == static_cast<int>(i), where + ": id must equal its position in the bs list");
        check(b.antenna_height > 0.0, where + ": antenna_height_m must be > 0");
        check(b.antenna_count >= 1, where + ": antenna_count must be >= 1");
        check(b.max_power > 0.0, where + ": max_power_w must be > 0");
    }

    const double duration = s.service_duration();
    for (std::size_t i = 0; i < s.users.size(); ++i) {
        const User& u = s.users[i];
        const std::string where = user_name(u.id);
        check(u.id == static_cast<int>(i), where + ": id must equal its position in the user list");
        check(u.antenna_height > 0.0, where + ": antenna_height_m must be > 0");
        check(u.demand_bits >= 0.0, where + ": demand_bits must be >= 0");
        check(u.lane.waypoints.size() >= 2, where + ": lane needs at least 2 waypoints");
        for (std::size_t w = 1; w < u.lane.waypoints.size(); ++w)
            check(u.lane.waypoints[w].t > u.lane.waypoints[w - 1].t,
                  where + ": lane waypoint timestamps must be strictly increasing");
        check(u.lane.waypoints.front().t <= 0.0 &&
              u.lane.waypoints.back().t >= duration - 1e-9,
              where + ": lane must span the full service duration");
    }
}

Scenario load_scenario(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // recover a line number from the byte offset for a usable message
        std::size_t line = 1;
        const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
        for (std::size_t i = 0; i < upto; ++i)
            if (text[i] == '\n') ++line;
        throw ScenarioError("parse error at line " + std::to_string(line) + ": " + e.what());
    }

    Scenario s;
    check(doc.contains("system"), "document: missing 'system' section");
    const json& sys = doc.at("system");
    s.carrier.carrier_frequency = require_number(sys, "carrier_frequency_hz", "system");
    s.carrier.total_bandwidth = require_number(sys, "total_bandwidth_hz", "system");
    s.carrier.subcarrier_count = require_int(sys, "subcarrier_count", "system");
    check(s.carrier.subcarrier_count >= 1, "system: subcarrier_count must be >= 1");
    s.carrier.subcarrier_bandwidth = s.carrier.total_bandwidth / s.carrier.subcarrier_count;
    s.time_grid.slot_count = require_int(sys, "slot_count", "system");
    s.time_grid.slot_length = require_number(sys, "slot_length_s", "system");
    s.noise.density_dbm_per_hz = require_number(sys, "noise_density_dbm_per_hz", "system");
    s.noise.density_w_per_hz = std::pow(10.0, (s.noise.density_dbm_per_hz - 30.0) / 10.0);
    s.noise.per_subcarrier_power = s.noise.density_w_per_hz * s.carrier.subcarrier_bandwidth;

    check(doc.contains("bs") && doc.at("bs").is_array(), "document: missing 'bs' list");
    for (const json& b : doc.at("bs")) {
        BaseStation bs;
        bs.id = require_int(b, "id", "bs entry");
        const std::string where = bs_name(bs.id);
        bs.position.x() = require_number(b, "x_m", where);
        bs.position.y() = require_number(b, "y_m", where);
        bs.antenna_height = require_number(b, "antenna_height_m", where);
        bs.antenna_count = require_int(b, "antenna_count", where);
        bs.max_power = require_number(b, "max_power_w", where);
        s.base_stations.push_back(bs);
    }

    check(doc.contains("user") && doc.at("user").is_array(), "document: missing 'user' list");
    for (const json& uj : doc.at("user")) {
        User u;
        u.id = require_int(uj, "id", "user entry");
        const std::string where = user_name(u.id);
        u.antenna_height = require_number(uj, "antenna_height_m", where);
        u.demand_bits = require_number(uj, "demand_bits", where);
        check(uj.contains("lane") && uj.at("lane").is_array(), where + ": missing 'lane' list");
        for (const json& wj : uj.at("lane")) {
            Waypoint w;
            w.t = require_number(wj, "t_s", where + ".lane");
            w.position.x() = require_number(wj, "x_m", where + ".lane");
            w.position.y() = require_number(wj, "y_m", where + ".lane");
            u.lane.waypoints.push_back(w);
        }
        s.users.push_back(u);
    }

    validate_scenario(s);
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

namespace {

json number(double v) { return json(v); }

}  // namespace

std::string emit_scenario(const Scenario& s) {
    json doc;
    doc["system"] = {{"carrier_frequency_hz", number(s.carrier.carrier_frequency)},
                     {"total_bandwidth_hz", number(s.carrier.total_bandwidth)},
                     {"subcarrier_count", s.carrier.subcarrier_count},
                     {"slot_count", s.time_grid.slot_count},
                     {"slot_length_s", number(s.time_grid.slot_length)},
                     {"noise_density_dbm_per_hz", number(s.noise.density_dbm_per_hz)}};
    doc["bs"] = json::array();
    for (const BaseStation& b : s.base_stations)
        doc["bs"].push_back({{"id", b.id},
                             {"x_m", number(b.position.x())},
                             {"y_m", number(b.position.y())},
                             {"antenna_height_m", number(b.antenna_height)},
                             {"antenna_count", b.antenna_count},
                             {"max_power_w", number(b.max_power)}});
    doc["user"] = json::array();
    for (const User& u : s.users) {
        json lane = json::array();
        for (const Waypoint& w : u.lane.waypoints)
            lane.push_back({{"t_s", number(w.t)},
                            {"x_m", number(w.position.x())},
                            {"y_m", number(w.position.y())}});
        doc["user"].push_back({{"id", u.id},
                               {"antenna_height_m", number(u.antenna_height)},
                               {"demand_bits", number(u.demand_bits)},
                               {"lane", std::move(lane)}});
    }
    return doc.dump(2) + "\n";
}

Eigen::Vector2d position_at(const Lane& lane, double t) {
    const auto& w = lane.waypoints;
    if (w.size() < 2) throw ScenarioError("position_at: lane needs at least 2 waypoints");
    if (t < w.front().t || t > w.back().t)
        throw ScenarioError("position_at: time " + std::to_string(t) +
                            " outside lane span [" + std::to_string(w.front().t) + ", " +
                            std::to_string(w.back().t) + "]");
    // find bracketing segment
    std::size_t hi = 1;
    while (hi + 1 < w.size() && w[hi].t < t) ++hi;
    const Waypoint& a = w[hi - 1];
    const Waypoint& b = w[hi];
    const double f = (t - a.t) / (b.t - a.t);
    return a.position + f * (b.position - a.position);
}

double slot_distance(const Scenario& scenario, int k, int m, int j) {
    if (k < 0 || k >= scenario.user_count()) throw ScenarioError("slot_distance: user index out of range");
    if (j < 0 || j >= scenario.station_count()) throw ScenarioError("slot_distance: bs index out of range");
    if (m < 0 || m >= scenario.time_grid.slot_count)
        throw ScenarioError("slot_distance: slot index out of range");
    const Eigen::Vector2d p = position_at(scenario.users[k].lane, slot_time(scenario.time_grid, m));
    const double d = (p - scenario.base_stations[j].position).norm();
    if (d < 1e-9)
        throw ScenarioError("slot_distance: " + user_name(k) + " co-located with " + bs_name(j) +
                            " at slot " + std::to_string(m));
    return d;
}

}  // namespace marlin
