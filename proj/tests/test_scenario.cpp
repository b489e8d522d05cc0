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

#include "marlin/generate.hpp"
#include "marlin/rng.hpp"
#include "marlin/scenario.hpp"

#include <cmath>
#include <string>

using namespace marlin;

namespace {

std::string minimal_doc() {
    return R"({
      "system": {
        "carrier_frequency_hz": 1.9e9,
        "total_bandwidth_hz": 2e6,
        "subcarrier_count": 1,
        "slot_count": 1,
        "slot_length_s": 10.0,
        "noise_density_dbm_per_hz": -174.0
      },
      "bs": [
        {"id": 0, "x_m": 0.0, "y_m": 0.0, "antenna_height_m": 100.0,
         "antenna_count": 16, "max_power_w": 40.0}
      ],
      "user": [
        {"id": 0, "antenna_height_m": 10.0, "demand_bits": 1e6,
         "lane": [{"t_s": 0.0, "x_m": 3000.0, "y_m": 4000.0},
                  {"t_s": 10.0, "x_m": 3000.0, "y_m": 4000.0}]}
      ]
    })";
}

}  // namespace

TEST_CASE("minimal document loads with one station and one user") {
    const Scenario s = load_scenario(minimal_doc());
    CHECK(s.station_count() == 1);
    CHECK(s.user_count() == 1);
    CHECK(s.carrier.subcarrier_bandwidth == doctest::Approx(2e6));
    CHECK(s.noise.per_subcarrier_power ==
          doctest::Approx(std::pow(10.0, -20.4) * 2e6).epsilon(1e-12));
}

TEST_CASE("non-increasing waypoint timestamps name the lane") {
    std::string doc = minimal_doc();
    const auto pos = doc.find("\"t_s\": 10.0");
    doc.replace(pos, 11, "\"t_s\": 0.0");
    CHECK_THROWS_WITH_AS(load_scenario(doc),
                         doctest::Contains("user[0]: lane waypoint timestamps"), ScenarioError);
}

TEST_CASE("parse error reports a line number") {
    try {
        load_scenario("{\n  \"system\": {\n  oops\n}");
        FAIL("expected ScenarioError");
    } catch (const ScenarioError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("missing field names the entity") {
    std::string doc = minimal_doc();
    const auto pos = doc.find("\"antenna_height_m\": 10.0,");
    doc.erase(pos, 26);
    CHECK_THROWS_WITH_AS(load_scenario(doc), doctest::Contains("antenna_height_m"),
                         ScenarioError);
}

TEST_CASE("generated paper-style world has the published shape") {
    GeneratorParams params;
    const Scenario s = make_paper_scenario(params);
    CHECK(s.station_count() == 3);
    CHECK(s.user_count() == 90);
    CHECK(s.time_grid.slot_count == 250);
    CHECK(s.carrier.subcarrier_count == 15);
    CHECK(s.carrier.subcarrier_bandwidth == doctest::Approx(2e6));
    for (const User& u : s.users) {
        CHECK(u.lane.waypoints.front().position.y() >= 2e3);
        CHECK(u.lane.waypoints.front().position.y() <= 5e4);
    }
}

TEST_CASE("position_at endpoints and interpolation") {
    Lane lane;
    lane.waypoints = {Waypoint{0.0, {0.0, 0.0}}, Waypoint{100.0, {1000.0, 0.0}},
                      Waypoint{300.0, {1000.0, 2000.0}}};

    SUBCASE("waypoint time returns that waypoint exactly") {
        CHECK(position_at(lane, 100.0).x() == doctest::Approx(1000.0));
        CHECK(position_at(lane, 100.0).y() == doctest::Approx(0.0));
    }
    SUBCASE("midpoint of a segment") {
        const Eigen::Vector2d p = position_at(lane, 50.0);
        CHECK(p.x() == doctest::Approx(500.0));
        CHECK(p.y() == doctest::Approx(0.0));
    }
    SUBCASE("quarter of the second segment") {
        const Eigen::Vector2d p = position_at(lane, 150.0);
        CHECK(p.x() == doctest::Approx(1000.0));
        CHECK(p.y() == doctest::Approx(500.0));
    }
    SUBCASE("out of range time is rejected") {
        CHECK_THROWS_AS(position_at(lane, -1.0), ScenarioError);
        CHECK_THROWS_AS(position_at(lane, 301.0), ScenarioError);
    }
}

TEST_CASE("position_at is speed-continuous") {
    RngStream rng(99);
    Lane lane;
    double t = 0.0;
    Eigen::Vector2d p{0.0, 0.0};
    lane.waypoints.push_back(Waypoint{t, p});
    double v_max = 0.0;
    for (int i = 0; i < 6; ++i) {
        const double dt = 50.0 + 100.0 * rng.uniform();
        const Eigen::Vector2d step{(rng.uniform() - 0.5) * 2000.0,
                                   (rng.uniform() - 0.5) * 2000.0};
        v_max = std::max(v_max, step.norm() / dt);
        t += dt;
        p += step;
        lane.waypoints.push_back(Waypoint{t, p});
    }
    const double eps = 1e-3;
    for (double q = 0.0; q + eps < t; q += t / 997.0) {
        const double moved = (position_at(lane, q + eps) - position_at(lane, q)).norm();
        CHECK(moved <= v_max * eps * (1.0 + 1e-9));
    }
}

TEST_CASE("slot distances") {
    const Scenario s = load_scenario(minimal_doc());

    SUBCASE("3-4-5 triangle") { CHECK(slot_distance(s, 0, 0, 0) == doctest::Approx(5000.0)); }

    SUBCASE("co-located user is rejected") {
        std::string doc = minimal_doc();
        std::string from = "\"x_m\": 3000.0, \"y_m\": 4000.0";
        for (auto pos = doc.find(from); pos != std::string::npos; pos = doc.find(from))
            doc.replace(pos, from.size(), "\"x_m\": 0.0, \"y_m\": 0.0");
        const Scenario bad = load_scenario(doc);
        CHECK_THROWS_AS(slot_distance(bad, 0, 0, 0), ScenarioError);
    }

    SUBCASE("moving user sampled at the slot midpoint") {
        std::string doc = minimal_doc();
        doc.replace(doc.find("\"slot_count\": 1"), 15, "\"slot_count\": 11");
        doc.replace(doc.find("\"slot_length_s\": 10.0"), 21, "\"slot_length_s\": 100.0");
        doc.replace(doc.find("{\"t_s\": 0.0, \"x_m\": 3000.0, \"y_m\": 4000.0}"), 42,
                    "{\"t_s\": 0.0, \"x_m\": 0.001, \"y_m\": 0.0}");
        doc.replace(doc.find("{\"t_s\": 10.0, \"x_m\": 3000.0, \"y_m\": 4000.0}"), 43,
                    "{\"t_s\": 1100.0, \"x_m\": 11000.001, \"y_m\": 0.0}");
        const Scenario moving = load_scenario(doc);
        // 10 m/s along x, slot 10 of length 100 s, midpoint at t = 1050 s
        CHECK(slot_distance(moving, 0, 10, 0) == doctest::Approx(10500.0).epsilon(1e-6));
    }
}

TEST_CASE("slot_distance is translation invariant") {
    GeneratorParams params;
    params.users = 4;
    params.slots = 12;
    const Scenario s = make_paper_scenario(params);
    Scenario shifted = s;
    const Eigen::Vector2d offset{1234.5, -987.0};
    for (BaseStation& b : shifted.base_stations) b.position += offset;
    for (User& u : shifted.users)
        for (Waypoint& w : u.lane.waypoints) w.position += offset;
    for (int k = 0; k < s.user_count(); ++k)
        for (int m = 0; m < s.time_grid.slot_count; m += 3)
            for (int j = 0; j < s.station_count(); ++j)
                CHECK(slot_distance(shifted, k, m, j) ==
                      doctest::Approx(slot_distance(s, k, m, j)).epsilon(1e-12));
}

TEST_CASE("emit/load round-trip preserves the scenario") {
    GeneratorParams params;
    params.users = 7;
    params.slots = 9;
    params.stations = 2;
    const Scenario a = make_paper_scenario(params);
    const Scenario b = load_scenario(emit_scenario(a));

    REQUIRE(b.user_count() == a.user_count());
    REQUIRE(b.station_count() == a.station_count());
    CHECK(b.carrier.carrier_frequency == a.carrier.carrier_frequency);
    CHECK(b.carrier.total_bandwidth == a.carrier.total_bandwidth);
    CHECK(b.time_grid.slot_length == a.time_grid.slot_length);
    CHECK(b.noise.density_dbm_per_hz == a.noise.density_dbm_per_hz);
    for (int k = 0; k < a.user_count(); ++k) {
        CHECK(b.users[k].demand_bits == a.users[k].demand_bits);
        REQUIRE(b.users[k].lane.waypoints.size() == a.users[k].lane.waypoints.size());
        for (std::size_t w = 0; w < a.users[k].lane.waypoints.size(); ++w) {
            CHECK(b.users[k].lane.waypoints[w].t == a.users[k].lane.waypoints[w].t);
            CHECK(b.users[k].lane.waypoints[w].position.x() ==
                  a.users[k].lane.waypoints[w].position.x());
            CHECK(b.users[k].lane.waypoints[w].position.y() ==
                  a.users[k].lane.waypoints[w].position.y());
        }
    }
    // a second emit must be byte-identical
    CHECK(emit_scenario(a) == emit_scenario(b));
}
