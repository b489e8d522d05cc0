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
#include "marlin/scenario.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(MARLIN_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempFile {
    explicit TempFile(std::string name) : path(std::move(name)) {}
    ~TempFile() { std::remove(path.c_str()); }
    std::string path;
};

void write_tiny_scenario(const std::string& path, double demand_scale) {
    marlin::GeneratorParams params;
    params.seed = 9;
    params.users = 2;
    params.slots = 3;
    params.stations = 1;
    params.subcarriers = 2;
    params.total_bandwidth_hz = 4e6;
    params.max_power_w = 2.0;
    params.demand_min_bits = 5e7 * demand_scale;
    params.demand_max_bits = 1e8 * demand_scale;
    params.offshore_min_m = 5e3;
    params.offshore_max_m = 2e4;
    std::ofstream out(path);
    out << marlin::emit_scenario(marlin::make_paper_scenario(params));
}

}  // namespace

TEST_CASE("generate writes a loadable scenario") {
    TempFile file("cli_gen.json");
    REQUIRE(run("generate --preset paper --seed 4 --users 3 --slots 5 --subcarriers 2 --out " +
                file.path) == 0);
    const marlin::Scenario s = marlin::load_scenario_file(file.path);
    CHECK(s.user_count() == 3);
    CHECK(s.time_grid.slot_count == 5);
}

TEST_CASE("simulate on a feasible world exits 0 and reports power") {
    TempFile scenario("cli_sim.json"), out("cli_sim_out.json");
    write_tiny_scenario(scenario.path, 1.0);
    REQUIRE(run("simulate --scenario " + scenario.path + " --out " + out.path) == 0);
    const std::string summary = slurp(out.path);
    CHECK(summary.find("avg_power_w") != std::string::npos);
    CHECK(summary.find("per_user_delivered_bits") != std::string::npos);
    CHECK(summary.find("\"feasible\": true") != std::string::npos);
}

TEST_CASE("simulate with a missing scenario exits 1") {
    CHECK(run("simulate --scenario does_not_exist.json > /dev/null 2>&1") == 1);
}

TEST_CASE("overloaded demands exit 2 with a deficit table") {
    TempFile scenario("cli_over.json"), out("cli_over_out.json");
    write_tiny_scenario(scenario.path, 1e6);  // far beyond reachable capacity
    REQUIRE(run("simulate --scenario " + scenario.path + " --max-iter 120 --out " + out.path) ==
            2);
    const std::string summary = slurp(out.path);
    CHECK(summary.find("\"feasible\": false") != std::string::npos);
    CHECK(summary.find("deficit_bits") != std::string::npos);
}

TEST_CASE("sweep produces one row per cell and is byte-stable") {
    TempFile scenario("cli_sweep.json"), a("cli_sweep_a.csv"), b("cli_sweep_b.csv");
    write_tiny_scenario(scenario.path, 1.0);
    const std::string base = "sweep --scenario " + scenario.path +
                             " --axis M --values 2,3 --schemes proposed,equal_power "
                             "--replications 1 --seed 11 --out ";
    REQUIRE(run(base + a.path) == 0);
    REQUIRE(run(base + b.path) == 0);
    const std::string csv = slurp(a.path);
    CHECK(csv == slurp(b.path));
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == 5);  // header + 2 values x 2 schemes
    CHECK(csv.find("axis,value,scheme,replication,avg_power_w,feasible,iterations") == 0);
}

TEST_CASE("verify fixedpoint passes and writes a report") {
    TempFile out("cli_verify.csv");
    REQUIRE(run("verify fixedpoint --seed 2 --out " + out.path + " > /dev/null") == 0);
    const std::string csv = slurp(out.path);
    CHECK(csv.find("check,observed,tolerance,pass") == 0);
    CHECK(csv.find("fixedpoint.residual.max") != std::string::npos);
}

TEST_CASE("dump-channel emits the binary tensor") {
    TempFile scenario("cli_dump.json"), tensor("cli_dump.bin");
    write_tiny_scenario(scenario.path, 1.0);
    REQUIRE(run("simulate --scenario " + scenario.path + " --dump-channel " + tensor.path +
                " > /dev/null") == 0);
    std::ifstream in(tensor.path, std::ios::binary);
    REQUIRE(in.good());
    in.seekg(0, std::ios::end);
    // header (4 x u64) + 2 users * 3 slots * 1 station * 2 subcarriers doubles
    CHECK(static_cast<long>(in.tellg()) == 32 + 12 * 8);
}
