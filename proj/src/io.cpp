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
#include "marlin/io.hpp"

#include <json.hpp>

#include <cstdio>

namespace marlin {

std::string format_g9(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.9g", value);
    return buffer;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "axis,value,scheme,replication,avg_power_w,feasible,iterations\n";
    for (const SweepRow& r : rows) {
        out << (r.axis == SweepAxis::slots_m ? "M" : "N") << ',' << r.value << ','
            << scheme_name(r.scheme) << ',' << r.replication << ',' << format_g9(r.avg_power_w)
            << ',' << (r.feasible ? 1 : 0) << ',' << r.iterations << '\n';
    }
}

void write_rate_csv(const std::vector<verify::RateRow>& rows, std::ostream& out) {
    out << "snr_db,rate_de,rate_mc,mc_stderr,rel_err\n";
    for (const verify::RateRow& r : rows)
        out << format_g9(r.snr_db) << ',' << format_g9(r.rate_de) << ',' << format_g9(r.rate_mc)
            << ',' << format_g9(r.mc_stderr) << ',' << format_g9(r.rel_err) << '\n';
}

void write_checks_csv(const std::vector<verify::CheckResult>& checks, std::ostream& out) {
    out << "check,observed,tolerance,pass\n";
    for (const verify::CheckResult& c : checks)
        out << c.name << ',' << format_g9(c.observed) << ',' << format_g9(c.tolerance) << ','
            << (c.pass ? 1 : 0) << '\n';
}

void write_allocation_csv(const AllocationTensor& allocation, std::ostream& out) {
    out << "k,m,j,n,power_w,assigned\n";
    const Tensor4d& p = allocation.power;
    for (Eigen::Index k = 0; k < p.users(); ++k)
        for (Eigen::Index m = 0; m < p.slots(); ++m)
            for (Eigen::Index j = 0; j < p.stations(); ++j)
                for (Eigen::Index n = 0; n < p.subcarriers(); ++n) {
                    if (allocation.assignment(k, m, j, n) == 0) continue;
                    out << k << ',' << m << ',' << j << ',' << n << ','
                        << format_g9(p(k, m, j, n)) << ",1\n";
                }
}

std::string result_summary(const AllocationResult& result, const Scenario& scenario) {
    nlohmann::json doc;
    doc["avg_power_w"] = result.avg_power;
    doc["feasible"] = result.feasible;
    doc["iterations_used"] = result.iterations_used;
    nlohmann::json delivered = nlohmann::json::array();
    for (Eigen::Index k = 0; k < result.delivered_bits.size(); ++k)
        delivered.push_back(result.delivered_bits[k]);
    doc["per_user_delivered_bits"] = std::move(delivered);
    if (!result.feasible) {
        nlohmann::json deficits = nlohmann::json::array();
        for (Eigen::Index k = 0; k < result.deficits_bits.size(); ++k) {
            if (result.deficits_bits[k] <= 0.0) continue;
            deficits.push_back({{"user", k},
                                {"demand_bits", scenario.users[k].demand_bits},
                                {"delivered_bits", result.delivered_bits[k]},
                                {"deficit_bits", result.deficits_bits[k]}});
        }
        doc["deficits"] = std::move(deficits);
    }
    return doc.dump(2) + "\n";
}

}  // namespace marlin
