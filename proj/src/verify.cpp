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
#include "marlin/verify.hpp"

#include "marlin/baselines.hpp"
#include "marlin/rate.hpp"
#include "marlin/reference.hpp"
#include "marlin/rng.hpp"
#include "marlin/solver.hpp"

#include <algorithm>
#include <cmath>

namespace marlin::verify {
namespace {

constexpr int kAntennaChoices[] = {1, 4, 16, 64};

double log_uniform(RngStream& rng, double lo, double hi) {
    return lo * std::exp(rng.uniform() * std::log(hi / lo));
}

CheckResult bound_check(std::string name, double observed, double tolerance) {
    return CheckResult{std::move(name), observed, tolerance, observed <= tolerance};
}

}  // namespace

bool all_pass(const std::vector<CheckResult>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

std::vector<CheckResult> fixedpoint_suite(std::uint64_t seed) {
    RngStream rng = RngStream::substream(seed, {0xf1});
    double worst_residual = 0.0;
    double worst_below_one = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double snr = log_uniform(rng, 1e-3, 1e3);
        const int antennas = kAntennaChoices[trial % 4];
        const LinkParams link{1.0, snr, 1.0, antennas, 1.0};
        const FixedPoint fp = solve_fixed_point(link, 1e-10, 10000);
        // residual of the defining equation, recomputed here
        const double rhs = 1.0 + snr / (antennas * (1.0 + snr / fp.u_star));
        worst_residual = std::max(worst_residual, std::abs(fp.u_star - rhs));
        worst_below_one = std::max(worst_below_one, 1.0 - fp.u_star);
    }
    // single-antenna closed form: u^2 - u - s = 0 at s = 2 gives u = 2
    const LinkParams quad{2.0, 1.0, 1.0, 1, 1.0};
    const double u2 = solve_fixed_point(quad, 1e-13, 100000).u_star;

    std::vector<CheckResult> out;
    out.push_back(bound_check("fixedpoint.residual.max", worst_residual, 1e-10));
    out.push_back(bound_check("fixedpoint.u_below_one.max", worst_below_one, 0.0));
    out.push_back(bound_check("fixedpoint.l1_quadratic_root.abs_err", std::abs(u2 - 2.0), 1e-12));
    return out;
}

RateReport rate_suite(std::uint64_t seed) {
    RateReport report;
    double worst_rel = 0.0;
    for (int snr_db = -10; snr_db <= 30; snr_db += 5) {
        const double snr = std::pow(10.0, snr_db / 10.0);
        const LinkParams link{snr, 1.0, 1.0, 16, 1.0};
        const double de = deterministic_rate(link);
        RngStream rng = RngStream::substream(seed, {0xde, static_cast<std::uint64_t>(snr_db + 100)});
        const McRate mc = monte_carlo_rate(link, 100000, rng);
        const double rel = std::abs(de - mc.rate) / mc.rate;
        worst_rel = std::max(worst_rel, rel);
        report.rows.push_back(RateRow{static_cast<double>(snr_db), de, mc.rate, mc.std_error, rel});
    }
    report.checks.push_back(bound_check("rate.de_vs_mc.rel_err.max", worst_rel, 0.03));

    // exact single-antenna ergodic efficiency at snr = 2
    const LinkParams l1{2.0, 1.0, 1.0, 1, 1.0};
    RngStream rng = RngStream::substream(seed, {0xe1});
    const McRate mc = monte_carlo_rate(l1, 1000000, rng);
    const double exact = reference::exact_ergodic_efficiency_l1(2.0);
    report.checks.push_back(bound_check("rate.mc_vs_exact_l1.sigma_distance",
                                        std::abs(mc.rate - exact) / mc.std_error, 2.0));
    return report;
}

std::vector<CheckResult> theorem1_suite(std::uint64_t seed) {
    RngStream rng = RngStream::substream(seed, {0x71});
    double worst_sub = 0.0;        // |f(P, e^w) - g(P, w)|
    double worst_monotone = 0.0;   // violation of decrease/increase pattern of f
    double worst_grid_gap = 0.0;   // |min_grid g - g(ln u*)|
    double worst_rate_gap = 0.0;   // |min_grid g - r / Bs|

    for (int trial = 0; trial < 200; ++trial) {
        const double snr = log_uniform(rng, 1e-2, 1e3);
        const int antennas = kAntennaChoices[trial % 4];
        const double gain = log_uniform(rng, 1e-13, 1e-10);
        const double noise = gain / snr;  // so that P gain / noise = snr at P = 1
        const double power = 1.0;

        // (a) definitional substitution u = e^w
        const double w = rng.uniform() * 10.0;
        worst_sub = std::max(worst_sub,
                             std::abs(f_metric(power, std::exp(w), gain, noise, antennas) -
                                      g_metric(power, w, gain, noise, antennas)));

        // (b) f decreasing before u*, increasing after
        const double u_star = fixed_point_root(snr, antennas);
        if (u_star > 1.0 + 1e-9) {
            const int points = 64;
            const double step = (u_star - 1.0) / points;
            for (int i = 0; i + 2 < points; ++i) {
                const double a = f_metric(power, 1.0 + i * step, gain, noise, antennas);
                const double b = f_metric(power, 1.0 + (i + 1) * step, gain, noise, antennas);
                worst_monotone = std::max(worst_monotone, b - a);
            }
        }
        {
            const int points = 64;
            const double step = 5.0 / points;
            for (int i = 1; i + 1 < points; ++i) {
                const double a = f_metric(power, u_star + i * step, gain, noise, antennas);
                const double b = f_metric(power, u_star + (i + 1) * step, gain, noise, antennas);
                worst_monotone = std::max(worst_monotone, a - b);
            }
        }

        // (c) grid-search tightness of min_w g against ln u* and the rate
        auto g_of = [&](double omega) { return g_metric(power, omega, gain, noise, antennas); };
        const reference::GridMinimum gm = reference::grid_minimize(g_of, 0.0, 10.0, 1e-3);
        const double g_at_star = g_of(std::log(u_star));
        const LinkParams link{power, gain, noise, antennas, 1.0};
        const double r = deterministic_rate(link);
        worst_grid_gap = std::max(worst_grid_gap, std::abs(gm.value - g_at_star));
        worst_rate_gap = std::max(worst_rate_gap, std::abs(gm.value - r));
    }

    std::vector<CheckResult> out;
    out.push_back(bound_check("theorem1.substitution.abs_err.max", worst_sub, 1e-12));
    out.push_back(bound_check("theorem1.monotonicity.violation.max", worst_monotone, 1e-12));
    out.push_back(bound_check("theorem1.grid_min_vs_ln_ustar.max", worst_grid_gap, 1e-6));
    out.push_back(bound_check("theorem1.grid_min_vs_rate.max", worst_rate_gap, 1e-6));
    return out;
}

std::vector<CheckResult> smallcase_suite(std::uint64_t seed) {
    double worst_over = 0.0;   // alg / brute - 1
    double worst_under = 0.0;  // brute-relative amount the alg beat the oracle
    int instances_checked = 0;

    for (int inst = 0; inst < 50; ++inst) {
        RngStream rng = RngStream::substream(seed, {0x5c, static_cast<std::uint64_t>(inst)});
        Scenario s;
        s.carrier = CarrierPlan{1.9e9, 4e6, 2, 2e6};
        s.time_grid = TimeGrid{2, 60.0};
        s.noise.density_dbm_per_hz = -174.0;
        s.noise.density_w_per_hz = std::pow(10.0, (-174.0 - 30.0) / 10.0);
        s.noise.per_subcarrier_power = s.noise.density_w_per_hz * 2e6;
        s.base_stations.push_back(BaseStation{0, {0.0, 0.0}, 100.0, 16, 1e4});
        for (int k = 0; k < 2; ++k) {
            User u;
            u.id = k;
            u.antenna_height = 10.0;
            u.demand_bits = 1e8 + rng.uniform() * 5e8;
            u.lane.waypoints = {Waypoint{0.0, {1e4, 0.0}}, Waypoint{120.0, {1e4, 0.0}}};
            s.users.push_back(u);
        }
        ChannelTensor channel{Tensor4d(2, 2, 1, 2)};
        for (Eigen::Index i = 0; i < channel.gains.size(); ++i)
            channel.gains.flat()[i] = log_uniform(rng, 1e-13, 1e-11);

        SolverConfig config;
        config.max_iterations = 400;
        config.seed = seed;
        const AllocationResult got = run_allocation(channel, s, config);
        const auto brute = reference::brute_force_objective(channel, s);
        if (!brute || !got.feasible) {
            // count a missing side as a failure
            worst_over = std::max(worst_over, 1.0);
            continue;
        }
        ++instances_checked;
        const double ratio = got.avg_power / *brute;
        worst_over = std::max(worst_over, ratio - 1.0);
        worst_under = std::max(worst_under, 1.0 - ratio);
    }

    std::vector<CheckResult> out;
    out.push_back(bound_check("smallcase.obj_over_brute.max_excess", worst_over, 0.05));
    out.push_back(bound_check("smallcase.obj_under_brute.max", worst_under, 1e-6));
    out.push_back(CheckResult{"smallcase.instances", static_cast<double>(instances_checked), 50.0,
                              instances_checked == 50});
    return out;
}

}  // namespace marlin::verify
