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
#include "marlin/reference.hpp"

#include "marlin/rate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace marlin::reference {

double exponential_integral_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exponential_integral_e1: x must be > 0");
    constexpr double euler = 0.57721566490153286060651209;
    if (x <= 1.0) {
        // E1(x) = -gamma - ln x + sum_{n>=1} (-1)^{n+1} x^n / (n n!)
        double sum = 0.0, term = 1.0;
        for (int n = 1; n <= 60; ++n) {
            term *= -x / n;
            const double add = -term / n;
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
        }
        return -euler - std::log(x) + sum;
    }
    // modified Lentz continued fraction: E1(x) = e^{-x} / (x + 1/(1 + 1/(x + 2/(1 + ...))))
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double a = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        const double delta = c * d;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

double exact_ergodic_efficiency_l1(double snr) {
    if (snr <= 0.0) return 0.0;
    const double inv = 1.0 / snr;
    return std::exp(inv) * exponential_integral_e1(inv) * kLog2E;
}

double erlang_cdf(int shape, double x) {
    if (shape < 1) throw std::invalid_argument("erlang_cdf: shape must be >= 1");
    if (x <= 0.0) return 0.0;
    double term = 1.0, sum = 1.0;
    for (int i = 1; i < shape; ++i) {
        term *= x / i;
        sum += term;
    }
    return 1.0 - std::exp(-x + std::log(sum));
}

GridMinimum grid_minimize(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
    if (!(hi > lo) || !(step > 0.0)) throw std::invalid_argument("grid_minimize: bad interval");
    const long count = static_cast<long>(std::floor((hi - lo) / step)) + 1;
    long best_index = 0;
    double best_value = f(lo);
    for (long i = 1; i < count; ++i) {
        const double v = f(lo + i * step);
        if (v < best_value) {
            best_value = v;
            best_index = i;
        }
    }
    GridMinimum out{lo + best_index * step, best_value};
    // parabolic refinement through the three points around the grid minimum
    if (best_index > 0 && best_index + 1 < count) {
        const double xm = lo + best_index * step;
        const double fm1 = f(xm - step), fp1 = f(xm + step);
        const double denom = fp1 - 2.0 * best_value + fm1;
        if (denom > 0.0) {
            const double vertex = xm - 0.5 * step * (fp1 - fm1) / denom;
            if (vertex >= lo && vertex <= hi) {
                const double fv = f(vertex);
                if (fv < out.value) out = GridMinimum{vertex, fv};
            }
        }
    }
    return out;
}

namespace {

/// min over P in [0, cap] of (P - price * rate(P)) by golden-section search
/// (the integrand is convex: rate is concave in P).
double argmin_priced_power(double price, double gain, double sigma2, int antennas,
                           double bs_bandwidth, double slot_length, double cap) {
    auto value = [&](double p) {
        const LinkParams link{p, gain, sigma2, antennas, bs_bandwidth};
        return p - price * slot_length * deterministic_rate(link);
    };
    double lo = 0.0, hi = cap;
    // golden-section: ~1e-12 relative localization after 80 shrinks
    const double phi = 0.6180339887498948482;
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 120; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = value(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = value(x2);
        }
        if (hi - lo <= 1e-13 * (1.0 + hi)) break;
    }
    const double best = 0.5 * (lo + hi);
    return value(0.0) <= value(best) ? 0.0 : best;
}

}  // namespace

std::optional<OracleFill> waterfill_demand(const std::vector<OracleLink>& links, double demand,
                                           double sigma2, int antennas, double bs_bandwidth,
                                           double slot_length, double power_cap) {
    OracleFill fill;
    fill.power.assign(links.size(), 0.0);
    if (demand <= 0.0) return fill;
    if (links.empty()) return std::nullopt;

    auto delivered = [&](double price, std::vector<double>& power) {
        double bits = 0.0;
        for (std::size_t i = 0; i < links.size(); ++i) {
            const double p = argmin_priced_power(price, links[i].gain, sigma2, antennas,
                                                 bs_bandwidth, slot_length, power_cap);
            power[i] = p;
            if (p > 0.0) {
                const LinkParams link{p, links[i].gain, sigma2, antennas, bs_bandwidth};
                bits += slot_length * deterministic_rate(link);
            }
        }
        return bits;
    };

    double hi = 1.0;
    double bits = delivered(hi, fill.power);
    int guard = 0;
    while (bits < demand) {
        hi *= 8.0;
        bits = delivered(hi, fill.power);
        if (++guard > 60) break;
    }
    if (bits < demand) return std::nullopt;
    double lo = 0.0;
    for (int it = 0; it < 90; ++it) {
        const double mid = 0.5 * (lo + hi);
        bits = delivered(mid, fill.power);
        if (bits < demand)
            lo = mid;
        else
            hi = mid;
    }
    bits = delivered(hi, fill.power);
    fill.total_power = 0.0;
    for (double p : fill.power) fill.total_power += p;
    return fill;
}

std::optional<double> brute_force_objective(const ChannelTensor& channel,
                                            const Scenario& scenario) {
    const int K = scenario.user_count();
    const int M = scenario.time_grid.slot_count;
    const int J = scenario.station_count();
    const int N = scenario.carrier.subcarrier_count;
    const int cells = M * J * N;
    if (cells > 12)
        throw std::invalid_argument("brute_force_objective: instance too large to enumerate");

    const double sigma2 = scenario.noise.per_subcarrier_power;
    const double bs_bw = scenario.carrier.subcarrier_bandwidth;
    const double dt = scenario.time_grid.slot_length;

    long combos = 1;
    for (int c = 0; c < cells; ++c) combos *= (K + 1);

    std::optional<double> best;
    std::vector<int> owner(cells);
    for (long code = 0; code < combos; ++code) {
        long rest = code;
        for (int c = 0; c < cells; ++c) {
            owner[c] = static_cast<int>(rest % (K + 1)) - 1;
            rest /= (K + 1);
        }
        double total = 0.0;
        bool ok = true;
        std::vector<double> station_power(static_cast<std::size_t>(M) * J, 0.0);
        for (int k = 0; k < K && ok; ++k) {
            std::vector<OracleLink> links;
            for (int c = 0; c < cells; ++c) {
                if (owner[c] != k) continue;
                const int m = c / (J * N), j = (c / N) % J, n = c % N;
                links.push_back(OracleLink{channel.gains(k, m, j, n), j, m});
            }
            const int antennas = scenario.base_stations.empty()
                                     ? 1
                                     : scenario.base_stations[0].antenna_count;
            auto fill = waterfill_demand(links, scenario.users[k].demand_bits, sigma2, antennas,
                                         bs_bw, dt, scenario.base_stations[0].max_power);
            if (!fill) {
                ok = false;
                break;
            }
            total += fill->total_power;
            for (std::size_t i = 0; i < links.size(); ++i)
                station_power[links[i].slot * J + links[i].station] += fill->power[i];
        }
        if (!ok) continue;
        for (int m = 0; m < M && ok; ++m)
            for (int j = 0; j < J; ++j)
                if (station_power[m * J + j] >
                    scenario.base_stations[j].max_power * (1.0 + 1e-9)) {
                    ok = false;
                    break;
                }
        if (!ok) continue;
        const double objective = total / (static_cast<double>(K) * M);
        if (!best || objective < *best) best = objective;
    }
    return best;
}

}  // namespace marlin::reference
