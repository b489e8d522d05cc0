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
#include "marlin/rate.hpp"

#include "marlin/channel.hpp"

#include <string>

namespace marlin {
namespace {

void check_link(const LinkParams& link) {
    if (link.power < 0.0) throw std::invalid_argument("link: power must be >= 0");
    if (link.gain < 0.0) throw std::invalid_argument("link: gain must be >= 0");
    if (!(link.noise > 0.0)) throw std::invalid_argument("link: noise must be > 0");
    if (link.antennas < 1) throw std::invalid_argument("link: antennas must be >= 1");
}

}  // namespace

FixedPoint solve_fixed_point(const LinkParams& link, double tol, int max_iter) {
    check_link(link);
    if (!(tol > 0.0)) throw std::invalid_argument("solve_fixed_point: tol must be > 0");
    const double s = link.power * link.gain / link.noise;
    if (s <= 0.0) return FixedPoint{1.0, 0.0, 0};

    const double L = link.antennas;
    const double alpha = 0.5;
    double u = 1.0;
    for (int i = 1; i <= max_iter; ++i) {
        const double rhs = 1.0 + s / (L * (1.0 + s / u));
        const double residual = std::abs(u - rhs);
        if (residual <= tol) return FixedPoint{u, residual, i - 1};
        u = (1.0 - alpha) * u + alpha * rhs;
    }
    const double rhs = 1.0 + s / (L * (1.0 + s / u));
    throw std::runtime_error("solve_fixed_point: no convergence after " +
                             std::to_string(max_iter) +
                             " iterations, residual " + std::to_string(std::abs(u - rhs)));
}

double deterministic_rate(const LinkParams& link) {
    check_link(link);
    const double s = link.power * link.gain / link.noise;
    if (s <= 0.0) return 0.0;
    const double u = fixed_point_root(s, link.antennas);
    return link.subcarrier_bandwidth * de_spectral_efficiency(s, u, link.antennas);
}

double deterministic_rate_derivative(const LinkParams& link) {
    check_link(link);
    const double s = link.power * link.gain / link.noise;
    const double u = fixed_point_root(s, link.antennas);
    return link.subcarrier_bandwidth * kLog2E * link.gain /
           (u * link.noise + link.power * link.gain);
}

McRate monte_carlo_rate(const LinkParams& link, long samples, RngStream& rng) {
    check_link(link);
    if (samples < 1) throw std::invalid_argument("monte_carlo_rate: samples must be >= 1");
    const double scale =
        link.power * link.gain / (link.noise * static_cast<double>(link.antennas));
    double sum = 0.0;
    double sum_sq = 0.0;
    for (long i = 0; i < samples; ++i) {
        const double x = sample_small_scale(link.antennas, rng).vector_gain;
        const double r = link.subcarrier_bandwidth * kLog2E * std::log1p(scale * x);
        sum += r;
        sum_sq += r * r;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return McRate{mean, std::sqrt(var / n)};
}

double g_metric(double power, double omega, double gain, double noise, int antennas) {
    if (omega < 0.0) throw std::invalid_argument("g_metric: omega must be >= 0");
    if (power < 0.0) throw std::invalid_argument("g_metric: power must be >= 0");
    const double s = power * gain / noise;
    // omega - 1 + e^{-omega} computed as omega + expm1(-omega) to keep
    // precision near omega = 0
    return kLog2E * std::log1p(s * std::exp(-omega)) +
           antennas * kLog2E * (omega + std::expm1(-omega));
}

double f_metric(double power, double u, double gain, double noise, int antennas) {
    if (u < 1.0) throw std::invalid_argument("f_metric: u must be >= 1");
    if (power < 0.0) throw std::invalid_argument("f_metric: power must be >= 0");
    const double s = power * gain / noise;
    return de_spectral_efficiency(s, u, antennas);
}

}  // namespace marlin
