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
#ifndef MARLIN_RATE_HPP
#define MARLIN_RATE_HPP

#include "marlin/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace marlin {

inline constexpr double kLog2E = 1.4426950408889634074;  // log2(e)

/// Parameters of one (user, slot, BS, subcarrier) link.
struct LinkParams {
    double power = 0.0;                 // P, W
    double gain = 0.0;                  // beta, linear
    double noise = 0.0;                 // sigma_n^2, W
    int antennas = 1;                   // L
    double subcarrier_bandwidth = 0.0;  // Bs, Hz
};

struct FixedPoint {
    double u_star = 1.0;
    double residual = 0.0;
    int iterations = 0;
};

struct McRate {
    double rate = 0.0;       // bits/s
    double std_error = 0.0;  // bits/s
};

/// Solution of u = 1 + s * [L + L s / u]^{-1} with s = P beta / sigma^2.
/// The equation reduces to u^2 + (s - 1 - s/L) u - s = 0; the positive root
/// is taken in a cancellation-free form.
template <typename Scalar>
Scalar fixed_point_root(Scalar snr, int antennas) {
    if (snr <= Scalar(0)) return Scalar(1);
    const Scalar L = Scalar(antennas);
    const Scalar b = snr - Scalar(1) - snr / L;
    const Scalar disc = std::sqrt(b * b + Scalar(4) * snr);
    return b > Scalar(0) ? Scalar(2) * snr / (b + disc) : (disc - b) / Scalar(2);
}

/// Spectral efficiency of the deterministic-equivalent rate at a given u,
/// in bits/s/Hz:  log2(1 + s/u) + L [log2(u) - log2(e) (1 - 1/u)].
template <typename Scalar>
Scalar de_spectral_efficiency(Scalar snr, Scalar u, int antennas) {
    const Scalar L = Scalar(antennas);
    return std::log1p(snr / u) * Scalar(kLog2E) +
           L * (std::log2(u) - Scalar(kLog2E) * (Scalar(1) - Scalar(1) / u));
}

/// Damped fixed-point iteration for u* from u0 = 1 (u <- (1-a)u + a rhs(u),
/// a = 1/2). Residual is |u - rhs(u)|. Throws on non-convergence.
FixedPoint solve_fixed_point(const LinkParams& link, double tol = 1e-10, int max_iter = 10000);

/// Deterministic-equivalent rate in bits/s. Zero power yields exactly zero.
double deterministic_rate(const LinkParams& link);

/// Derivative of deterministic_rate with respect to power (envelope form):
///   dr/dP = (Bs / ln 2) * beta / (u* sigma^2 + P beta).
double deterministic_rate_derivative(const LinkParams& link);

/// Ergodic-rate estimate: mean over draws of Bs log2(1 + P beta X / (L sigma^2))
/// with X = sample_small_scale(L). The 1/L keeps the mean effective fading
/// gain at one, matching the deterministic equivalent above.
McRate monte_carlo_rate(const LinkParams& link, long samples, RngStream& rng);

/// Substituted surrogate, bits/s/Hz:
///   g = log2(1 + P beta e^{-w} / sigma^2) + L log2(e) (w - 1 + e^{-w})
double g_metric(double power, double omega, double gain, double noise, int antennas);

/// Auxiliary metric, bits/s/Hz (u >= 1):
///   f = log2(1 + P beta / (u sigma^2)) + L [log2(u) - log2(e) (1 - 1/u)]
double f_metric(double power, double u, double gain, double noise, int antennas);

}  // namespace marlin

#endif
