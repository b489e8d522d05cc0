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
#ifndef MARLIN_CHANNEL_HPP
#define MARLIN_CHANNEL_HPP

#include "marlin/rng.hpp"
#include "marlin/scenario.hpp"
#include "marlin/tensor.hpp"

#include <cmath>
#include <string>

namespace marlin {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Large-scale linear power gains, indexed (user k, slot m, BS j, subcarrier n).
struct ChannelTensor {
    Tensor4d gains;
};

/// Squared Euclidean norm of the L-entry small-scale fading vector;
/// Gamma(L, 1) distributed with mean L.
struct SmallScaleSample {
    double vector_gain = 0.0;
};

/// Wavelength of subcarrier n (0-based). Subcarriers are centered on the
/// carrier: f_n = fc + (n - (N-1)/2) * Bs.
double subcarrier_wavelength(const CarrierPlan& plan, int n);

/// Two-ray shore-to-ship power gain:
///   beta = (lambda / (4 pi d))^2 * [2 sin(2 pi H1 H2 / (lambda d))]^2
/// All arguments must be positive.
template <typename Scalar>
Scalar two_ray_gain(Scalar wavelength, Scalar distance, Scalar h_bs, Scalar h_user) {
    if (!(wavelength > Scalar(0)) || !(distance > Scalar(0)) || !(h_bs > Scalar(0)) ||
        !(h_user > Scalar(0)))
        throw std::invalid_argument("two_ray_gain: arguments must be positive");
    const Scalar pi = Scalar(3.14159265358979323846264338328);
    const Scalar spread = wavelength / (Scalar(4) * pi * distance);
    const Scalar phase = Scalar(2) * pi * h_bs * h_user / (wavelength * distance);
    const Scalar lobes = Scalar(2) * std::sin(phase);
    return spread * spread * lobes * lobes;
}

/// Gains for every (k, m, j, n) from scenario geometry.
ChannelTensor build_channel_tensor(const Scenario& scenario);

/// One draw of the fading vector norm: sum over L antennas of x^2 + y^2 with
/// x, y zero-mean Gaussians of variance 1/2 (unit-variance complex entries).
SmallScaleSample sample_small_scale(int antenna_count, RngStream& rng);

/// Binary tensor dump: header K,M,J,N as 64-bit LE unsigned, then row-major
/// 64-bit floats in (k, m, j, n) order.
void dump_tensor(const Tensor4d& tensor, const std::string& path);
Tensor4d load_tensor(const std::string& path);

}  // namespace marlin

#endif
