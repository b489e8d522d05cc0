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
#include "marlin/channel.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace marlin {

double subcarrier_wavelength(const CarrierPlan& plan, int n) {
    if (n < 0 || n >= plan.subcarrier_count)
        throw std::out_of_range("subcarrier_wavelength: index out of range");
    const double offset = (n - (plan.subcarrier_count - 1) * 0.5) * plan.subcarrier_bandwidth;
    return kSpeedOfLight / (plan.carrier_frequency + offset);
}

ChannelTensor build_channel_tensor(const Scenario& scenario) {
    const int K = scenario.user_count();
    const int M = scenario.time_grid.slot_count;
    const int J = scenario.station_count();
    const int N = scenario.carrier.subcarrier_count;

    std::vector<double> wavelengths(N);
    for (int n = 0; n < N; ++n) wavelengths[n] = subcarrier_wavelength(scenario.carrier, n);

    ChannelTensor ct{Tensor4d(K, M, J, N)};
    for (int m = 0; m < M; ++m) {
        for (int j = 0; j < J; ++j) {
            const BaseStation& bs = scenario.base_stations[j];
            for (int k = 0; k < K; ++k) {
                const double d = slot_distance(scenario, k, m, j);
                const double h2 = scenario.users[k].antenna_height;
                for (int n = 0; n < N; ++n)
                    ct.gains(k, m, j, n) = two_ray_gain(wavelengths[n], d, bs.antenna_height, h2);
            }
        }
    }
    return ct;
}

SmallScaleSample sample_small_scale(int antenna_count, RngStream& rng) {
    if (antenna_count < 1)
        throw std::invalid_argument("sample_small_scale: antenna count must be >= 1");
    // each complex entry contributes x^2 + y^2, x and y of variance 1/2
    const double scale = 0.70710678118654752440;  // 1/sqrt(2)
    double sum = 0.0;
    for (int l = 0; l < antenna_count; ++l) {
        const double x = scale * rng.normal();
        const double y = scale * rng.normal();
        sum += x * x + y * y;
    }
    return SmallScaleSample{sum};
}

namespace {

void write_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw std::runtime_error("tensor file truncated");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

}  // namespace

void dump_tensor(const Tensor4d& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open tensor dump file: " + path);
    write_u64(out, static_cast<std::uint64_t>(t.users()));
    write_u64(out, static_cast<std::uint64_t>(t.slots()));
    write_u64(out, static_cast<std::uint64_t>(t.stations()));
    write_u64(out, static_cast<std::uint64_t>(t.subcarriers()));
    // row-major (k, m, j, n): n fastest
    for (Eigen::Index k = 0; k < t.users(); ++k)
        for (Eigen::Index m = 0; m < t.slots(); ++m)
            for (Eigen::Index j = 0; j < t.stations(); ++j)
                for (Eigen::Index n = 0; n < t.subcarriers(); ++n) {
                    const double v = t(k, m, j, n);
                    out.write(reinterpret_cast<const char*>(&v), sizeof(double));
                }
    if (!out) throw std::runtime_error("tensor dump failed: " + path);
}

Tensor4d load_tensor(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open tensor file: " + path);
    const auto K = static_cast<Eigen::Index>(read_u64(in));
    const auto M = static_cast<Eigen::Index>(read_u64(in));
    const auto J = static_cast<Eigen::Index>(read_u64(in));
    const auto N = static_cast<Eigen::Index>(read_u64(in));
    Tensor4d t(K, M, J, N);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index m = 0; m < M; ++m)
            for (Eigen::Index j = 0; j < J; ++j)
                for (Eigen::Index n = 0; n < N; ++n) {
                    double v = 0.0;
                    in.read(reinterpret_cast<char*>(&v), sizeof(double));
                    if (!in) throw std::runtime_error("tensor file truncated: " + path);
                    t(k, m, j, n) = v;
                }
    return t;
}

}  // namespace marlin
