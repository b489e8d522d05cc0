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

#include "marlin/channel.hpp"
#include "marlin/generate.hpp"
#include "marlin/reference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

using namespace marlin;

TEST_CASE("subcarrier wavelengths") {
    CarrierPlan plan{1.9e9, 30e6, 15, 2e6};

    SUBCASE("center subcarrier of an odd grid is exactly c / fc") {
        CHECK(subcarrier_wavelength(plan, 7) == doctest::Approx(kSpeedOfLight / 1.9e9));
        CHECK(subcarrier_wavelength(plan, 7) == doctest::Approx(0.157785504).epsilon(1e-9));
    }
    SUBCASE("last subcarrier sits 7 Bs above the carrier") {
        CHECK(subcarrier_wavelength(plan, 14) ==
              doctest::Approx(kSpeedOfLight / (1.9e9 + 14e6)).epsilon(1e-12));
    }
    SUBCASE("index range is enforced") {
        CHECK_THROWS_AS(subcarrier_wavelength(plan, -1), std::out_of_range);
        CHECK_THROWS_AS(subcarrier_wavelength(plan, 15), std::out_of_range);
    }
}

TEST_CASE("two-ray gain") {
    SUBCASE("sine null at d = 2 H1 H2 / lambda") {
        const double lam = 0.15779;
        const double d_null = 2.0 * 100.0 * 10.0 / lam;
        CHECK(two_ray_gain(lam, d_null, 100.0, 10.0) <= 1e-30);
    }
    SUBCASE("independently evaluated reference value") {
        // high-precision evaluation of the model at lambda=0.15779, d=10 km
        CHECK(two_ray_gain(0.15779, 1e4, 100.0, 10.0) ==
              doctest::Approx(3.4995035102913823e-12).epsilon(1e-9));
    }
    SUBCASE("doubling the user height quadruples the far-field gain") {
        const double lam = 0.15779;
        const double d = 2e6;  // sine argument well below 1
        const double b1 = two_ray_gain(lam, d, 100.0, 10.0);
        const double b2 = two_ray_gain(lam, d, 100.0, 20.0);
        CHECK(b2 / b1 == doctest::Approx(4.0).epsilon(0.01));
    }
    SUBCASE("non-positive arguments are rejected") {
        CHECK_THROWS_AS(two_ray_gain(0.15, 0.0, 100.0, 10.0), std::invalid_argument);
        CHECK_THROWS_AS(two_ray_gain(-0.15, 1e4, 100.0, 10.0), std::invalid_argument);
    }
}

TEST_CASE("far-field gain decays as d^-4") {
    const double lam = 0.157785504;
    const double d_null = 2.0 * 100.0 * 10.0 / lam;  // last sine null
    for (double d = 8.0 * d_null; d < 200.0 * d_null; d *= 1.7) {
        const double ratio = two_ray_gain(lam, 2.0 * d, 100.0, 10.0) /
                             two_ray_gain(lam, d, 100.0, 10.0);
        CHECK(ratio >= 0.0625 * 0.95);
        CHECK(ratio <= 0.0625 * 1.05);
    }
}

TEST_CASE("channel tensor construction") {
    SUBCASE("stationary user gives slot-constant gains") {
        GeneratorParams params;
        params.users = 1;
        params.slots = 6;
        params.stations = 2;
        Scenario s = make_paper_scenario(params);
        const Eigen::Vector2d fixed{500.0, 8000.0};
        s.users[0].lane.waypoints = {Waypoint{0.0, fixed},
                                     Waypoint{s.service_duration(), fixed}};
        const ChannelTensor ct = build_channel_tensor(s);
        for (int m = 1; m < 6; ++m)
            for (int j = 0; j < 2; ++j)
                for (int n = 0; n < s.carrier.subcarrier_count; ++n)
                    CHECK(ct.gains(0, m, j, n) == doctest::Approx(ct.gains(0, 0, j, n)));
    }

    SUBCASE("single-entry tensor equals the scalar model") {
        GeneratorParams params;
        params.users = 1;
        params.slots = 1;
        params.stations = 1;
        params.subcarriers = 1;
        params.total_bandwidth_hz = 2e6;
        const Scenario s = make_paper_scenario(params);
        const ChannelTensor ct = build_channel_tensor(s);
        const double d = slot_distance(s, 0, 0, 0);
        const double expected =
            two_ray_gain(subcarrier_wavelength(s.carrier, 0), d, 100.0, 10.0);
        CHECK(ct.gains(0, 0, 0, 0) == doctest::Approx(expected).epsilon(1e-13));
    }

    SUBCASE("published configuration shape") {
        const Scenario s = make_paper_scenario(GeneratorParams{});
        const ChannelTensor ct = build_channel_tensor(s);
        CHECK(ct.gains.users() == 90);
        CHECK(ct.gains.slots() == 250);
        CHECK(ct.gains.stations() == 3);
        CHECK(ct.gains.subcarriers() == 15);
    }

    SUBCASE("construction is deterministic") {
        GeneratorParams params;
        params.users = 5;
        params.slots = 20;
        const Scenario s = make_paper_scenario(params);
        const ChannelTensor a = build_channel_tensor(s);
        const ChannelTensor b = build_channel_tensor(s);
        CHECK((a.gains.flat() == b.gains.flat()).all());
    }
}

TEST_CASE("small-scale sampler statistics") {
    RngStream rng(4242);
    const int L = 16;
    const long n = 1000000;
    double sum = 0.0, sum_sq = 0.0;
    for (long i = 0; i < n; ++i) {
        const double x = sample_small_scale(L, rng).vector_gain;
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    CHECK(mean == doctest::Approx(16.0).epsilon(0.05 / 16.0));
    CHECK(var == doctest::Approx(16.0).epsilon(0.2 / 16.0));
}

TEST_CASE("small-scale sampler is reproducible") {
    RngStream a(7), b(7);
    for (int i = 0; i < 100; ++i)
        CHECK(sample_small_scale(8, a).vector_gain == sample_small_scale(8, b).vector_gain);
}

TEST_CASE("small-scale sampler fits Gamma(L,1)") {
    const int L = 4;
    const long n = 100000;
    RngStream rng(515151);
    std::vector<double> draws(n);
    for (long i = 0; i < n; ++i) draws[i] = sample_small_scale(L, rng).vector_gain;
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (long i = 0; i < n; ++i) {
        const double cdf = reference::erlang_cdf(L, draws[i]);
        ks = std::max(ks, std::abs(cdf - (i + 1.0) / n));
        ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    }
    // 1% Kolmogorov-Smirnov critical value at n = 1e5
    CHECK(ks < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("binary tensor dump round-trips") {
    Tensor4d t(2, 3, 2, 4);
    RngStream rng(5);
    for (Eigen::Index i = 0; i < t.size(); ++i) t.flat()[i] = rng.uniform();
    const std::string path = "tensor_roundtrip.bin";
    dump_tensor(t, path);
    const Tensor4d back = load_tensor(path);
    REQUIRE(back.users() == 2);
    REQUIRE(back.slots() == 3);
    REQUIRE(back.stations() == 2);
    REQUIRE(back.subcarriers() == 4);
    CHECK((back.flat() == t.flat()).all());
    std::remove(path.c_str());
}
