// SPDX-License-Identifier: Apache-2.0
//
// selfmix - self-mixing antenna array simulation library
// Copyright (C) 2026 The selfmix authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "selfmix/link_budget.hpp"
#include "selfmix/units.hpp"
#include "support.hpp"

#include <doctest.h>

#include <limits>

using namespace selfmix;
using selfmix::test::error_code_of;
using selfmix::test::Gen;

namespace
{

LinkBudgetParams setup(double f, double tx, double eta)
{
    return {tx, 25.0, 1.5, f, 0.0, eta};
}

} // namespace

TEST_CASE("Friis against a hand calculation")
{
    // lambda / (4 pi R) at 34 GHz and 1.5 m, the same as lambda / (6 pi m)
    const double lambda = 299792458.0 / 34e9;
    const double path = 20.0 * std::log10(lambda / (6.0 * std::numbers::pi));
    CHECK(friis_rx_power(setup(34e9, 0.0, 0.0)) == doctest::Approx(25.0 + path).epsilon(1e-12));
    CHECK(friis_rx_power(setup(34e9, 0.0, 0.0)) == doctest::Approx(-41.6).epsilon(0.05 / 41.6));
    CHECK(friis_rx_power(setup(34e9, 0.0, -1.8)) == doctest::Approx(-43.4).epsilon(0.1 / 43.4));
}

TEST_CASE("Friis at 38.5 GHz and the back-solved efficiency")
{
    CHECK(friis_rx_power(setup(38.5e9, 5.0, -1.4)) == doctest::Approx(-39.078822993167016).epsilon(1e-12));
    CHECK(friis_rx_power(setup(38.5e9, 5.0, default_total_efficiency_db(38.5e9))) ==
          doctest::Approx(-39.5).epsilon(0.01 / 39.5));
}

TEST_CASE("property: distance doubling costs 6.02 dB and frequency lowers the power")
{
    Gen g(4);
    for (int trial = 0; trial < 50; ++trial)
    {
        LinkBudgetParams p{g.uniform(-10, 10), g.uniform(0, 30), g.uniform(0.1, 10), g.uniform(1e9, 1e11),
                           g.uniform(-5, 20), g.uniform(-3, 0)};
        LinkBudgetParams far = p;
        far.distance_m *= 2.0;
        CHECK(friis_rx_power(p) - friis_rx_power(far) == doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
        LinkBudgetParams hi = p;
        hi.frequency_hz *= g.uniform(1.01, 2.0);
        CHECK(friis_rx_power(hi) < friis_rx_power(p));
    }
}

TEST_CASE("link budget parameter validation")
{
    auto bad = setup(34e9, 0.0, 0.5);
    CHECK(error_code_of([&] { friis_rx_power(bad); }) == ErrorCode::InvalidParams);
    bad = setup(34e9, 0.0, -1.0);
    bad.distance_m = 0.0;
    CHECK(error_code_of([&] { friis_rx_power(bad); }) == ErrorCode::InvalidParams);
}

TEST_CASE("default efficiency table")
{
    CHECK(default_total_efficiency_db(34e9) == doctest::Approx(-1.80));
    CHECK(default_total_efficiency_db(36.5e9) == doctest::Approx(-1.28));
    CHECK(default_total_efficiency_db(20e9) == doctest::Approx(-1.80));
    CHECK(default_total_efficiency_db(50e9) == doctest::Approx(-1.82));
    CHECK(default_total_efficiency_db(35.25e9) == doctest::Approx(-1.54));
}

TEST_CASE("chain output slopes")
{
    const ChainSpec chain;
    Gen g(19);
    for (int trial = 0; trial < 50; ++trial)
    {
        const double a = g.uniform(-70, -20), b = g.uniform(-70, -20), x = g.uniform(-10, 10);
        const double base = chain_output_power(a, b, chain);
        CHECK(chain_output_power(a + x, b, chain) - base == doctest::Approx(x));
        CHECK(chain_output_power(a + x, b + x, chain) - base == doctest::Approx(2.0 * x));
        // treated as an LO, the stronger tone drops out
        const double lo = chain_output_power(a, b, chain, false);
        CHECK(lo == doctest::Approx(std::min(a, b) + chain.lna_gain_db + chain.conversion_gain_db));
    }
    const double inf = std::numeric_limits<double>::infinity();
    CHECK(chain_output_power(-inf, -inf, chain) == kDbFloor);
    CHECK(chain_output_power(-3.0, -inf, chain) == kDbFloor);
}

TEST_CASE("chain output of the 34/36.5 GHz case")
{
    const double p34 = friis_rx_power(setup(34e9, 0.0, -1.8));
    const double p365 = friis_rx_power(setup(36.5e9, 5.0, default_total_efficiency_db(36.5e9)));
    CHECK(p365 == doctest::Approx(-38.5).epsilon(0.01 / 38.5));
    const double out = chain_output_power(p34, p365, ChainSpec{});
    CHECK(std::abs(out - (-38.0)) <= 3.0);

    ChainSpec lossy;
    lossy.combiner_gain_db = 10.0 * std::log10(8.0) - 0.5;
    lossy.if_amp_gain_db = 20.0;
    lossy.cable_loss_db = 2.0;
    CHECK(chain_output_power(p34, p365, lossy) - out == doctest::Approx(10.0 * std::log10(8.0) - 0.5 + 18.0));
}

TEST_CASE("conversion calibration reaches the requested chain gain")
{
    const TonePair tones;
    const auto cal = calibrate_conversion(MixingChain{}, tones, -40.0);
    CHECK(cal.if_power_dbm == doctest::Approx(-40.0).epsilon(0.01 / 40.0));
    CHECK(cal.conversion_constant_db == doctest::Approx(kDefaultConversionConstantDb).epsilon(0.05 / 5.0));
    CHECK(cal.bias.terminal_voltage > 0.4);
    CHECK(cal.bias.terminal_voltage < 0.7298);

    MixingChain at_bias;
    at_bias.bias = cal.bias;
    CHECK(conversion_constant_db(at_bias, tones, -40.0) == doctest::Approx(cal.conversion_constant_db));
}
