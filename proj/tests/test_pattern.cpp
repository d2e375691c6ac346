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

#include "selfmix/array.hpp"
#include "selfmix/pattern.hpp"
#include "selfmix/units.hpp"
#include "support.hpp"

#include <doctest.h>

#include <sstream>

using namespace selfmix;
using selfmix::test::error_code_of;
using selfmix::test::Gen;

namespace
{

std::vector<double> grid_deg(double max_deg, double step_deg)
{
    return uniform_theta_grid(deg_to_rad(max_deg), deg_to_rad(step_deg));
}

} // namespace

TEST_CASE("uniform_theta_grid has exact endpoints and spacing")
{
    const auto g = grid_deg(90.0, 0.25);
    REQUIRE(g.size() == 721);
    CHECK(g.front() == -std::numbers::pi / 2);
    CHECK(g.back() == std::numbers::pi / 2);
    CHECK(g[360] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(error_code_of([] { uniform_theta_grid(2.0, 0.1); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("cos^2 pattern 3-dB width")
{
    // cos^2(t) = 1/sqrt(2) at t = acos(2^-1/4)
    const auto p = sample_pattern(AnalyticPattern::cos_q(2.0), grid_deg(90.0, 0.01), 0.0);
    const auto bw = beamwidth_3db(p);
    CHECK(bw.crossed);
    CHECK(rad_to_deg(bw.width) == doctest::Approx(65.53019947929782).epsilon(1e-5));
    CHECK(rad_to_deg(2.0 * std::acos(std::pow(2.0, -0.25))) == doctest::Approx(65.53019947929782));
}

TEST_CASE("beamwidth of a pattern that never drops 3 dB spans the cut")
{
    const auto p = sample_pattern(AnalyticPattern::isotropic(), grid_deg(60.0, 1.0), 0.0);
    const auto bw = beamwidth_3db(p);
    CHECK_FALSE(bw.crossed);
    CHECK(bw.width == doctest::Approx(deg_to_rad(120.0)));
}

TEST_CASE("two-beam pattern has two symmetric lobes")
{
    const auto p = sample_pattern(AnalyticPattern::two_beam(deg_to_rad(30.0), deg_to_rad(20.0)), grid_deg(90.0, 0.5),
                                  0.0);
    CHECK(p.peak() == doctest::Approx(1.0));
    const auto lobes = find_lobes(p, 0.5, deg_to_rad(90.0));
    REQUIRE(lobes.size() == 2);
    CHECK(rad_to_deg(lobes[0].theta) == doctest::Approx(-30.0).epsilon(1e-3));
    CHECK(rad_to_deg(lobes[1].theta) == doctest::Approx(30.0).epsilon(1e-3));
    CHECK(lobes[0].level == doctest::Approx(lobes[1].level));
}

TEST_CASE("property: self-mix pattern is the point-wise product")
{
    Gen g(12);
    const auto theta = grid_deg(90.0, 1.0);
    for (int trial = 0; trial < 20; ++trial)
    {
        const double phi = g.uniform(0.0, 3.0);
        const auto a = sample_pattern(AnalyticPattern::cos_q(g.uniform(0.0, 4.0), 37.5e9), theta, phi);
        const auto b = sample_pattern(
            AnalyticPattern::two_beam(g.uniform(0.1, 1.0), g.uniform(0.1, 1.0), 38.5e9), theta, phi);
        const auto sm = self_mix_pattern(a, b);
        CHECK(sm.frequency == doctest::Approx(1e9));
        for (std::size_t i = 0; i < theta.size(); ++i)
            CHECK(sm.gains[i] == doctest::Approx(a.gains[i] * b.gains[i]));
        // isotropic second factor leaves the first unchanged
        const auto same = self_mix_pattern(a, sample_pattern(AnalyticPattern::isotropic(38.5e9), theta, phi));
        CHECK(same.gains == a.gains);
    }
}

TEST_CASE("self_mix_pattern rejects mismatched grids")
{
    const auto a = sample_pattern(AnalyticPattern::isotropic(), grid_deg(90.0, 1.0), 0.0);
    const auto b = sample_pattern(AnalyticPattern::isotropic(), grid_deg(90.0, 2.0), 0.0);
    const auto c = sample_pattern(AnalyticPattern::isotropic(), grid_deg(90.0, 1.0), 0.5);
    CHECK(error_code_of([&] { self_mix_pattern(a, b); }) == ErrorCode::GridMismatch);
    CHECK(error_code_of([&] { self_mix_pattern(a, c); }) == ErrorCode::GridMismatch);
}

TEST_CASE("total pattern multiplies in the array factor")
{
    const auto geo = ArrayGeometry::rectangular(4, 2, 0.032, 0.036);
    const auto theta = grid_deg(90.0, 5.0);
    const double phi = std::numbers::pi / 2;
    const auto sm = self_mix_pattern(sample_pattern(AnalyticPattern::cos_q(1.0, 37.5e9), theta, phi),
                                     sample_pattern(AnalyticPattern::cos_q(1.0, 38.5e9), theta, phi));
    const auto tot = total_pattern(sm, [&](const Direction &d) { return rf_array_factor(geo, 38.5e9, d); });
    for (std::size_t i = 0; i < theta.size(); ++i)
        CHECK(tot.gains[i] ==
              doctest::Approx(sm.gains[i] * rf_array_factor(geo, 38.5e9, Direction::from_cut(theta[i], phi))));
    const auto n = normalized(tot);
    CHECK(n.peak() == doctest::Approx(1.0));
}

TEST_CASE("pattern CSV round trip")
{
    const auto p = sample_pattern(AnalyticPattern::cos_q(1.5), grid_deg(80.0, 10.0), 0.0);
    std::ostringstream os;
    write_pattern_csv(os, p);
    CHECK(os.str().rfind("theta_deg,gain_db\n-80,", 0) == 0);
    std::istringstream in(os.str());
    const auto back = read_pattern_csv(in, 0.0, 38e9);
    REQUIRE(back.gains.size() == p.gains.size());
    for (std::size_t i = 0; i < p.gains.size(); ++i)
    {
        CHECK(back.theta[i] == doctest::Approx(p.theta[i]).epsilon(1e-9));
        CHECK(back.gains[i] == doctest::Approx(p.gains[i]).epsilon(1e-8));
    }
    std::istringstream bad_header("theta,gain\n0,0\n");
    CHECK(error_code_of([&] { read_pattern_csv(bad_header, 0.0, 1.0); }) == ErrorCode::ParseError);
    std::istringstream bad_order("theta_deg,gain_db\n10,0\n0,0\n");
    CHECK(error_code_of([&] { read_pattern_csv(bad_order, 0.0, 1.0); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("write_total_pattern_csv columns")
{
    const auto sm = sample_pattern(AnalyticPattern::isotropic(), grid_deg(90.0, 90.0), 0.0);
    const std::vector<double> af_if{1.0, 1.0, 1.0}, af_rf{0.5, 1.0, 0.5}, short_af{1.0};
    std::ostringstream os;
    write_total_pattern_csv(os, sm, af_if, af_rf);
    CHECK(os.str() == "theta_deg,gain_db,af_if,af_rf,total_if_db,total_rf_db\n"
                      "-90,0,1,0.5,0,-6.02059991\n"
                      "0,0,1,1,0,0\n"
                      "90,0,1,0.5,0,-6.02059991\n");
    CHECK(error_code_of([&] { write_total_pattern_csv(os, sm, short_af, af_rf); }) == ErrorCode::GridMismatch);
}

TEST_CASE("examples: analytic patterns")
{
    const std::vector<double> t{deg_to_rad(-60.0), 0.0, deg_to_rad(60.0)};
    const auto flat = sample_pattern(AnalyticPattern::isotropic(), t, 0.0);
    for (double gain : flat.gains)
        CHECK(gain == 1.0);
    CHECK(sample_pattern(AnalyticPattern::cos_q(2.0), t, 0.0).gains[2] == doctest::Approx(0.25));

    const auto theta = grid_deg(90.0, 0.5);
    const auto tb = sample_pattern(AnalyticPattern::two_beam(deg_to_rad(30.0), deg_to_rad(20.0)), theta, 0.0);
    const std::size_t mid = theta.size() / 2;
    CHECK(tb.gains[mid] < tb.gains[mid - 1]);
    CHECK(tb.gains[mid] < tb.gains[mid + 1]);
}

TEST_CASE("examples: self-mix products")
{
    const auto theta = grid_deg(90.0, 1.0);
    const auto iso = sample_pattern(AnalyticPattern::isotropic(), theta, 0.0);
    const auto iso2 = self_mix_pattern(iso, iso);
    for (double gain : iso2.gains)
        CHECK(gain == 1.0);
    const auto c1 = sample_pattern(AnalyticPattern::cos_q(1.0), theta, 0.0);
    const auto c2 = sample_pattern(AnalyticPattern::cos_q(2.0), theta, 0.0);
    const auto prod = self_mix_pattern(c1, c1);
    for (std::size_t i = 0; i < theta.size(); ++i)
        CHECK(std::abs(prod.gains[i] - c2.gains[i]) < 1e-12);
    PatternGrid zero = iso;
    std::fill(zero.gains.begin(), zero.gains.end(), 0.0);
    const auto nulled = self_mix_pattern(c1, zero);
    for (double gain : nulled.gains)
        CHECK(gain == 0.0);
}

TEST_CASE("examples: total patterns")
{
    const auto theta = grid_deg(90.0, 0.25);
    const double e_plane = std::numbers::pi / 2;
    const auto sm = self_mix_pattern(sample_pattern(AnalyticPattern::cos_q(1.0, 37.5e9), theta, e_plane),
                                     sample_pattern(AnalyticPattern::cos_q(1.0, 38.5e9), theta, e_plane));
    // Delta f -> 0 and N = 1 both leave the self-mix pattern unchanged
    const auto geo = ArrayGeometry::rectangular(4, 2, 0.032, 0.036);
    const auto limit = total_pattern(sm, [&](const Direction &d) { return if_array_factor(geo, 38.5e9, 38.5e9 + 1e3, d); });
    const ArrayGeometry one({{0.0, 0.0}});
    const auto single = total_pattern(sm, [&](const Direction &d) { return if_array_factor(one, 37.5e9, 38.5e9, d); });
    for (std::size_t i = 0; i < theta.size(); ++i)
    {
        CHECK(limit.gains[i] == doctest::Approx(sm.gains[i]).epsilon(1e-6));
        CHECK(single.gains[i] == sm.gains[i]);
    }

    // Grating lobes: RF total pattern yes, IF total pattern no
    const auto iso = self_mix_pattern(sample_pattern(AnalyticPattern::isotropic(37.5e9), theta, e_plane),
                                      sample_pattern(AnalyticPattern::isotropic(38.5e9), theta, e_plane));
    const auto rf = total_pattern(iso, [&](const Direction &d) { return rf_array_factor(geo, 38.5e9, d); });
    const auto ifp = total_pattern(iso, [&](const Direction &d) { return if_array_factor(geo, 37.5e9, 38.5e9, d); });
    const double level = 1.0 / std::sqrt(2.0);
    CHECK(find_lobes(rf, level, deg_to_rad(60.0)).size() >= 3);  // main lobe plus grating lobes
    CHECK(find_lobes(ifp, level, deg_to_rad(60.0)).size() == 1);

    // 4 elements at 32 mm along x: IF factor wider than RF factor by more than 10x
    const auto row = ArrayGeometry::rectangular(4, 1, 0.032, 0.032);
    const auto af_if = total_pattern(iso, [&](const Direction &d) { return if_array_factor(row, 37.5e9, 38.5e9, d); });
    const auto af_rf = total_pattern(iso, [&](const Direction &d) { return rf_array_factor(row, 38.5e9, d); });
    PatternGrid x_if = af_if, x_rf = af_rf;
    x_if.phi_cut = x_rf.phi_cut = 0.0;
    // same geometry evaluated on the x cut
    for (std::size_t i = 0; i < theta.size(); ++i)
    {
        x_if.gains[i] = if_array_factor(row, 37.5e9, 38.5e9, Direction::from_cut(theta[i], 0.0));
        x_rf.gains[i] = rf_array_factor(row, 38.5e9, Direction::from_cut(theta[i], 0.0));
    }
    CHECK(beamwidth_3db(x_if).width > 10.0 * beamwidth_3db(x_rf).width);
}
