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

#pragma once

#include "selfmix/array.hpp"

#include <functional>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace selfmix
{

// One planar cut of a pattern: linear field-amplitude gains sampled at signed
// angles theta in [-pi/2, pi/2] (strictly increasing) on the plane phi_cut.
struct PatternGrid
{
    std::vector<double> theta;  // rad
    double phi_cut = 0.0;       // rad
    std::vector<double> gains;
    double frequency = 0.0;  // Hz

    // Throws InvalidGrid on an empty, non-increasing or out-of-range grid, or bad gains.
    void validate() const;
    double peak() const;
};

struct AnalyticPattern
{
    enum class Kind
    {
        Isotropic,
        CosQ,
        TwoBeam,
    };

    Kind kind = Kind::Isotropic;
    double q = 0.0;      // CosQ exponent
    double tilt = 0.0;   // TwoBeam beam offset from broadside, rad
    double width = 0.0;  // TwoBeam full width at half amplitude of each beam, rad
    double frequency = 0.0;

    static AnalyticPattern isotropic(double frequency_hz = 0.0);
    static AnalyticPattern cos_q(double q, double frequency_hz = 0.0);
    static AnalyticPattern two_beam(double tilt_rad, double width_rad, double frequency_hz = 0.0);
};

// Uniform signed grid from -max_abs to +max_abs (inclusive) with the given step, in radians.
std::vector<double> uniform_theta_grid(double max_abs_rad, double step_rad);

PatternGrid sample_pattern(const AnalyticPattern &p, std::span<const double> theta_rad, double phi_cut_rad);

// Point-wise product C_I * C_II, tagged with the difference frequency.
PatternGrid self_mix_pattern(const PatternGrid &c_I, const PatternGrid &c_II);

using ArrayFactorFn = std::function<double(const Direction &)>;

// C_tot = C_array * C_sm along the cut.
PatternGrid total_pattern(const PatternGrid &self_mix, const ArrayFactorFn &array_factor);

// Scales gains to a peak of 1; an all-zero pattern is returned unchanged.
PatternGrid normalized(const PatternGrid &p);

struct BeamwidthResult
{
    double width = 0.0;   // rad
    bool crossed = true;  // false: the pattern never fell below max/sqrt(2) on some side; width is the full cut
};

BeamwidthResult beamwidth_3db(const PatternGrid &p);

struct Lobe
{
    double theta = 0.0;  // rad
    double level = 0.0;  // relative to the pattern peak (linear amplitude)
};

// Local maxima whose level is at least `min_relative_level` of the peak, within |theta| <= max_abs_theta.
std::vector<Lobe> find_lobes(const PatternGrid &p, double min_relative_level, double max_abs_theta_rad);

// CSV with header "theta_deg,gain_db"; gain in dB of field amplitude (20 log10).
PatternGrid read_pattern_csv(std::istream &in, double phi_cut_rad, double frequency_hz);
void write_pattern_csv(std::ostream &os, const PatternGrid &p);

// theta_deg,gain_db,af_if,af_rf,total_if_db,total_rf_db where gain_db is the self-mix pattern.
void write_total_pattern_csv(std::ostream &os, const PatternGrid &self_mix, std::span<const double> af_if,
                             std::span<const double> af_rf);

} // namespace selfmix
