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

#include <algorithm>
#include <cmath>
#include <numbers>

namespace selfmix
{

inline constexpr double kSpeedOfLight = 299792458.0;    // m/s, exact
inline constexpr double kThermalVoltage300K = 0.02585;  // V
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reported in place of -inf for zero power or amplitude.
inline constexpr double kDbFloor = -200.0;

inline double power_ratio_to_db(double ratio)
{
    if (!(ratio > 0.0))
        return kDbFloor;
    return std::max(10.0 * std::log10(ratio), kDbFloor);
}

inline double amplitude_ratio_to_db(double ratio)
{
    if (!(ratio > 0.0))
        return kDbFloor;
    return std::max(20.0 * std::log10(ratio), kDbFloor);
}

inline double watts_to_dbm(double watts) { return power_ratio_to_db(watts / 1e-3); }
inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double db_to_amplitude_factor(double db) { return std::pow(10.0, db / 20.0); }
inline double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

// Peak amplitude of a sinusoid delivering `dbm` into `impedance_ohm`: P = A^2 / (2 R).
inline double tone_amplitude_from_dbm(double dbm, double impedance_ohm)
{
    return std::sqrt(2.0 * impedance_ohm * dbm_to_watts(dbm));
}

// Wraps to [-pi, pi).
inline double wrap_phase(double phase)
{
    double p = std::fmod(phase + std::numbers::pi, kTwoPi);
    if (p < 0.0)
        p += kTwoPi;
    p -= std::numbers::pi;
    return p >= std::numbers::pi ? -std::numbers::pi : p;
}

} // namespace selfmix
