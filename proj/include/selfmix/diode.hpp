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

#include "selfmix/signal.hpp"
#include "selfmix/units.hpp"

#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace selfmix
{

// Shockley junction with an ohmic series resistance. Junction capacitance is not modeled.
//
// The defaults are not datasheet values. They are fitted so that the static
// maximum of d2i/dv2 sits at 0.73 V and 2.5 mA.
struct DiodeModel
{
    double saturation_current = 2.5e-13;           // A
    double ideality = 1.2;                         // n
    double series_resistance = 6.2;                // ohm
    double thermal_voltage = kThermalVoltage300K;  // V

    double emission_voltage() const noexcept { return ideality * thermal_voltage; }

    // Throws InvalidParams unless I_s > 0, 1 <= n <= 3, R_s >= 0 and V_T > 0.
    void validate() const;
};

struct BiasPoint
{
    double terminal_voltage = 0.0;  // V
    double bias_current = 0.0;      // A
};

struct IvDerivatives
{
    double di_dv = 0.0;    // S
    double d2i_dv2 = 0.0;  // S/V
};

// Exponent argument v / (n V_T) is clamped at this value to avoid overflow.
inline constexpr double kExponentClamp = 60.0;
// Central-difference step used by iv_derivatives.
inline constexpr double kDerivativeStep = 1e-5;
inline constexpr int kMaxNewtonIterations = 100;

double junction_current(const DiodeModel &m, double v_junction);

// Solves i = I_s (exp((v - i R_s) / (n V_T)) - 1) with a bracketed Newton iteration.
double terminal_current(const DiodeModel &m, double v_terminal, int max_iterations = kMaxNewtonIterations);

IvDerivatives iv_derivatives(const DiodeModel &m, double v_terminal);

// Grid search for the largest d2i/dv2 followed by golden-section refinement.
BiasPoint optimal_bias_static(const DiodeModel &m, double v_min, double v_max, double grid_step = 1e-3);

BiasPoint bias_at_voltage(const DiodeModel &m, double v_terminal);

// Closed-form inverse of the terminal I-V curve.
BiasPoint bias_for_current(const DiodeModel &m, double current);

struct MixingChain
{
    double lna_gain_db = 25.0;  // flat over frequency
    DiodeModel diode{};
    BiasPoint bias{};
    double if_load = 50.0;           // ohm
    double source_impedance = 50.0;  // ohm, used for dBm <-> volt conversion of the tones

    void validate() const;
};

struct ConversionResult
{
    double if_frequency = 0.0;   // Hz
    double if_power_dbm = kDbFloor;
    double dc_current = 0.0;     // A
};

struct MixingOptions
{
    // The time grid resolves diode harmonics up to this order of the highest tone.
    int harmonic_order = 32;
};

/*
 * Memoryless voltage-drive mixer: the LNA-amplified tones are superimposed on
 * the bias voltage at the diode terminal, the current is evaluated sample by
 * sample through terminal_current, and the IF line and DC value are read off
 * the current spectrum. IF power is |I_IF|^2 R_load / 2.
 *
 * Tone frequencies must be whole hertz; the time grid spans one common period
 * (1 / gcd of the frequencies) so every mixing product falls on a bin.
 */
ConversionResult simulate_mixing(const MixingChain &chain, std::span<const ToneSpec> tones, double if_frequency_hz,
                                 const MixingOptions &options = {});

struct TonePair
{
    double f1 = 37.5e9;
    double f2 = 38.5e9;
    // Power of the second tone relative to the first.
    double second_tone_offset_db = -5.0;
};

struct SweepCell
{
    double bias_voltage = 0.0;
    double column_value = 0.0;
    std::optional<ConversionResult> result;  // empty when the cell failed
    std::string error;
};

// Row-major grid: one row per bias voltage.
struct SweepMatrix
{
    std::string column_name;  // CSV header of the swept quantity
    std::vector<double> bias_grid;
    std::vector<double> column_grid;
    std::vector<SweepCell> cells;

    const SweepCell &at(std::size_t row, std::size_t col) const { return cells.at(row * column_grid.size() + col); }
};

SweepMatrix bias_power_sweep(const MixingChain &chain_template, std::span<const double> bias_grid_v,
                             std::span<const double> power_grid_dbm, const TonePair &tones,
                             const MixingOptions &options = {});

SweepMatrix bias_frequency_sweep(const MixingChain &chain_template, std::span<const double> bias_grid_v,
                                 std::span<const double> center_frequencies_hz, double spacing_hz, double power1_dbm,
                                 double power2_dbm, const MixingOptions &options = {});

// Columns: bias_v, <column_name>, if_power_dbm, dc_current_a. Failed cells are written as NaN.
void write_sweep_csv(std::ostream &os, const SweepMatrix &sweep);

} // namespace selfmix
