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

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

namespace selfmix
{

struct Vec2
{
    double x = 0.0;  // m
    double y = 0.0;  // m
};

// Planar array in the z = 0 plane. Element 0 is the phase reference.
// Each element may carry a fixed RF phase offset (e.g. a physically rotated
// element), applied identically to every RF tone.
class ArrayGeometry
{
public:
    explicit ArrayGeometry(std::vector<Vec2> positions, std::vector<double> rf_phase_offsets_rad = {});

    // cols x rows grid with element (c, r) at (c dx, r dy); `rotate_odd_rows` adds pi to every odd row.
    static ArrayGeometry rectangular(std::size_t cols, std::size_t rows, double dx_m, double dy_m,
                                     bool rotate_odd_rows = false);

    // Text table: one element per line, "x_m, y_m[, rf_phase_offset_deg]". '#' starts a comment;
    // commas and/or whitespace separate fields.
    static ArrayGeometry from_table(std::istream &in);

    std::size_t size() const noexcept { return positions_.size(); }
    const Vec2 &position(std::size_t k) const;
    double rf_phase_offset(std::size_t k) const;
    std::span<const Vec2> positions() const noexcept { return positions_; }

    ArrayGeometry translated(double dx_m, double dy_m) const;
    ArrayGeometry without_phase_offsets() const;

private:
    std::vector<Vec2> positions_;
    std::vector<double> offsets_;
};

// theta from broadside (+z), phi from +x.
class Direction
{
public:
    Direction(double theta_rad, double phi_rad);

    // Signed cut angle in [-pi/2, pi/2] on the plane phi_cut; negative angles map to phi_cut + pi.
    static Direction from_cut(double theta_signed_rad, double phi_cut_rad);

    double theta() const noexcept { return theta_; }
    double phi() const noexcept { return phi_; }

private:
    double theta_;
    double phi_;
};

struct TwoToneIllumination
{
    double f_I = 0.0;  // Hz
    double f_II = 0.0;
    double amplitude_I = 1.0;  // V
    double amplitude_II = 1.0;
    Direction direction{0.0, 0.0};

    void validate() const;
};

struct IfSignal
{
    double if_frequency = 0.0;  // Hz
    double amplitude = 0.0;     // V
    // y_k(t) = amplitude cos(2 pi (f_I - f_II) t + phase)
    double phase = 0.0;
};

// 2 pi (r_k - r_0) . u f / c0, with u the in-plane projection of the arrival direction.
double path_phase(const ArrayGeometry &g, std::size_t k, const Direction &d, double frequency_hz);

IfSignal element_if_signal(const ArrayGeometry &g, std::size_t k, const TwoToneIllumination &ill);

// (1/N) |sum_k exp(j dphi_k)| with the self-mixed (difference-frequency) phases.
double if_array_factor(const ArrayGeometry &g, double f_I, double f_II, const Direction &d);

// Same phasor sum at a single RF, including per-element RF phase offsets.
double rf_array_factor(const ArrayGeometry &g, double f_rf, const Direction &d);

struct EffectiveSpacing
{
    double if_spacing = 0.0;  // d * delta_f / c0
    double rf_spacing = 0.0;  // d * f_ref / c0
};

EffectiveSpacing effective_spacing(double element_spacing_m, double delta_f_hz, double f_ref_hz);

struct Phasor
{
    double amplitude = 0.0;
    double phase = 0.0;
};

struct CombinerOutput
{
    double power_gain_db = 0.0;  // relative to the first input alone
    double amplitude = 0.0;      // |sum| / sqrt(N), before combiner loss
    double phase = 0.0;
};

// Ideal matched N-to-1 combiner with a scalar insertion loss.
CombinerOutput combine_elements(std::span<const Phasor> signals, double combiner_loss_db);

// Linear field-amplitude pattern gain of one element at the two tones.
struct ElementGain
{
    double at_f_I = 1.0;
    double at_f_II = 1.0;
};

struct ArrayIfResult
{
    double if_power_rel_db = 0.0;  // combined IF power relative to one isotropic element at broadside
    double if_phase = 0.0;
};

// Closed form: |sum_k gI_k gII_k exp(j dphi_k)|^2 / N, in dB.
ArrayIfResult predicted_array_if(const ArrayGeometry &g, const TwoToneIllumination &ill,
                                 std::span<const ElementGain> gains = {});

/*
 * End-to-end time-domain check of the IF array response. Every element sees
 * the two tones advanced by its path phase (plus its RF offset) and scaled by
 * its pattern gain; the element waveform is squared, band-passed around the
 * difference frequency, and the elements are summed with 1/sqrt(N). The IF
 * line of the sum is compared with the same pipeline run for a single
 * isotropic element at broadside.
 *
 * Tone frequencies must be whole hertz. An empty `gains` means isotropic elements.
 */
ArrayIfResult simulate_array_timedomain(const ArrayGeometry &g, const TwoToneIllumination &ill,
                                        std::span<const ElementGain> gains = {});

struct ArrayFactorSample
{
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    double af_if = 0.0;
    double af_rf = 0.0;
};

// Evaluates both factors along a phi cut at signed angles `theta_deg`.
std::vector<ArrayFactorSample> array_factor_cut(const ArrayGeometry &g, double f_I, double f_II, double f_rf,
                                                double phi_cut_deg, std::span<const double> theta_deg);

// Columns: theta_deg, phi_deg, af_if, af_rf, af_if_db, af_rf_db (dB = 20 log10).
void write_array_factor_csv(std::ostream &os, std::span<const ArrayFactorSample> samples);

} // namespace selfmix
