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

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace selfmix
{

// One sinusoid a * sin(2 pi f t + phase). Phase is stored wrapped to [-pi, pi).
class ToneSpec
{
public:
    ToneSpec(double frequency_hz, double amplitude_v, double phase_rad = 0.0);

    double frequency() const noexcept { return frequency_; }
    double amplitude() const noexcept { return amplitude_; }
    double phase() const noexcept { return phase_; }

private:
    double frequency_;
    double amplitude_;
    double phase_;
};

// Uniformly sampled real voltage. `bandwidth` is an upper bound on the frequency
// content (0 when unknown); square_law_mix uses it for its Nyquist check.
class SampledWaveform
{
public:
    SampledWaveform(double sample_rate_hz, std::vector<double> samples, double start_time_s = 0.0,
                    double bandwidth_hz = 0.0);

    double sample_rate() const noexcept { return sample_rate_; }
    double start_time() const noexcept { return start_time_; }
    double bandwidth() const noexcept { return bandwidth_; }
    std::span<const double> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    double time_at(std::size_t i) const noexcept { return start_time_ + double(i) / sample_rate_; }

private:
    double sample_rate_;
    std::vector<double> samples_;
    double start_time_;
    double bandwidth_;
};

/*
 * Discrete spectrum over signed, uniformly spaced bin frequencies.
 *
 * `coefficients` hold the two-sided DFT values X[k] / N, so a real tone
 * A cos(2 pi f t + p) sitting on bin k shows up as (A/2) e^{+jp} at +f and
 * (A/2) e^{-jp} at -f. The accessors below convert to the one-sided amplitude
 * convention, in which that tone reads back as magnitude A (DC reads as its
 * value, and the Nyquist bin of an even-length transform is not doubled).
 *
 * Tones that do not fall on a bin leak into their neighbours; no window is
 * applied.
 */
struct Spectrum
{
    double resolution = 0.0;
    std::vector<double> frequencies;
    std::vector<std::complex<double>> coefficients;

    std::size_t size() const noexcept { return coefficients.size(); }

    // Index of the bin nearest to `frequency_hz`; throws InvalidArgument when outside the bin range.
    std::size_t bin_index(double frequency_hz) const;

    // One-sided complex amplitude a with x(t) = Re{a e^{j 2 pi f t}}.
    std::complex<double> tone(double frequency_hz) const;
    double amplitude(double frequency_hz) const { return std::abs(tone(frequency_hz)); }

    // Mean square of the underlying signal (Parseval): sum |c_k|^2.
    double mean_power() const noexcept;
};

struct FilterSpec
{
    enum class Kind
    {
        LowPass,
        BandPass,
    };

    Kind kind = Kind::LowPass;
    double cutoff_low = 0.0;
    double cutoff_high = 0.0;

    static FilterSpec low_pass(double cutoff_hz);
    static FilterSpec band_pass(double low_hz, double high_hz);

    bool passes(double abs_frequency_hz) const noexcept;
};

struct TwoToneProducts
{
    double dc = 0.0;
    double if_amplitude = 0.0;
    double if_frequency = 0.0;
    // Phase of the IF cosine at |f1 - f2|: y_IF(t) = if_amplitude * cos(2 pi if_frequency t + if_phase).
    double if_phase = 0.0;
};

// samples[i] = sum_k a_k sin(2 pi f_k t_i + p_k), t_i = start + i / rate, round(duration * rate) samples.
SampledWaveform synthesize_waveform(std::span<const ToneSpec> tones, double sample_rate_hz, double duration_s,
                                    double start_time_s = 0.0);

SampledWaveform square_law_mix(const SampledWaveform &w);

// Ideal brick-wall filter applied by masking DFT bins.
SampledWaveform apply_filter(const SampledWaveform &w, const FilterSpec &filter);

Spectrum dft_spectrum(const SampledWaveform &w);

// Linear convolution of the two-sided spectrum with itself; same resolution, twice the bin range.
Spectrum spectrum_self_convolution(const Spectrum &s);

// Closed-form low-pass content of (t1 + t2)^2.
TwoToneProducts analytic_two_tone_products(const ToneSpec &t1, const ToneSpec &t2);

} // namespace selfmix
