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

#include "selfmix/signal.hpp"

#include "fft.hpp"
#include "selfmix/error.hpp"
#include "selfmix/units.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace selfmix
{

namespace
{

constexpr std::size_t kMinSamples = 16;

void require_finite(double v, const char *what)
{
    if (!std::isfinite(v))
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be finite");
}

} // namespace

ToneSpec::ToneSpec(double frequency_hz, double amplitude_v, double phase_rad)
{
    require_finite(frequency_hz, "tone frequency");
    require_finite(amplitude_v, "tone amplitude");
    require_finite(phase_rad, "tone phase");
    if (frequency_hz <= 0.0)
        throw Error(ErrorCode::InvalidArgument, "tone frequency must be positive");
    if (amplitude_v < 0.0)
        throw Error(ErrorCode::InvalidArgument, "tone amplitude must be non-negative");
    frequency_ = frequency_hz;
    amplitude_ = amplitude_v;
    phase_ = wrap_phase(phase_rad);
}

SampledWaveform::SampledWaveform(double sample_rate_hz, std::vector<double> samples, double start_time_s,
                                 double bandwidth_hz)
    : sample_rate_(sample_rate_hz), samples_(std::move(samples)), start_time_(start_time_s), bandwidth_(bandwidth_hz)
{
    if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
        throw Error(ErrorCode::InvalidArgument, "sample rate must be positive");
    require_finite(start_time_s, "start time");
    if (!(bandwidth_hz >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "bandwidth must be non-negative");
}

std::size_t Spectrum::bin_index(double frequency_hz) const
{
    if (coefficients.empty() || !(resolution > 0.0))
        throw Error(ErrorCode::InvalidArgument, "empty spectrum");
    const double pos = (frequency_hz - frequencies.front()) / resolution;
    const double k = std::round(pos);
    if (k < 0.0 || k >= double(coefficients.size()))
        throw Error(ErrorCode::InvalidArgument, "frequency " + std::to_string(frequency_hz) + " Hz outside spectrum");
    return std::size_t(k);
}

std::complex<double> Spectrum::tone(double frequency_hz) const
{
    const double f = std::abs(frequency_hz);
    const std::size_t k = bin_index(f);
    if (std::abs(frequencies[k]) < 0.5 * resolution)
        return coefficients[k];
    std::complex<double> a = coefficients[k];
    const double mirror = (-frequencies[k] - frequencies.front()) / resolution;
    if (mirror >= -0.5 && mirror < double(coefficients.size()) - 0.5)
        a += std::conj(coefficients[std::size_t(std::round(mirror))]);
    return a;
}

double Spectrum::mean_power() const noexcept
{
    double sum = 0.0;
    for (const auto &c : coefficients)
        sum += std::norm(c);
    return sum;
}

FilterSpec FilterSpec::low_pass(double cutoff_hz)
{
    if (!(cutoff_hz > 0.0) || !std::isfinite(cutoff_hz))
        throw Error(ErrorCode::InvalidArgument, "low-pass cutoff must be positive");
    return FilterSpec{Kind::LowPass, 0.0, cutoff_hz};
}

FilterSpec FilterSpec::band_pass(double low_hz, double high_hz)
{
    if (!(low_hz >= 0.0) || !(high_hz > low_hz) || !std::isfinite(high_hz))
        throw Error(ErrorCode::InvalidArgument, "band-pass needs 0 <= low < high");
    return FilterSpec{Kind::BandPass, low_hz, high_hz};
}

bool FilterSpec::passes(double abs_frequency_hz) const noexcept
{
    if (abs_frequency_hz > cutoff_high)
        return false;
    return kind == Kind::LowPass || abs_frequency_hz >= cutoff_low;
}

SampledWaveform synthesize_waveform(std::span<const ToneSpec> tones, double sample_rate_hz, double duration_s,
                                    double start_time_s)
{
    if (tones.empty())
        throw Error(ErrorCode::EmptyToneList, "no tones to synthesize");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw Error(ErrorCode::InvalidArgument, "duration must be positive");

    double f_max = 0.0;
    double f_min = tones.front().frequency();
    for (const auto &t : tones)
    {
        f_max = std::max(f_max, t.frequency());
        f_min = std::min(f_min, t.frequency());
    }
    if (!(sample_rate_hz > 2.0 * f_max))
        throw Error(ErrorCode::NyquistViolation, "sample rate " + std::to_string(sample_rate_hz) +
                                                     " Hz not above twice the highest tone " + std::to_string(f_max));
    if (duration_s * f_min < 4.0 * (1.0 - 1e-12))
        throw Error(ErrorCode::InvalidArgument, "duration must cover at least 4 periods of the slowest tone");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n < kMinSamples)
        throw Error(ErrorCode::TooFewSamples, "waveform needs at least 16 samples");

    std::vector<double> samples(n, 0.0);
    for (const auto &t : tones)
    {
        if (t.amplitude() == 0.0)
            continue;
        // Reduce the cycle count before scaling by 2 pi to keep the argument small.
        const double start_cycles = t.frequency() * start_time_s;
        const double cycles_per_sample = t.frequency() / sample_rate_hz;
        for (std::size_t i = 0; i < n; ++i)
        {
            double cycles = start_cycles + cycles_per_sample * double(i);
            cycles -= std::floor(cycles);
            samples[i] += t.amplitude() * std::sin(kTwoPi * cycles + t.phase());
        }
    }
    return SampledWaveform(sample_rate_hz, std::move(samples), start_time_s, f_max);
}

SampledWaveform square_law_mix(const SampledWaveform &w)
{
    if (w.bandwidth() > 0.0 && !(w.sample_rate() > 4.0 * w.bandwidth()))
        throw Error(ErrorCode::NyquistViolation,
                    "squaring needs a sample rate above 4x the input bandwidth " + std::to_string(w.bandwidth()));
    std::vector<double> out(w.samples().begin(), w.samples().end());
    for (auto &v : out)
        v *= v;
    return SampledWaveform(w.sample_rate(), std::move(out), w.start_time(), 2.0 * w.bandwidth());
}

SampledWaveform apply_filter(const SampledWaveform &w, const FilterSpec &filter)
{
    const double nyquist = 0.5 * w.sample_rate();
    if (filter.cutoff_high > nyquist)
        throw Error(ErrorCode::CutoffAboveNyquist, "cutoff " + std::to_string(filter.cutoff_high) +
                                                       " Hz above Nyquist " + std::to_string(nyquist));
    if (w.size() == 0)
        return w;

    auto half = detail::forward_real(w.samples());
    const double resolution = w.sample_rate() / double(w.size());
    for (std::size_t k = 0; k < half.size(); ++k)
        if (!filter.passes(double(k) * resolution))
            half[k] = 0.0;

    double bandwidth = filter.cutoff_high;
    if (w.bandwidth() > 0.0)
        bandwidth = std::min(bandwidth, w.bandwidth());
    return SampledWaveform(w.sample_rate(), detail::inverse_real(half, w.size()), w.start_time(), bandwidth);
}

Spectrum dft_spectrum(const SampledWaveform &w)
{
    const std::size_t n = w.size();
    if (n < kMinSamples)
        throw Error(ErrorCode::TooFewSamples, "spectrum needs at least 16 samples");

    const auto half = detail::forward_real(w.samples());
    const auto k_min = -static_cast<long long>((n - 1) / 2);
    const auto k_max = static_cast<long long>(n / 2);

    Spectrum s;
    s.resolution = w.sample_rate() / double(n);
    s.frequencies.reserve(n);
    s.coefficients.reserve(n);
    for (long long k = k_min; k <= k_max; ++k)
    {
        const auto idx = static_cast<std::size_t>(k < 0 ? -k : k);
        const std::complex<double> x = k < 0 ? std::conj(half[idx]) : half[idx];
        s.frequencies.push_back(double(k) * s.resolution);
        s.coefficients.push_back(x / double(n));
    }
    return s;
}

Spectrum spectrum_self_convolution(const Spectrum &s)
{
    const std::size_t m = s.size();
    if (m == 0 || s.frequencies.size() != m || !(s.resolution > 0.0))
        throw Error(ErrorCode::NonUniformBins, "spectrum is empty or inconsistent");
    const double tol = 1e-9 * s.resolution;
    for (std::size_t k = 1; k < m; ++k)
        if (std::abs(s.frequencies[k] - s.frequencies[k - 1] - s.resolution) > tol)
            throw Error(ErrorCode::NonUniformBins, "bin " + std::to_string(k) + " is not on the uniform grid");

    Spectrum out;
    out.resolution = s.resolution;
    out.coefficients.assign(2 * m - 1, std::complex<double>{});
    out.frequencies.resize(2 * m - 1);
    const double f0 = 2.0 * s.frequencies.front();
    for (std::size_t k = 0; k < out.frequencies.size(); ++k)
        out.frequencies[k] = f0 + double(k) * s.resolution;

    for (std::size_t i = 0; i < m; ++i)
    {
        const auto ci = s.coefficients[i];
        if (ci == std::complex<double>{})
            continue;
        for (std::size_t j = 0; j < m; ++j)
            out.coefficients[i + j] += ci * s.coefficients[j];
    }
    return out;
}

TwoToneProducts analytic_two_tone_products(const ToneSpec &t1, const ToneSpec &t2)
{
    if (t1.frequency() == t2.frequency())
        throw Error(ErrorCode::DegenerateEqualFrequencies, "two-tone products need distinct frequencies");

    // 2 sin a sin b = cos(a - b) - cos(a + b); the low-pass keeps only the difference term.
    TwoToneProducts p;
    p.dc = 0.5 * (t1.amplitude() * t1.amplitude() + t2.amplitude() * t2.amplitude());
    p.if_amplitude = t1.amplitude() * t2.amplitude();
    p.if_frequency = std::abs(t1.frequency() - t2.frequency());
    p.if_phase = t1.frequency() > t2.frequency() ? wrap_phase(t1.phase() - t2.phase())
                                                 : wrap_phase(t2.phase() - t1.phase());
    return p;
}

} // namespace selfmix
