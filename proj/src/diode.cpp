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

#include "selfmix/diode.hpp"

#include "selfmix/error.hpp"
#include "selfmix/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace selfmix
{

void DiodeModel::validate() const
{
    if (!(saturation_current > 0.0) || !std::isfinite(saturation_current))
        throw Error(ErrorCode::InvalidParams, "saturation current must be positive");
    if (!(ideality >= 1.0 && ideality <= 3.0))
        throw Error(ErrorCode::InvalidParams, "ideality must lie in [1, 3]");
    if (!(series_resistance >= 0.0) || !std::isfinite(series_resistance))
        throw Error(ErrorCode::InvalidParams, "series resistance must be non-negative");
    if (!(thermal_voltage > 0.0) || !std::isfinite(thermal_voltage))
        throw Error(ErrorCode::InvalidParams, "thermal voltage must be positive");
}

void MixingChain::validate() const
{
    diode.validate();
    if (!(if_load > 0.0) || !(source_impedance > 0.0))
        throw Error(ErrorCode::InvalidParams, "IF load and source impedance must be positive");
    if (!std::isfinite(lna_gain_db))
        throw Error(ErrorCode::InvalidParams, "LNA gain must be finite");
    const double expected = terminal_current(diode, bias.terminal_voltage);
    if (std::abs(expected - bias.bias_current) > 1e-9 * std::max(std::abs(expected), diode.saturation_current))
        throw Error(ErrorCode::InvalidParams, "bias current does not match the diode at the bias voltage");
}

double junction_current(const DiodeModel &m, double v_junction)
{
    if (!std::isfinite(v_junction))
        throw Error(ErrorCode::InvalidArgument, "junction voltage must be finite");
    const double x = std::min(v_junction / m.emission_voltage(), kExponentClamp);
    return m.saturation_current * std::expm1(x);
}

double terminal_current(const DiodeModel &m, double v_terminal, int max_iterations)
{
    if (!std::isfinite(v_terminal))
        throw Error(ErrorCode::InvalidArgument, "terminal voltage must be finite");
    const double rs = m.series_resistance;
    if (rs == 0.0)
        return junction_current(m, v_terminal);
    if (v_terminal == 0.0)
        return 0.0;

    // Root of g(vj) = vj + R_s i_j(vj) - v. g is increasing and the root lies between 0 and v.
    const double nvt = m.emission_voltage();
    const double is = m.saturation_current;
    double lo = std::min(v_terminal, 0.0);
    double hi = std::max(v_terminal, 0.0);
    double vj = v_terminal > 0.0 ? hi : lo;
    const double scale = std::max(std::abs(v_terminal), nvt);

    for (int iter = 0; iter < max_iterations; ++iter)
    {
        const double x = vj / nvt;
        const bool clamped = x > kExponentClamp;
        const double e = std::exp(std::min(x, kExponentClamp));
        const double g = vj + rs * is * (e - 1.0) - v_terminal;
        if (g == 0.0)
            return is * std::expm1(std::min(x, kExponentClamp));
        if (g > 0.0)
            hi = vj;
        else
            lo = vj;

        const double dg = 1.0 + (clamped ? 0.0 : rs * is * e / nvt);
        double next = vj - g / dg;
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);

        if (std::abs(next - vj) <= 1e-15 * scale)
        {
            // Residual of the voltage balance vj + i R_s = v, relative to max(|v|, n V_T).
            const double i = is * std::expm1(std::min(next / nvt, kExponentClamp));
            if (std::abs(next + i * rs - v_terminal) <= 1e-12 * scale)
                return i;
        }
        vj = next;
    }
    throw Error(ErrorCode::NoConvergence,
                "terminal current did not converge after " + std::to_string(max_iterations) + " iterations");
}

IvDerivatives iv_derivatives(const DiodeModel &m, double v_terminal)
{
    const double h = kDerivativeStep;
    const double ip = terminal_current(m, v_terminal + h);
    const double i0 = terminal_current(m, v_terminal);
    const double im = terminal_current(m, v_terminal - h);
    return {(ip - im) / (2.0 * h), (ip - 2.0 * i0 + im) / (h * h)};
}

BiasPoint bias_at_voltage(const DiodeModel &m, double v_terminal)
{
    m.validate();
    return {v_terminal, terminal_current(m, v_terminal)};
}

BiasPoint bias_for_current(const DiodeModel &m, double current)
{
    m.validate();
    if (!(current > -m.saturation_current) || !std::isfinite(current))
        throw Error(ErrorCode::InvalidArgument, "bias current must exceed -I_s");
    const double vj = m.emission_voltage() * std::log1p(current / m.saturation_current);
    if (vj / m.emission_voltage() > kExponentClamp)
        throw Error(ErrorCode::InvalidArgument, "bias current beyond the exponent clamp");
    return {vj + current * m.series_resistance, current};
}

BiasPoint optimal_bias_static(const DiodeModel &m, double v_min, double v_max, double grid_step)
{
    m.validate();
    if (!(v_max > v_min) || !(grid_step > 0.0))
        throw Error(ErrorCode::InvalidArgument, "bias search needs v_min < v_max and a positive step");
    if (m.series_resistance == 0.0)
        throw Error(ErrorCode::NoInteriorMaximum, "d2i/dv2 is monotone without series resistance");

    const auto n = static_cast<std::size_t>(std::floor((v_max - v_min) / grid_step + 1e-9)) + 1;
    if (n < 3)
        throw Error(ErrorCode::NoInteriorMaximum, "search range too narrow for an interior maximum");

    auto curvature = [&](double v) { return iv_derivatives(m, v).d2i_dv2; };
    auto grid_v = [&](std::size_t k) { return v_min + double(k) * grid_step; };

    std::size_t best = 0;
    double best_value = curvature(grid_v(0));
    for (std::size_t k = 1; k < n; ++k)
    {
        const double c = curvature(grid_v(k));
        if (c > best_value)
        {
            best_value = c;
            best = k;
        }
    }
    if (best == 0 || best == n - 1)
        throw Error(ErrorCode::NoInteriorMaximum, "largest d2i/dv2 lies on the search boundary");

    // Golden-section search on the bracketing grid cells.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = grid_v(best - 1);
    double b = grid_v(best + 1);
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = curvature(c);
    double fd = curvature(d);
    while (b - a > 1e-9)
    {
        if (fc > fd)
        {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = curvature(c);
        }
        else
        {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = curvature(d);
        }
    }
    const double v = 0.5 * (a + b);
    return {v, terminal_current(m, v)};
}

namespace
{

constexpr std::size_t kMaxMixingSamples = std::size_t(1) << 22;

std::int64_t whole_hertz(double f)
{
    const double r = std::round(f);
    if (!(std::abs(f - r) <= 1e-3) || r <= 0.0 || r > 9.0e15)
        throw Error(ErrorCode::IncommensurateTones, "frequencies must be whole, positive hertz values");
    return static_cast<std::int64_t>(r);
}

bool is_difference_frequency(std::span<const ToneSpec> tones, double f)
{
    for (std::size_t i = 0; i < tones.size(); ++i)
        for (std::size_t j = i + 1; j < tones.size(); ++j)
            if (std::abs(std::abs(tones[i].frequency() - tones[j].frequency()) - f) <= 1.0)
                return true;
    return false;
}

} // namespace

ConversionResult simulate_mixing(const MixingChain &chain, std::span<const ToneSpec> tones, double if_frequency_hz,
                                 const MixingOptions &options)
{
    chain.validate();
    if (tones.empty())
        throw Error(ErrorCode::EmptyToneList, "mixing needs at least one tone");
    if (!(if_frequency_hz > 0.0) || !is_difference_frequency(tones, if_frequency_hz))
        throw Error(ErrorCode::InvalidIfFrequency, "IF must be a difference frequency of the tone set");
    if (options.harmonic_order < 2)
        throw Error(ErrorCode::InvalidArgument, "harmonic order must be at least 2");

    std::int64_t common = whole_hertz(if_frequency_hz);
    double f_max = 0.0;
    for (const auto &t : tones)
    {
        common = std::gcd(common, whole_hertz(t.frequency()));
        f_max = std::max(f_max, t.frequency());
    }
    const double resolution = double(common);
    const double min_rate = 2.0 * double(options.harmonic_order) * f_max;
    const double n_needed = std::ceil(min_rate / resolution);
    if (n_needed > double(kMaxMixingSamples))
        throw Error(ErrorCode::IncommensurateTones, "tone frequencies need a time grid longer than 2^22 samples");
    const auto n = std::max<std::size_t>(16, static_cast<std::size_t>(n_needed));
    const double rate = double(n) * resolution;
    if (!(rate > 2.0 * f_max))
        throw Error(ErrorCode::NyquistViolation, "time grid does not resolve the highest tone");

    const double gain = db_to_amplitude_factor(chain.lna_gain_db);
    std::vector<double> voltage(n, chain.bias.terminal_voltage);
    for (const auto &t : tones)
    {
        if (t.amplitude() == 0.0)
            continue;
        // Integer bin arithmetic keeps the phase exact over the common period.
        const auto bin = static_cast<std::uint64_t>(whole_hertz(t.frequency()) / common);
        for (std::size_t i = 0; i < n; ++i)
        {
            const double cycles = double((bin * i) % n) / double(n);
            voltage[i] += gain * t.amplitude() * std::sin(kTwoPi * cycles + t.phase());
        }
    }

    std::vector<double> current(n);
    for (std::size_t i = 0; i < n; ++i)
        current[i] = terminal_current(chain.diode, voltage[i]);

    const auto spectrum = dft_spectrum(SampledWaveform(rate, std::move(current)));
    const double i_if = spectrum.amplitude(if_frequency_hz);

    ConversionResult r;
    r.if_frequency = if_frequency_hz;
    r.if_power_dbm = watts_to_dbm(0.5 * i_if * i_if * chain.if_load);
    r.dc_current = spectrum.tone(0.0).real();
    return r;
}

namespace
{

void require_grid(std::span<const double> grid, const char *what)
{
    if (grid.empty())
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " grid is empty");
    for (double v : grid)
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidArgument, std::string(what) + " grid has non-finite values");
    const bool up = std::is_sorted(grid.begin(), grid.end(), std::less_equal<>());
    const bool down = std::is_sorted(grid.begin(), grid.end(), std::greater_equal<>());
    if (grid.size() > 1 && !up && !down)
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " grid must be strictly monotone");
}

template <typename ToneFactory>
SweepMatrix run_sweep(const MixingChain &chain_template, std::span<const double> bias_grid,
                      std::span<const double> columns, std::string column_name, ToneFactory make_tones,
                      const MixingOptions &options)
{
    chain_template.diode.validate();
    SweepMatrix out;
    out.column_name = std::move(column_name);
    out.bias_grid.assign(bias_grid.begin(), bias_grid.end());
    out.column_grid.assign(columns.begin(), columns.end());
    out.cells.reserve(bias_grid.size() * columns.size());

    for (double v : bias_grid)
    {
        for (double x : columns)
        {
            SweepCell cell{v, x, std::nullopt, {}};
            try
            {
                MixingChain chain = chain_template;
                chain.bias = bias_at_voltage(chain.diode, v);
                const auto [tones, if_frequency] = make_tones(chain, x);
                cell.result = simulate_mixing(chain, tones, if_frequency, options);
            }
            catch (const Error &e)
            {
                cell.error = e.what();
            }
            out.cells.push_back(std::move(cell));
        }
    }
    return out;
}

} // namespace

SweepMatrix bias_power_sweep(const MixingChain &chain_template, std::span<const double> bias_grid_v,
                             std::span<const double> power_grid_dbm, const TonePair &tones,
                             const MixingOptions &options)
{
    require_grid(bias_grid_v, "bias");
    require_grid(power_grid_dbm, "power");
    if (tones.f1 == tones.f2)
        throw Error(ErrorCode::DegenerateEqualFrequencies, "tone pair needs distinct frequencies");

    return run_sweep(
        chain_template, bias_grid_v, power_grid_dbm, "input_power_dbm",
        [&](const MixingChain &chain, double p1) {
            const double p2 = p1 + tones.second_tone_offset_db;
            std::vector<ToneSpec> t{ToneSpec(tones.f1, tone_amplitude_from_dbm(p1, chain.source_impedance)),
                                    ToneSpec(tones.f2, tone_amplitude_from_dbm(p2, chain.source_impedance))};
            return std::pair{std::move(t), std::abs(tones.f2 - tones.f1)};
        },
        options);
}

SweepMatrix bias_frequency_sweep(const MixingChain &chain_template, std::span<const double> bias_grid_v,
                                 std::span<const double> center_frequencies_hz, double spacing_hz, double power1_dbm,
                                 double power2_dbm, const MixingOptions &options)
{
    require_grid(bias_grid_v, "bias");
    require_grid(center_frequencies_hz, "center frequency");
    if (!(spacing_hz > 0.0))
        throw Error(ErrorCode::InvalidArgument, "tone spacing must be positive");

    return run_sweep(
        chain_template, bias_grid_v, center_frequencies_hz, "center_freq_hz",
        [&](const MixingChain &chain, double f) {
            std::vector<ToneSpec> t{ToneSpec(f, tone_amplitude_from_dbm(power1_dbm, chain.source_impedance)),
                                    ToneSpec(f + spacing_hz, tone_amplitude_from_dbm(power2_dbm, chain.source_impedance))};
            return std::pair{std::move(t), spacing_hz};
        },
        options);
}

void write_sweep_csv(std::ostream &os, const SweepMatrix &sweep)
{
    CsvWriter csv(os);
    csv.header({"bias_v", sweep.column_name, "if_power_dbm", "dc_current_a"});
    const double nan = std::nan("");
    for (const auto &cell : sweep.cells)
    {
        if (cell.result)
            csv.row({cell.bias_voltage, cell.column_value, cell.result->if_power_dbm, cell.result->dc_current});
        else
            csv.row({cell.bias_voltage, cell.column_value, nan, nan});
    }
}

} // namespace selfmix
