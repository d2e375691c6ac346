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

#include "selfmix/error.hpp"
#include "selfmix/io.hpp"
#include "selfmix/signal.hpp"
#include "selfmix/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>

namespace selfmix
{

ArrayGeometry::ArrayGeometry(std::vector<Vec2> positions, std::vector<double> rf_phase_offsets_rad)
    : positions_(std::move(positions)), offsets_(std::move(rf_phase_offsets_rad))
{
    if (positions_.empty())
        throw Error(ErrorCode::EmptyInput, "array needs at least one element");
    if (offsets_.empty())
        offsets_.assign(positions_.size(), 0.0);
    if (offsets_.size() != positions_.size())
        throw Error(ErrorCode::InvalidArgument, "one RF phase offset per element expected");
    for (std::size_t i = 0; i < positions_.size(); ++i)
    {
        const auto &p = positions_[i];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(offsets_[i]))
            throw Error(ErrorCode::InvalidArgument, "element " + std::to_string(i) + " is not finite");
        for (std::size_t j = 0; j < i; ++j)
            if (std::hypot(p.x - positions_[j].x, p.y - positions_[j].y) < 1e-12)
                throw Error(ErrorCode::InvalidArgument,
                            "elements " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
}

ArrayGeometry ArrayGeometry::rectangular(std::size_t cols, std::size_t rows, double dx_m, double dy_m,
                                         bool rotate_odd_rows)
{
    if (cols == 0 || rows == 0)
        throw Error(ErrorCode::EmptyInput, "grid needs at least one row and column");
    std::vector<Vec2> pos;
    std::vector<double> offsets;
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
        {
            pos.push_back({double(c) * dx_m, double(r) * dy_m});
            offsets.push_back(rotate_odd_rows && (r % 2 == 1) ? std::numbers::pi : 0.0);
        }
    return ArrayGeometry(std::move(pos), std::move(offsets));
}

ArrayGeometry ArrayGeometry::from_table(std::istream &in)
{
    std::vector<Vec2> pos;
    std::vector<double> offsets;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<double> values;
        std::string token;
        while (fields >> token)
        {
            try
            {
                std::size_t used = 0;
                values.push_back(std::stod(token, &used));
                if (used != token.size())
                    throw std::invalid_argument(token);
            }
            catch (const std::exception &)
            {
                throw Error(ErrorCode::ParseError,
                            "geometry line " + std::to_string(line_no) + ": bad number '" + token + "'");
            }
        }
        if (values.empty())
            continue;
        if (values.size() < 2 || values.size() > 3)
            throw Error(ErrorCode::ParseError,
                        "geometry line " + std::to_string(line_no) + ": expected x_m, y_m[, rf_phase_offset_deg]");
        pos.push_back({values[0], values[1]});
        offsets.push_back(values.size() == 3 ? deg_to_rad(values[2]) : 0.0);
    }
    if (pos.empty())
        throw Error(ErrorCode::EmptyInput, "geometry table has no elements");
    return ArrayGeometry(std::move(pos), std::move(offsets));
}

const Vec2 &ArrayGeometry::position(std::size_t k) const
{
    if (k >= positions_.size())
        throw Error(ErrorCode::IndexOutOfRange, "element index " + std::to_string(k) + " out of range");
    return positions_[k];
}

double ArrayGeometry::rf_phase_offset(std::size_t k) const
{
    if (k >= offsets_.size())
        throw Error(ErrorCode::IndexOutOfRange, "element index " + std::to_string(k) + " out of range");
    return offsets_[k];
}

ArrayGeometry ArrayGeometry::translated(double dx_m, double dy_m) const
{
    auto pos = positions_;
    for (auto &p : pos)
    {
        p.x += dx_m;
        p.y += dy_m;
    }
    return ArrayGeometry(std::move(pos), offsets_);
}

ArrayGeometry ArrayGeometry::without_phase_offsets() const { return ArrayGeometry(positions_); }

Direction::Direction(double theta_rad, double phi_rad)
{
    if (!std::isfinite(theta_rad) || !std::isfinite(phi_rad))
        throw Error(ErrorCode::InvalidArgument, "direction angles must be finite");
    if (theta_rad < 0.0 || theta_rad > std::numbers::pi)
        throw Error(ErrorCode::InvalidArgument, "theta must lie in [0, pi]");
    theta_ = theta_rad;
    phi_ = wrap_phase(phi_rad);
}

Direction Direction::from_cut(double theta_signed_rad, double phi_cut_rad)
{
    if (theta_signed_rad >= 0.0)
        return Direction(theta_signed_rad, phi_cut_rad);
    return Direction(-theta_signed_rad, phi_cut_rad + std::numbers::pi);
}

void TwoToneIllumination::validate() const
{
    if (!(f_I > 0.0) || !(f_II > 0.0) || !std::isfinite(f_I) || !std::isfinite(f_II))
        throw Error(ErrorCode::InvalidArgument, "tone frequencies must be positive");
    if (f_I == f_II)
        throw Error(ErrorCode::DegenerateEqualFrequencies, "illumination needs two distinct frequencies");
    if (!(amplitude_I >= 0.0) || !(amplitude_II >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "tone amplitudes must be non-negative");
}

double path_phase(const ArrayGeometry &g, std::size_t k, const Direction &d, double frequency_hz)
{
    const Vec2 &rk = g.position(k);
    const Vec2 &r0 = g.position(0);
    const double st = std::sin(d.theta());
    const double projection = (rk.x - r0.x) * st * std::cos(d.phi()) + (rk.y - r0.y) * st * std::sin(d.phi());
    return kTwoPi * projection * frequency_hz / kSpeedOfLight;
}

IfSignal element_if_signal(const ArrayGeometry &g, std::size_t k, const TwoToneIllumination &ill)
{
    ill.validate();
    const double offset = g.rf_phase_offset(k);
    const double phase_I = path_phase(g, k, ill.direction, ill.f_I) + offset;
    const double phase_II = path_phase(g, k, ill.direction, ill.f_II) + offset;
    return {std::abs(ill.f_I - ill.f_II), ill.amplitude_I * ill.amplitude_II, phase_I - phase_II};
}

namespace
{

double normalized_phasor_sum(std::span<const double> phases)
{
    std::complex<double> sum{};
    for (double p : phases)
        sum += std::polar(1.0, p);
    return std::abs(sum) / double(phases.size());
}

} // namespace

double if_array_factor(const ArrayGeometry &g, double f_I, double f_II, const Direction &d)
{
    const TwoToneIllumination ill{f_I, f_II, 1.0, 1.0, d};
    std::vector<double> phases(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        phases[k] = element_if_signal(g, k, ill).phase;
    return normalized_phasor_sum(phases);
}

double rf_array_factor(const ArrayGeometry &g, double f_rf, const Direction &d)
{
    if (!(f_rf > 0.0))
        throw Error(ErrorCode::InvalidArgument, "RF frequency must be positive");
    std::vector<double> phases(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
        phases[k] = path_phase(g, k, d, f_rf) + g.rf_phase_offset(k);
    return normalized_phasor_sum(phases);
}

EffectiveSpacing effective_spacing(double element_spacing_m, double delta_f_hz, double f_ref_hz)
{
    if (!(element_spacing_m > 0.0) || !(f_ref_hz > 0.0) || !(delta_f_hz >= 0.0))
        throw Error(ErrorCode::NonPositiveInput, "spacing and reference frequency must be positive, delta_f >= 0");
    return {element_spacing_m * delta_f_hz / kSpeedOfLight, element_spacing_m * f_ref_hz / kSpeedOfLight};
}

CombinerOutput combine_elements(std::span<const Phasor> signals, double combiner_loss_db)
{
    if (signals.empty())
        throw Error(ErrorCode::EmptyInput, "combiner needs at least one input");
    if (!(combiner_loss_db >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "combiner loss must be >= 0 dB");
    const double reference = signals.front().amplitude;
    if (!(reference > 0.0))
        throw Error(ErrorCode::InvalidArgument, "first combiner input must have positive amplitude");

    std::complex<double> sum{};
    for (const auto &s : signals)
        sum += std::polar(s.amplitude, s.phase);
    const double n = double(signals.size());

    CombinerOutput out;
    out.amplitude = std::abs(sum) / std::sqrt(n);
    out.phase = std::arg(sum);
    const double ratio = std::norm(sum) / (n * reference * reference);
    const double gain = power_ratio_to_db(ratio);
    out.power_gain_db = gain <= kDbFloor ? kDbFloor : gain - combiner_loss_db;
    return out;
}

namespace
{

std::vector<ElementGain> resolve_gains(const ArrayGeometry &g, std::span<const ElementGain> gains)
{
    if (gains.empty())
        return std::vector<ElementGain>(g.size());
    if (gains.size() != g.size())
        throw Error(ErrorCode::InvalidArgument, "one pattern gain per element expected");
    for (const auto &e : gains)
        if (!(e.at_f_I >= 0.0) || !(e.at_f_II >= 0.0))
            throw Error(ErrorCode::InvalidArgument, "pattern gains must be non-negative");
    return {gains.begin(), gains.end()};
}

} // namespace

ArrayIfResult predicted_array_if(const ArrayGeometry &g, const TwoToneIllumination &ill,
                                 std::span<const ElementGain> gains)
{
    ill.validate();
    const auto resolved = resolve_gains(g, gains);
    std::complex<double> sum{};
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        const auto sig = element_if_signal(g, k, ill);
        sum += std::polar(resolved[k].at_f_I * resolved[k].at_f_II, sig.phase);
    }
    // Phases are quoted for the IF line at +|f_I - f_II|.
    if (ill.f_I < ill.f_II)
        sum = std::conj(sum);
    return {power_ratio_to_db(std::norm(sum) / double(g.size())), std::arg(sum)};
}

namespace
{

struct TimeGrid
{
    double sample_rate = 0.0;
    double duration = 0.0;
};

TimeGrid array_time_grid(const TwoToneIllumination &ill)
{
    const auto whole = [](double f) {
        const double r = std::round(f);
        if (std::abs(f - r) > 1e-3 || r > 9.0e15)
            throw Error(ErrorCode::IncommensurateTones, "tone frequencies must be whole hertz");
        return static_cast<std::int64_t>(r);
    };
    const double resolution = double(std::gcd(whole(ill.f_I), whole(ill.f_II)));
    const double f_min = std::min(ill.f_I, ill.f_II);
    const double f_max = std::max(ill.f_I, ill.f_II);
    const double periods = std::ceil(4.0 * resolution / f_min);
    const double duration = periods / resolution;
    const double samples = std::floor(4.0 * f_max * duration) + 1.0;
    if (samples > double(std::size_t(1) << 22))
        throw Error(ErrorCode::IncommensurateTones, "tone frequencies need a time grid longer than 2^22 samples");
    return {std::max(samples, 16.0) / duration, duration};
}

std::complex<double> timedomain_if_line(const std::vector<std::vector<ToneSpec>> &elements, const TimeGrid &grid,
                                        double if_frequency)
{
    const auto band = FilterSpec::band_pass(0.5 * if_frequency, 1.5 * if_frequency);
    std::vector<double> sum;
    const double norm = 1.0 / std::sqrt(double(elements.size()));
    for (const auto &tones : elements)
    {
        const auto w = apply_filter(square_law_mix(synthesize_waveform(tones, grid.sample_rate, grid.duration)), band);
        if (sum.empty())
            sum.assign(w.size(), 0.0);
        const auto s = w.samples();
        for (std::size_t i = 0; i < s.size(); ++i)
            sum[i] += norm * s[i];
    }
    return dft_spectrum(SampledWaveform(grid.sample_rate, std::move(sum))).tone(if_frequency);
}

} // namespace

ArrayIfResult simulate_array_timedomain(const ArrayGeometry &g, const TwoToneIllumination &ill,
                                        std::span<const ElementGain> gains)
{
    ill.validate();
    const auto resolved = resolve_gains(g, gains);
    const double if_frequency = std::abs(ill.f_I - ill.f_II);
    if (!(2.0 * std::min(ill.f_I, ill.f_II) > 1.5 * if_frequency))
        throw Error(ErrorCode::InvalidArgument, "second harmonics would fall inside the IF band");
    const TimeGrid grid = array_time_grid(ill);

    std::vector<std::vector<ToneSpec>> elements;
    elements.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k)
    {
        const double offset = g.rf_phase_offset(k);
        elements.push_back({ToneSpec(ill.f_I, resolved[k].at_f_I * ill.amplitude_I,
                                     path_phase(g, k, ill.direction, ill.f_I) + offset),
                            ToneSpec(ill.f_II, resolved[k].at_f_II * ill.amplitude_II,
                                     path_phase(g, k, ill.direction, ill.f_II) + offset)});
    }
    const auto line = timedomain_if_line(elements, grid, if_frequency);
    const auto reference = timedomain_if_line({{ToneSpec(ill.f_I, ill.amplitude_I), ToneSpec(ill.f_II, ill.amplitude_II)}},
                                              grid, if_frequency);
    if (std::abs(reference) == 0.0)
        throw Error(ErrorCode::InvalidArgument, "both tone amplitudes must be non-zero");

    return {amplitude_ratio_to_db(std::abs(line) / std::abs(reference)), wrap_phase(std::arg(line) - std::arg(reference))};
}

std::vector<ArrayFactorSample> array_factor_cut(const ArrayGeometry &g, double f_I, double f_II, double f_rf,
                                                double phi_cut_deg, std::span<const double> theta_deg)
{
    std::vector<ArrayFactorSample> out;
    out.reserve(theta_deg.size());
    const double phi = deg_to_rad(phi_cut_deg);
    for (double t : theta_deg)
    {
        if (!(std::abs(t) <= 90.0))
            throw Error(ErrorCode::InvalidGrid, "cut angles must lie in [-90, 90] degrees");
        const auto d = Direction::from_cut(deg_to_rad(t), phi);
        out.push_back({t, phi_cut_deg, if_array_factor(g, f_I, f_II, d), rf_array_factor(g, f_rf, d)});
    }
    return out;
}

void write_array_factor_csv(std::ostream &os, std::span<const ArrayFactorSample> samples)
{
    CsvWriter csv(os);
    csv.header({"theta_deg", "phi_deg", "af_if", "af_rf", "af_if_db", "af_rf_db"});
    for (const auto &s : samples)
        csv.row({s.theta_deg, s.phi_deg, s.af_if, s.af_rf, amplitude_ratio_to_db(s.af_if),
                 amplitude_ratio_to_db(s.af_rf)});
}

} // namespace selfmix
