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

#include "selfmix/error.hpp"
#include "selfmix/units.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

namespace selfmix
{

void LinkBudgetParams::validate() const
{
    if (!(distance_m > 0.0) || !(frequency_hz > 0.0))
        throw Error(ErrorCode::InvalidParams, "distance and frequency must be positive");
    if (!(total_efficiency_db <= 0.0))
        throw Error(ErrorCode::InvalidParams, "total efficiency must be <= 0 dB");
    for (double v : {tx_power_dbm, tx_gain_db, distance_m, frequency_hz, rx_directivity_db, total_efficiency_db})
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidParams, "link budget parameters must be finite");
}

double friis_rx_power(const LinkBudgetParams &p)
{
    p.validate();
    const double wavelength = kSpeedOfLight / p.frequency_hz;
    const double path = 20.0 * std::log10(wavelength / (4.0 * std::numbers::pi * p.distance_m));
    return p.tx_power_dbm + p.tx_gain_db + path + p.rx_directivity_db + p.total_efficiency_db;
}

double default_total_efficiency_db(double frequency_hz)
{
    static constexpr std::array<std::pair<double, double>, 4> table{{
        {34.0e9, -1.80},
        {36.5e9, -1.28},
        {37.5e9, -1.85},
        {38.5e9, -1.82},
    }};
    if (!(frequency_hz > 0.0))
        throw Error(ErrorCode::InvalidParams, "frequency must be positive");
    if (frequency_hz <= table.front().first)
        return table.front().second;
    for (std::size_t i = 1; i < table.size(); ++i)
        if (frequency_hz <= table[i].first)
        {
            const auto [f0, e0] = table[i - 1];
            const auto [f1, e1] = table[i];
            return e0 + (e1 - e0) * (frequency_hz - f0) / (f1 - f0);
        }
    return table.back().second;
}

void ChainSpec::validate() const
{
    for (double v : {lna_gain_db, conversion_gain_db, combiner_gain_db, if_amp_gain_db, cable_loss_db})
        if (!std::isfinite(v))
            throw Error(ErrorCode::InvalidParams, "chain gains must be finite");
}

double chain_output_power(double tone1_dbm, double tone2_dbm, const ChainSpec &chain, bool square_law)
{
    chain.validate();
    if (std::isnan(tone1_dbm) || std::isnan(tone2_dbm) || tone1_dbm == INFINITY || tone2_dbm == INFINITY)
        throw Error(ErrorCode::InvalidParams, "tone powers must be finite or -inf");
    if (tone1_dbm == -INFINITY || tone2_dbm == -INFINITY)
        return kDbFloor;

    const double p1 = tone1_dbm + chain.lna_gain_db;
    const double p2 = tone2_dbm + chain.lna_gain_db;
    const double mixed = square_law ? p1 + p2 + chain.conversion_gain_db : std::min(p1, p2) + chain.conversion_gain_db;
    const double out = mixed + chain.combiner_gain_db + chain.if_amp_gain_db - chain.cable_loss_db;
    return std::max(out, kDbFloor);
}

namespace
{

ConversionResult simulate_pair(const MixingChain &chain, const TonePair &tones, double tone1_dbm,
                               const MixingOptions &options)
{
    const double p2 = tone1_dbm + tones.second_tone_offset_db;
    const std::array<ToneSpec, 2> t{ToneSpec(tones.f1, tone_amplitude_from_dbm(tone1_dbm, chain.source_impedance)),
                                    ToneSpec(tones.f2, tone_amplitude_from_dbm(p2, chain.source_impedance))};
    return simulate_mixing(chain, t, std::abs(tones.f2 - tones.f1), options);
}

} // namespace

double conversion_constant_db(const MixingChain &chain, const TonePair &tones, double tone1_dbm,
                              const MixingOptions &options)
{
    const auto r = simulate_pair(chain, tones, tone1_dbm, options);
    const double p1 = tone1_dbm + chain.lna_gain_db;
    const double p2 = tone1_dbm + tones.second_tone_offset_db + chain.lna_gain_db;
    return r.if_power_dbm - p1 - p2;
}

ConversionCalibration calibrate_conversion(const MixingChain &chain_template, const TonePair &tones,
                                           double tone1_dbm, double target_gain_db, const MixingOptions &options)
{
    chain_template.diode.validate();
    const double target = tone1_dbm + target_gain_db;
    MixingChain chain = chain_template;
    const auto if_power_at = [&](double v) {
        chain.bias = bias_at_voltage(chain.diode, v);
        return simulate_pair(chain, tones, tone1_dbm, options).if_power_dbm;
    };

    // IF power rises with bias from zero up to the curvature optimum.
    double lo = 0.0;
    double hi = chain.diode.series_resistance > 0.0 ? optimal_bias_static(chain.diode, 0.0, 2.0).terminal_voltage : 1.0;
    if (!(if_power_at(lo) <= target && if_power_at(hi) >= target))
        throw Error(ErrorCode::NoConvergence, "target conversion gain is not reachable between 0 V and the optimum");
    for (int i = 0; i < 60 && hi - lo > 1e-9; ++i)
    {
        const double mid = 0.5 * (lo + hi);
        (if_power_at(mid) < target ? lo : hi) = mid;
    }

    ConversionCalibration cal;
    chain.bias = bias_at_voltage(chain.diode, 0.5 * (lo + hi));
    cal.bias = chain.bias;
    cal.if_power_dbm = simulate_pair(chain, tones, tone1_dbm, options).if_power_dbm;
    cal.conversion_constant_db = conversion_constant_db(chain, tones, tone1_dbm, options);
    return cal;
}

} // namespace selfmix
