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

#include "selfmix/diode.hpp"

namespace selfmix
{

struct LinkBudgetParams
{
    double tx_power_dbm = 0.0;
    double tx_gain_db = 0.0;
    double distance_m = 1.0;
    double frequency_hz = 1e9;
    double rx_directivity_db = 0.0;
    double total_efficiency_db = 0.0;  // <= 0

    void validate() const;
};

// P_Tx + G_Tx + 20 log10(lambda / (4 pi R)) + D_Rx + eta_tot.
double friis_rx_power(const LinkBudgetParams &p);

// Receive-antenna total efficiency used when a config gives none. Piecewise
// linear through the values back-solved from the reference measurement setup
// (34, 36.5, 37.5 and 38.5 GHz), held constant outside that span.
double default_total_efficiency_db(double frequency_hz);

// IF power of the square-law chain for the reference tones: P_IF = P1' + P2' + K
// with P' the tone powers after the LNA. K is dB relative to 1 mW.
inline constexpr double kDefaultConversionConstantDb = -5.0;

struct ChainSpec
{
    double lna_gain_db = 25.0;
    double conversion_gain_db = kDefaultConversionConstantDb;
    double combiner_gain_db = 0.0;  // 10 log10(N) - loss
    double if_amp_gain_db = 0.0;
    double cable_loss_db = 0.0;

    void validate() const;
};

/*
 * IF output power of the receive chain. With `square_law` the IF tracks the
 * sum of both amplified tone powers (1 dB/dB in each); otherwise the stronger
 * tone is treated as an LO and the IF tracks the weaker tone alone. A tone at
 * -inf dBm gives the output floor.
 */
double chain_output_power(double tone1_dbm, double tone2_dbm, const ChainSpec &chain, bool square_law = true);

// K = P_IF - P1' - P2' measured with simulate_mixing at the chain's bias point.
double conversion_constant_db(const MixingChain &chain, const TonePair &tones, double tone1_dbm,
                              const MixingOptions &options = {});

struct ConversionCalibration
{
    BiasPoint bias;
    double conversion_constant_db = 0.0;
    double if_power_dbm = 0.0;
};

/*
 * Finds the forward bias (below the static curvature optimum) at which the
 * simulated chain has the requested overall gain P_IF - P1 for the given
 * two-tone input, and reports the conversion constant there. The default
 * target of 0 dB describes an LNA that just cancels the mixer conversion loss.
 */
ConversionCalibration calibrate_conversion(const MixingChain &chain_template, const TonePair &tones,
                                           double tone1_dbm, double target_gain_db = 0.0,
                                           const MixingOptions &options = {});

} // namespace selfmix
