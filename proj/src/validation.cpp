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

#include "selfmix/validation.hpp"

#include "selfmix/array.hpp"
#include "selfmix/diode.hpp"
#include "selfmix/error.hpp"
#include "selfmix/link_budget.hpp"
#include "selfmix/pattern.hpp"
#include "selfmix/signal.hpp"
#include "selfmix/units.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace selfmix
{

namespace
{

std::string fmt(const char *f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

CheckResult timed(std::string id, std::string title, double limit_s, const std::function<bool(std::string &)> &body)
{
    CheckResult r;
    r.id = std::move(id);
    r.title = std::move(title);
    r.time_limit_s = limit_s;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        r.passed = body(r.detail);
    }
    catch (const std::exception &e)
    {
        r.passed = false;
        r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0.0 && r.seconds >= limit_s)
    {
        r.passed = false;
        r.detail += "; runtime " + fmt("%.3g", r.seconds) + " s over limit " + fmt("%.3g", limit_s) + " s";
    }
    return r;
}

std::vector<double> degree_grid(double max_abs, double step)
{
    std::vector<double> out;
    for (double t : uniform_theta_grid(deg_to_rad(max_abs), deg_to_rad(step)))
        out.push_back(t);
    return out;
}

PatternGrid af_cut(const std::vector<double> &theta, double phi_cut, const std::function<double(const Direction &)> &af)
{
    PatternGrid p;
    p.theta = theta;
    p.phi_cut = phi_cut;
    p.gains.reserve(theta.size());
    for (double t : theta)
        p.gains.push_back(af(Direction::from_cut(t, phi_cut)));
    return p;
}

// Lobes other than the one holding the pattern maximum nearest broadside.
std::size_t side_lobe_count(const PatternGrid &p, double min_rel, double max_abs)
{
    const auto lobes = find_lobes(p, min_rel, max_abs);
    const double peak = p.peak();
    double main_theta = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.gains.size(); ++i)
        if (p.gains[i] >= peak * (1.0 - 1e-12) && std::abs(p.theta[i]) < std::abs(main_theta))
            main_theta = p.theta[i];
    std::size_t n = 0;
    for (const auto &l : lobes)
        if (std::abs(l.theta - main_theta) > 1e-9)
            ++n;
    return n;
}

double slope_fit(const std::vector<double> &x, const std::vector<double> &y)
{
    const double n = double(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double second_derivative(const DiodeModel &m, double v) { return iv_derivatives(m, v).d2i_dv2; }

} // namespace

bool ValidationReport::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

CheckResult check_limiting_case_gain()
{
    return timed("AC1", "limiting-case array gain", 1.0, [](std::string &detail) {
        const double f_rf = 38.5e9;
        const double lambda = kSpeedOfLight / f_rf;
        const auto theta = degree_grid(90.0, 0.25);
        double min_af = 1.0, worst_gain_err = 0.0;
        for (double d_lambda : {0.5, 1.0, 2.0, 5.0, 10.0})
        {
            const auto g = ArrayGeometry::rectangular(8, 1, d_lambda * lambda, d_lambda * lambda);
            for (double phi : {0.0, std::numbers::pi / 2.0, std::numbers::pi / 4.0})
                for (double t : theta)
                {
                    const auto dir = Direction::from_cut(t, phi);
                    min_af = std::min(min_af, if_array_factor(g, f_rf, f_rf + 1e3, dir));
                    TwoToneIllumination ill{f_rf, f_rf + 1e3, 1.0, 1.0, dir};
                    std::vector<Phasor> ph;
                    for (std::size_t k = 0; k < g.size(); ++k)
                    {
                        const auto s = element_if_signal(g, k, ill);
                        ph.push_back({s.amplitude, s.phase});
                    }
                    const double gain = combine_elements(ph, 0.0).power_gain_db;
                    worst_gain_err = std::max(worst_gain_err, std::abs(gain - 9.03));
                }
        }
        detail = "min AF_IF " + fmt("%.12f", min_af) + ", worst |gain - 9.03 dB| " + fmt("%.3g", worst_gain_err) +
                 " dB";
        return min_af >= 0.999999 && worst_gain_err <= 0.01;
    });
}

CheckResult check_if_vs_rf_beamwidth()
{
    return timed("AC2", "IF vs RF beamwidth", 5.0, [](std::string &detail) {
        const auto g = ArrayGeometry::rectangular(4, 2, 0.032, 0.036);
        const double e_plane = std::numbers::pi / 2.0;
        const auto theta = degree_grid(90.0, 0.25);
        const auto rf = af_cut(theta, e_plane, [&](const Direction &d) { return rf_array_factor(g, 38.5e9, d); });
        const auto ifp =
            af_cut(theta, e_plane, [&](const Direction &d) { return if_array_factor(g, 37.5e9, 38.5e9, d); });
        const double level = 1.0 / std::sqrt(2.0);
        const double lim = deg_to_rad(60.0);
        const std::size_t rf_lobes = side_lobe_count(rf, level, lim);
        const std::size_t if_lobes = side_lobe_count(ifp, 0.0, std::numbers::pi / 2.0);
        const auto bw_rf = beamwidth_3db(rf);
        const auto bw_if = beamwidth_3db(ifp);
        const double ratio = bw_if.width / bw_rf.width;
        detail = "RF lobes above -3 dB: " + std::to_string(rf_lobes) + ", IF side lobes: " + std::to_string(if_lobes) +
                 ", BW_RF " + fmt("%.3f", rad_to_deg(bw_rf.width)) + " deg, BW_IF " +
                 fmt("%.1f", rad_to_deg(bw_if.width)) + " deg" + (bw_if.crossed ? "" : " (no -3 dB crossing)") +
                 ", ratio " + fmt("%.2f", ratio);
        return rf_lobes >= 2 && if_lobes == 0 && ratio > 10.0;
    });
}

CheckResult check_effective_spacing(std::vector<KnownDeviation> *deviations)
{
    return timed("AC3", "effective element spacing", 0.0, [deviations](std::string &detail) {
        const auto s1 = effective_spacing(0.032, 1e9, 38.5e9).if_spacing;
        const auto s2 = effective_spacing(0.032, 2.5e9, 38.5e9).if_spacing;
        // Reference values are quoted to four decimals.
        const bool exact = std::abs(s1 - 0.1067) <= 1e-4 && std::abs(s2 - 0.2668) <= 1e-4;
        const bool rounded = std::abs(s1 - 0.1) <= 0.02 && std::abs(s2 - 0.25) <= 0.02;
        detail = "32 mm: " + fmt("%.6f", s1) + " (1 GHz), " + fmt("%.6f", s2) + " (2.5 GHz)";
        if (deviations)
        {
            const auto t1 = effective_spacing(0.036, 1e9, 38.5e9).if_spacing;
            const auto t2 = effective_spacing(0.036, 2.5e9, 38.5e9).if_spacing;
            deviations->push_back({"effective spacing, 36 mm row pitch",
                                   "computed " + fmt("%.4f", t1) + " (1 GHz) and " + fmt("%.4f", t2) +
                                       " (2.5 GHz); the reference values are 0.15 and 0.275"});
        }
        return exact && rounded;
    });
}

CheckResult check_signal_oracle(std::uint64_t seed)
{
    return timed("AC4", "signal oracle equivalence", 10.0, [seed](std::string &detail) {
        std::mt19937_64 rng(seed);
        constexpr std::size_t n = 512;
        constexpr double res = 1e6;
        const double rate = double(n) * res;
        std::uniform_int_distribution<int> n_tones(1, 5), bin(4, int(n / 4) - 1);
        std::uniform_real_distribution<double> amp(0.1, 1.0), phase(-std::numbers::pi, std::numbers::pi);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial)
        {
            std::vector<int> bins;
            const int count = n_tones(rng);
            while (int(bins.size()) < count)
            {
                const int b = bin(rng);
                if (std::find(bins.begin(), bins.end(), b) == bins.end())
                    bins.push_back(b);
            }
            std::vector<ToneSpec> tones;
            for (int b : bins)
            {
                const double a = amp(rng);
                const double ph = phase(rng);
                tones.emplace_back(b * res, a, ph);
            }
            const auto w = synthesize_waveform(tones, rate, double(n) / rate);
            const auto direct = dft_spectrum(square_law_mix(w));
            const auto conv = spectrum_self_convolution(dft_spectrum(w));
            double peak = 0.0;
            for (const auto &c : direct.coefficients)
                peak = std::max(peak, std::abs(c));
            for (std::size_t i = 0; i < conv.size(); ++i)
            {
                const long long k = std::llround((conv.frequencies[i] - direct.frequencies.front()) / res);
                const std::complex<double> ref =
                    (k >= 0 && k < (long long)direct.size()) ? direct.coefficients[std::size_t(k)] : 0.0;
                worst = std::max(worst, std::abs(conv.coefficients[i] - ref) / peak);
            }
        }
        detail = "worst bin error relative to spectrum peak " + fmt("%.3g", worst);
        return worst <= 1e-9;
    });
}

CheckResult check_array_oracle(std::uint64_t seed)
{
    return timed("AC5", "array oracle equivalence", 30.0, [seed](std::string &detail) {
        std::mt19937_64 rng(seed ^ 0x5eedULL);
        std::uniform_int_distribution<int> n_el(2, 8);
        std::uniform_real_distribution<double> pos(0.0, 0.15), phi_d(0.0, std::numbers::pi);
        const double f_I = 37.5e9, f_II = 38.5e9;
        const auto pat_I = AnalyticPattern::cos_q(1.0, f_I);
        const auto pat_II = AnalyticPattern::cos_q(1.5, f_II);
        const auto theta = degree_grid(90.0, 10.0);
        double worst = 0.0;
        int points = 0;
        for (int geo = 0; geo < 3; ++geo)
        {
            const int n = n_el(rng);
            std::vector<Vec2> p;
            while (int(p.size()) < n)
            {
                const Vec2 c{pos(rng), pos(rng)};
                const bool clear = std::all_of(p.begin(), p.end(), [&](const Vec2 &q) {
                    return std::hypot(q.x - c.x, q.y - c.y) > 2e-3;
                });
                if (clear)
                    p.push_back(c);
            }
            const ArrayGeometry g(p);
            const double phi = phi_d(rng);
            const auto c_sm = self_mix_pattern(sample_pattern(pat_I, theta, phi), sample_pattern(pat_II, theta, phi));
            const auto gI = sample_pattern(pat_I, theta, phi);
            const auto gII = sample_pattern(pat_II, theta, phi);
            const auto total = total_pattern(c_sm, [&](const Direction &d) { return if_array_factor(g, f_I, f_II, d); });
            for (std::size_t i = 0; i < theta.size(); ++i)
            {
                const auto dir = Direction::from_cut(theta[i], phi);
                TwoToneIllumination ill{f_I, f_II, 1.0, 1.0, dir};
                const std::vector<ElementGain> gains(g.size(), ElementGain{gI.gains[i], gII.gains[i]});
                const double sim = simulate_array_timedomain(g, ill, gains).if_power_rel_db;
                // Array gain N times the normalized product, as a power ratio.
                const double ref = power_ratio_to_db(double(g.size()) * total.gains[i] * total.gains[i]);
                // Both routes bottom out at the dB floor near pattern nulls.
                const double diff = (sim <= -150.0 && ref <= -150.0) ? 0.0 : std::abs(sim - ref);
                worst = std::max(worst, diff);
                ++points;
            }
        }
        detail = std::to_string(points) + " points, worst |time domain - analytic| " + fmt("%.3g", worst) + " dB";
        return worst <= 0.05;
    });
}

CheckResult check_row_rotation()
{
    return timed("AC6", "row-rotation compensation", 0.0, [](std::string &detail) {
        const auto plain = ArrayGeometry::rectangular(4, 2, 0.032, 0.036, false);
        const auto rotated = ArrayGeometry::rectangular(4, 2, 0.032, 0.036, true);
        auto combined = [](const ArrayGeometry &g, const TwoToneIllumination &ill) {
            std::vector<Phasor> ph;
            for (std::size_t k = 0; k < g.size(); ++k)
            {
                const auto s = element_if_signal(g, k, ill);
                ph.push_back({s.amplitude, s.phase});
            }
            return combine_elements(ph, 0.0).power_gain_db;
        };
        double worst = 0.0, worst_td = 0.0;
        for (double phi : {0.0, std::numbers::pi / 2.0})
            for (double t : degree_grid(90.0, 5.0))
            {
                TwoToneIllumination ill{37.5e9, 38.5e9, 1.0, 0.5, Direction::from_cut(t, phi)};
                worst = std::max(worst, std::abs(combined(plain, ill) - combined(rotated, ill)));
            }
        for (double t : {0.0, 20.0, -45.0})
        {
            TwoToneIllumination ill{37.5e9, 38.5e9, 1.0, 0.5, Direction::from_cut(deg_to_rad(t), std::numbers::pi / 2)};
            worst_td = std::max(worst_td, std::abs(simulate_array_timedomain(plain, ill).if_power_rel_db -
                                                   simulate_array_timedomain(rotated, ill).if_power_rel_db));
        }
        const double rf_null = amplitude_ratio_to_db(rf_array_factor(rotated, 38.5e9, Direction(0.0, 0.0)));
        detail = "IF change " + fmt("%.3g", worst) + " dB (time domain " + fmt("%.3g", worst_td) +
                 " dB), rotated RF broadside " + fmt("%.1f", rf_null) + " dB";
        return worst < 1e-9 && worst_td < 1e-9 && rf_null < -60.0;
    });
}

CheckResult check_square_law_slope()
{
    return timed("AC7", "diode square-law regime", 0.0, [](std::string &detail) {
        MixingChain chain;
        chain.bias = optimal_bias_static(chain.diode, 0.0, 1.5);
        const TonePair tp;
        std::vector<double> x, y;
        for (double p = -60.0; p <= -45.0 + 1e-9; p += 1.0)
        {
            const std::vector<ToneSpec> tones{ToneSpec(tp.f1, tone_amplitude_from_dbm(p, chain.source_impedance)),
                                              ToneSpec(tp.f2, tone_amplitude_from_dbm(p + tp.second_tone_offset_db,
                                                                                      chain.source_impedance))};
            x.push_back(p);
            y.push_back(simulate_mixing(chain, tones, tp.f2 - tp.f1).if_power_dbm);
        }
        const double slope = slope_fit(x, y);
        detail = "slope " + fmt("%.4f", slope) + " dB/dB at bias " + fmt("%.4f", chain.bias.terminal_voltage) + " V";
        return std::abs(slope - 2.0) <= 0.05;
    });
}

CheckResult check_bias_optimum()
{
    return timed("AC8", "bias optimum existence", 0.0, [](std::string &detail) {
        DiodeModel m;
        m.saturation_current = 1e-13;
        m.ideality = 1.2;
        m.series_resistance = 4.0;
        const auto opt = optimal_bias_static(m, 0.0, 1.5);
        double best_v = 0.0, best = -std::numeric_limits<double>::infinity();
        for (long i = 0; i <= 100000; ++i)
        {
            const double v = 0.4 + 1e-5 * double(i);
            const double d2 = second_derivative(m, v);
            if (d2 > best)
            {
                best = d2;
                best_v = v;
            }
        }
        const bool interior = best_v > 0.4 && best_v < 1.4;
        const bool match = std::abs(opt.terminal_voltage - best_v) <= 1e-3;

        DiodeModel ideal = m;
        ideal.series_resistance = 0.0;
        bool no_max = false;
        try
        {
            (void)optimal_bias_static(ideal, 0.0, 1.5);
        }
        catch (const Error &e)
        {
            no_max = e.code() == ErrorCode::NoInteriorMaximum;
        }

        const auto def = optimal_bias_static(DiodeModel{}, 0.0, 1.5);
        const bool calibrated = std::abs(def.terminal_voltage - 0.73) <= 0.02;
        detail = "Rs=4: " + fmt("%.6f", opt.terminal_voltage) + " V vs scan " + fmt("%.5f", best_v) +
                 " V; Rs=0: " + (no_max ? "NoInteriorMaximum" : "no error") + "; default device (fitted) " +
                 fmt("%.4f", def.terminal_voltage) + " V / " + fmt("%.4g", def.bias_current) + " A";
        return interior && match && no_max && calibrated;
    });
}

CheckResult check_friis_anchors()
{
    return timed("AC9", "Friis anchors", 0.0, [](std::string &detail) {
        const double a = friis_rx_power({0.0, 25.0, 1.5, 34e9, 0.0, -1.8});
        const double b = friis_rx_power({5.0, 25.0, 1.5, 38.5e9, 0.0, -1.4});
        const double c = friis_rx_power({0.0, 25.0, 1.5, 34e9, 0.0, 0.0});
        // lambda = 8.817 mm at 34 GHz; 4 pi R = 18.85 m.
        const double hand = 0.0 + 25.0 + 20.0 * std::log10((299792458.0 / 34e9) / (4.0 * 3.14159265358979 * 1.5));
        detail = "34 GHz: " + fmt("%.3f", a) + " dBm, 38.5 GHz: " + fmt("%.3f", b) + " dBm, lossless: " +
                 fmt("%.3f", c) + " dBm (hand " + fmt("%.3f", hand) + ")";
        return std::abs(a + 43.4) <= 0.1 && std::abs(b + 39.5) <= 0.1 && std::abs(c + 41.6) <= 0.05 &&
               std::abs(c - hand) <= 0.05;
    });
}

CheckResult check_high_power_bias_insensitivity()
{
    return timed("AC10", "high-power bias insensitivity", 0.0, [](std::string &detail) {
        std::vector<double> bias;
        for (int i = 0; i <= 16; ++i)
            bias.push_back(0.05 * i);
        const std::vector<double> powers{-50.0, -20.0, -10.0, 0.0};
        MixingChain chain;
        const auto sweep = bias_power_sweep(chain, bias, powers, TonePair{});
        bool ok = true;
        for (std::size_t c = 0; c < powers.size(); ++c)
        {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (std::size_t r = 0; r < bias.size(); ++r)
            {
                const auto &cell = sweep.at(r, c);
                if (!cell.result)
                    throw Error(ErrorCode::NoConvergence, "sweep cell failed: " + cell.error);
                lo = std::min(lo, cell.result->if_power_dbm);
                hi = std::max(hi, cell.result->if_power_dbm);
            }
            const double spread = hi - lo;
            ok = ok && (powers[c] < -20.0 - 1e-9 ? spread > 10.0 : spread < 3.0);
            detail += (detail.empty() ? "" : ", ") + fmt("%.0f", powers[c]) + " dBm: " + fmt("%.2f", spread) + " dB";
        }
        detail = "IF spread over 0-0.8 V bias at " + detail;
        return ok;
    });
}

ValidationReport run_validation(std::uint64_t seed)
{
    ValidationReport r;
    r.checks.push_back(check_limiting_case_gain());
    r.checks.push_back(check_if_vs_rf_beamwidth());
    r.checks.push_back(check_effective_spacing(&r.deviations));
    r.checks.push_back(check_signal_oracle(seed));
    r.checks.push_back(check_array_oracle(seed));
    r.checks.push_back(check_row_rotation());
    r.checks.push_back(check_square_law_slope());
    r.checks.push_back(check_bias_optimum());
    r.checks.push_back(check_friis_anchors());
    r.checks.push_back(check_high_power_bias_insensitivity());
    r.deviations.push_back({"default diode parameters",
                            "fitted so the static curvature optimum sits at 0.73 V; not measured device data"});
    return r;
}

void print_report(std::ostream &os, const ValidationReport &report)
{
    for (const auto &c : report.checks)
        os << (c.passed ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title << " (" << fmt("%.3f", c.seconds)
           << " s): " << c.detail << '\n';
    for (const auto &d : report.deviations)
        os << "[KNOWN DEVIATION] " << d.title << ": " << d.detail << '\n';
    std::size_t passed = 0;
    for (const auto &c : report.checks)
        passed += c.passed ? 1 : 0;
    os << passed << '/' << report.checks.size() << " checks passed\n";
}

} // namespace selfmix
