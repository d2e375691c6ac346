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

#include "cli.hpp"

#include "selfmix/array.hpp"
#include "selfmix/diode.hpp"
#include "selfmix/error.hpp"
#include "selfmix/io.hpp"
#include "selfmix/link_budget.hpp"
#include "selfmix/pattern.hpp"
#include "selfmix/signal.hpp"
#include "selfmix/units.hpp"
#include "selfmix/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>

namespace selfmix::cli
{

namespace
{

std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(trim(cur));
    return out;
}

} // namespace

double parse_number(const std::string &text, const std::string &what)
{
    const std::string t = trim(text);
    if (t.empty())
        throw ConfigError(what + ": empty value");
    char *end = nullptr;
    errno = 0;
    const double v = std::strtod(t.c_str(), &end);
    if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
        throw ConfigError(what + ": not a finite number: '" + t + "'");
    return v;
}

Config Config::parse(std::istream &in, const std::string &source)
{
    Config c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const std::string where = source + ":" + std::to_string(lineno);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || !std::all_of(key.begin(), key.end(), [](char ch) {
                return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '_';
            }))
            throw ConfigError(where + ": invalid key '" + key + "'");
        if (value.empty())
            throw ConfigError(where + ": empty value for '" + key + "'");
        if (c.values_.count(key))
            throw ConfigError(where + ": duplicate key '" + key + "'");
        c.values_[key] = value;
    }
    return c;
}

Config Config::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    Config c = parse(in, path.string());
    c.base_dir_ = path.parent_path();
    return c;
}

std::vector<std::string> Config::keys() const
{
    std::vector<std::string> k;
    for (const auto &[key, value] : values_)
        k.push_back(key);
    return k;
}

const std::string &Config::raw(const std::string &key) const { return values_.at(key); }

double Config::number(const std::string &key, double fallback) const
{
    return has(key) ? parse_number(raw(key), key) : fallback;
}

std::optional<double> Config::number(const std::string &key) const
{
    if (!has(key))
        return std::nullopt;
    return parse_number(raw(key), key);
}

std::vector<double> Config::list(const std::string &key, std::vector<double> fallback) const
{
    if (!has(key))
        return fallback;
    std::vector<double> out;
    for (const auto &item : split(raw(key), ','))
        out.push_back(parse_number(item, key));
    return out;
}

std::string Config::text(const std::string &key, const std::string &fallback) const
{
    return has(key) ? raw(key) : fallback;
}

bool Config::flag(const std::string &key, bool fallback) const
{
    if (!has(key))
        return fallback;
    const std::string &v = raw(key);
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::filesystem::path Config::path(const std::string &key) const
{
    std::filesystem::path p = raw(key);
    return p.is_relative() ? base_dir_ / p : p;
}

std::string csv_to_json(const std::string &csv, const std::string &subcommand, const std::string &scenario)
{
    nlohmann::ordered_json doc;
    doc["subcommand"] = subcommand;
    doc["scenario"] = scenario;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    doc["columns"] = split(line, ',');
    auto rows = nlohmann::ordered_json::array();
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        auto row = nlohmann::ordered_json::array();
        for (const auto &field : split(line, ','))
        {
            if (field == "nan")
                row.push_back(nullptr);
            else
                row.push_back(std::strtod(field.c_str(), nullptr));
        }
        rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

namespace
{

struct Context
{
    const Config &config;
    std::ostream &log;  // human-readable summaries; silenced by --quiet
};

struct Output
{
    std::string text;
    bool is_csv = true;
    int exit_code = kExitOk;
};

// Construction-phase errors from the library mean the configuration is invalid.
template <class F>
auto configured(F &&f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const Error &e)
    {
        throw ConfigError(e.what());
    }
}

std::vector<double> grid(const Config &c, const std::string &prefix, const std::string &unit, double lo, double hi,
                         double step)
{
    const double a = c.number(prefix + "_min_" + unit, lo);
    const double b = c.number(prefix + "_max_" + unit, hi);
    const double s = c.number(prefix + "_step_" + unit, step);
    if (!(s > 0.0) || b < a)
        throw ConfigError(prefix + " grid: need min <= max and step > 0");
    const auto n = static_cast<long long>(std::floor((b - a) / s + 1e-9));
    if (n > 1000000)
        throw ConfigError(prefix + " grid: more than a million points");
    std::vector<double> out;
    for (long long i = 0; i <= n; ++i)
        out.push_back(a + double(i) * s);
    return out;
}

const std::vector<std::string> kDiodeKeys{"saturation_current_a", "ideality", "series_resistance_ohm",
                                          "thermal_voltage_v"};
const std::vector<std::string> kChainKeys{"lna_gain_db", "if_load_ohm", "source_impedance_ohm", "harmonic_order"};
const std::vector<std::string> kGeometryKeys{"geometry_file", "array_cols", "array_rows", "dx_m", "dy_m",
                                             "rotate_odd_rows"};

DiodeModel diode_from(const Config &c)
{
    DiodeModel m;
    m.saturation_current = c.number("saturation_current_a", m.saturation_current);
    m.ideality = c.number("ideality", m.ideality);
    m.series_resistance = c.number("series_resistance_ohm", m.series_resistance);
    m.thermal_voltage = c.number("thermal_voltage_v", m.thermal_voltage);
    configured([&] { m.validate(); });
    return m;
}

MixingChain chain_from(const Config &c)
{
    MixingChain chain;
    chain.diode = diode_from(c);
    chain.lna_gain_db = c.number("lna_gain_db", chain.lna_gain_db);
    chain.if_load = c.number("if_load_ohm", chain.if_load);
    chain.source_impedance = c.number("source_impedance_ohm", chain.source_impedance);
    return chain;
}

MixingOptions options_from(const Config &c)
{
    MixingOptions o;
    const double h = c.number("harmonic_order", o.harmonic_order);
    if (h < 1 || h != std::floor(h) || h > 1024)
        throw ConfigError("harmonic_order: expected an integer in [1, 1024]");
    o.harmonic_order = int(h);
    return o;
}

std::size_t count_from(const Config &c, const std::string &key, double fallback)
{
    const double v = c.number(key, fallback);
    if (v < 1 || v != std::floor(v) || v > 4096)
        throw ConfigError(key + ": expected a positive integer");
    return std::size_t(v);
}

ArrayGeometry geometry_from(const Config &c)
{
    if (c.has("geometry_file"))
    {
        for (const char *k : {"array_cols", "array_rows", "dx_m", "dy_m", "rotate_odd_rows"})
            if (c.has(k))
                throw ConfigError(std::string("geometry_file cannot be combined with ") + k);
        const auto p = c.path("geometry_file");
        std::ifstream in(p);
        if (!in)
            throw ConfigError("cannot open geometry file " + p.string());
        return configured([&] { return ArrayGeometry::from_table(in); });
    }
    const auto cols = count_from(c, "array_cols", 4);
    const auto rows = count_from(c, "array_rows", 2);
    const double dx = c.number("dx_m", 0.032);
    const double dy = c.number("dy_m", 0.036);
    const bool rot = c.flag("rotate_odd_rows", false);
    return configured([&] { return ArrayGeometry::rectangular(cols, rows, dx, dy, rot); });
}

std::vector<double> theta_grid_rad(const Config &c)
{
    const double max_deg = c.number("theta_max_deg", 90.0);
    const double step_deg = c.number("theta_step_deg", 0.25);
    if (!(max_deg > 0.0 && max_deg <= 90.0) || !(step_deg > 0.0))
        throw ConfigError("theta grid: need 0 < theta_max_deg <= 90 and theta_step_deg > 0");
    return configured([&] { return uniform_theta_grid(deg_to_rad(max_deg), deg_to_rad(step_deg)); });
}

// ---- subcommands --------------------------------------------------------

Output cmd_spectrum(const Context &ctx)
{
    const Config &c = ctx.config;
    const auto freqs = c.list("tone_freqs_hz", {9e3, 10e3});
    const auto amps = c.list("tone_amps_v", {1.0, 0.5});
    const auto phases = c.list("tone_phases_deg", std::vector<double>(freqs.size(), 0.0));
    if (amps.size() != freqs.size() || phases.size() != freqs.size())
        throw ConfigError("tone_freqs_hz, tone_amps_v and tone_phases_deg must have equal length");
    const double rate = c.number("sample_rate_hz", 100e3);
    const double duration = c.number("duration_s", 4e-3);
    const double lo = c.number("filter_low_hz", 0.0);
    const double hi = c.number("filter_high_hz", 5e3);
    std::vector<ToneSpec> tones;
    configured([&] {
        for (std::size_t i = 0; i < freqs.size(); ++i)
            tones.emplace_back(freqs[i], amps[i], deg_to_rad(phases[i]));
    });
    const FilterSpec filter = configured([&] { return lo > 0.0 ? FilterSpec::band_pass(lo, hi) : FilterSpec::low_pass(hi); });

    const auto w = synthesize_waveform(tones, rate, duration);
    const auto sq = square_law_mix(w);
    const auto filtered = apply_filter(sq, filter);
    const auto s_in = dft_spectrum(w);
    const auto s_sq = dft_spectrum(sq);
    const auto s_f = dft_spectrum(filtered);

    std::ostringstream os;
    CsvWriter csv(os);
    csv.header({"frequency_hz", "input_amplitude_v", "squared_amplitude_v2", "filtered_amplitude_v2"});
    for (double f : s_in.frequencies)
        if (f >= 0.0)
            csv.row({f, s_in.amplitude(f), s_sq.amplitude(f), s_f.amplitude(f)});
    ctx.log << "spectrum: " << w.size() << " samples, resolution " << format_number(s_in.resolution) << " Hz\n";
    return {os.str()};
}

Output cmd_diode_iv(const Context &ctx)
{
    const Config &c = ctx.config;
    const DiodeModel m = diode_from(c);
    const auto v = grid(c, "voltage", "v", 0.0, 1.0, 1e-3);
    std::ostringstream os;
    CsvWriter csv(os);
    csv.header({"voltage_v", "current_a", "di_dv_s", "d2i_dv2_s_per_v"});
    for (double x : v)
    {
        const auto d = iv_derivatives(m, x);
        csv.row({x, terminal_current(m, x), d.di_dv, d.d2i_dv2});
    }
    try
    {
        const auto opt = optimal_bias_static(m, v.front(), v.back());
        ctx.log << "static curvature optimum: " << format_number(opt.terminal_voltage) << " V, "
                << format_number(opt.bias_current) << " A\n";
    }
    catch (const Error &e)
    {
        ctx.log << "static curvature optimum: none (" << e.what() << ")\n";
    }
    return {os.str()};
}

Output cmd_bias_sweep(const Context &ctx)
{
    const Config &c = ctx.config;
    const MixingChain chain = chain_from(c);
    const auto options = options_from(c);
    const auto bias = grid(c, "bias", "v", 0.0, 0.8, 0.05);
    const auto power = grid(c, "power", "dbm", -60.0, 0.0, 5.0);
    TonePair tp;
    tp.f1 = c.number("f1_hz", tp.f1);
    tp.f2 = c.number("f2_hz", tp.f2);
    tp.second_tone_offset_db = c.number("second_tone_offset_db", tp.second_tone_offset_db);
    const auto sweep = bias_power_sweep(chain, bias, power, tp, options);
    std::size_t failed = 0;
    for (const auto &cell : sweep.cells)
        failed += cell.result ? 0 : 1;
    std::ostringstream os;
    write_sweep_csv(os, sweep);
    ctx.log << "bias-sweep: " << sweep.cells.size() << " cells, " << failed << " failed\n";
    return {os.str()};
}

Output cmd_freq_sweep(const Context &ctx)
{
    const Config &c = ctx.config;
    const MixingChain chain = chain_from(c);
    const auto options = options_from(c);
    const auto bias = grid(c, "bias", "v", 0.0, 0.8, 0.05);
    const auto centers = grid(c, "center", "hz", 34e9, 38e9, 1e9);
    const double spacing = c.number("spacing_hz", 1e9);
    const double p1 = c.number("power1_dbm", -40.0);
    const double p2 = c.number("power2_dbm", -45.0);
    if (!(spacing > 0.0))
        throw ConfigError("spacing_hz must be positive");
    const auto sweep = bias_frequency_sweep(chain, bias, centers, spacing, p1, p2, options);
    std::size_t failed = 0;
    for (const auto &cell : sweep.cells)
        failed += cell.result ? 0 : 1;
    std::ostringstream os;
    write_sweep_csv(os, sweep);
    ctx.log << "freq-sweep: " << sweep.cells.size() << " cells, " << failed << " failed\n";
    return {os.str()};
}

struct CutSetup
{
    double f_I, f_II, f_rf, phi_cut;
    std::vector<double> theta;
};

CutSetup cut_from(const Config &c)
{
    CutSetup s;
    s.f_I = c.number("f_i_hz", 37.5e9);
    s.f_II = c.number("f_ii_hz", 38.5e9);
    s.f_rf = c.number("f_rf_hz", 38.5e9);
    s.phi_cut = deg_to_rad(c.number("phi_cut_deg", 90.0));
    if (!(s.f_I > 0.0 && s.f_II > 0.0 && s.f_rf > 0.0))
        throw ConfigError("frequencies must be positive");
    s.theta = theta_grid_rad(c);
    return s;
}

Output cmd_array_factor(const Context &ctx)
{
    const Config &c = ctx.config;
    const auto g = geometry_from(c);
    const auto s = cut_from(c);
    std::vector<double> theta_deg;
    for (double t : s.theta)
        theta_deg.push_back(rad_to_deg(t));
    const auto samples = array_factor_cut(g, s.f_I, s.f_II, s.f_rf, rad_to_deg(s.phi_cut), theta_deg);

    PatternGrid p_if{s.theta, s.phi_cut, {}, std::abs(s.f_I - s.f_II)};
    PatternGrid p_rf{s.theta, s.phi_cut, {}, s.f_rf};
    for (const auto &x : samples)
    {
        p_if.gains.push_back(x.af_if);
        p_rf.gains.push_back(x.af_rf);
    }
    const auto bw_if = beamwidth_3db(p_if);
    const auto bw_rf = beamwidth_3db(p_rf);
    ctx.log << "3-dB width: IF " << format_number(rad_to_deg(bw_if.width)) << " deg"
            << (bw_if.crossed ? "" : " (no crossing)") << ", RF " << format_number(rad_to_deg(bw_rf.width)) << " deg"
            << (bw_rf.crossed ? "" : " (no crossing)") << "\n";

    std::ostringstream os;
    write_array_factor_csv(os, samples);
    return {os.str()};
}

PatternGrid element_pattern(const Config &c, const std::string &which, double f, const std::vector<double> &theta,
                            double phi_cut)
{
    const std::string pre = "pattern_" + which + "_";
    if (c.has(pre + "file"))
    {
        for (const char *k : {"kind", "q", "tilt_deg", "width_deg"})
            if (c.has(pre + k))
                throw ConfigError(pre + "file cannot be combined with " + pre + k);
        const auto path = c.path(pre + "file");
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open pattern file " + path.string());
        return configured([&] { return read_pattern_csv(in, phi_cut, f); });
    }
    const std::string kind = c.text(pre + "kind", "isotropic");
    AnalyticPattern p;
    if (kind == "isotropic")
        p = AnalyticPattern::isotropic(f);
    else if (kind == "cos_q")
        p = AnalyticPattern::cos_q(c.number(pre + "q", 1.0), f);
    else if (kind == "two_beam")
        p = AnalyticPattern::two_beam(deg_to_rad(c.number(pre + "tilt_deg", 30.0)),
                                      deg_to_rad(c.number(pre + "width_deg", 40.0)), f);
    else
        throw ConfigError(pre + "kind: expected isotropic, cos_q or two_beam");
    return configured([&] { return sample_pattern(p, theta, phi_cut); });
}

Output cmd_pattern(const Context &ctx)
{
    const Config &c = ctx.config;
    const auto g = geometry_from(c);
    const auto s = cut_from(c);
    const auto c_I = element_pattern(c, "i", s.f_I, s.theta, s.phi_cut);
    const auto c_II = element_pattern(c, "ii", s.f_II, s.theta, s.phi_cut);
    const auto sm = self_mix_pattern(c_I, c_II);
    std::vector<double> af_if, af_rf;
    for (double t : sm.theta)
    {
        const auto d = Direction::from_cut(t, s.phi_cut);
        af_if.push_back(if_array_factor(g, s.f_I, s.f_II, d));
        af_rf.push_back(rf_array_factor(g, s.f_rf, d));
    }
    const auto bw = beamwidth_3db(sm);
    ctx.log << "self-mix pattern 3-dB width " << format_number(rad_to_deg(bw.width)) << " deg"
            << (bw.crossed ? "" : " (no crossing)") << "\n";
    std::ostringstream os;
    write_total_pattern_csv(os, sm, af_if, af_rf);
    return {os.str()};
}

Output cmd_link_budget(const Context &ctx)
{
    const Config &c = ctx.config;
    const auto freqs = c.list("frequencies_hz", {34e9, 38.5e9});
    auto broadcast = [&](const std::string &key, std::vector<double> v) {
        if (v.size() == 1)
            v.assign(freqs.size(), v.front());
        if (v.size() != freqs.size())
            throw ConfigError(key + ": expected one value or one per frequency");
        return v;
    };
    const auto tx = broadcast("tx_power_dbm", c.list("tx_power_dbm", {0.0}));
    std::vector<double> eta_default;
    for (double f : freqs)
        eta_default.push_back(default_total_efficiency_db(f));
    const auto eta = broadcast("eta_tot_db", c.list("eta_tot_db", eta_default));

    std::vector<LinkBudgetParams> params;
    for (std::size_t i = 0; i < freqs.size(); ++i)
    {
        LinkBudgetParams p{tx[i], c.number("tx_gain_db", 25.0), c.number("distance_m", 1.5), freqs[i],
                           c.number("rx_directivity_db", 0.0), eta[i]};
        configured([&] { p.validate(); });
        params.push_back(p);
    }

    ChainSpec chain;
    chain.lna_gain_db = c.number("lna_gain_db", chain.lna_gain_db);
    chain.conversion_gain_db = c.number("conversion_gain_db", chain.conversion_gain_db);
    chain.combiner_gain_db = c.number("combiner_gain_db", chain.combiner_gain_db);
    chain.if_amp_gain_db = c.number("if_amp_gain_db", chain.if_amp_gain_db);
    chain.cable_loss_db = c.number("cable_loss_db", chain.cable_loss_db);
    configured([&] { chain.validate(); });
    const bool with_chain = c.flag("chain_output", false);
    const bool square_law = c.flag("square_law", true);
    if (with_chain && freqs.size() != 2)
        throw ConfigError("chain_output needs exactly two frequencies_hz");

    std::vector<double> rx;
    for (const auto &p : params)
        rx.push_back(friis_rx_power(p));

    std::ostringstream os;
    CsvWriter csv(os);
    if (with_chain)
    {
        const double out = chain_output_power(rx[0], rx[1], chain, square_law);
        csv.header({"frequency_hz", "tx_power_dbm", "eta_tot_db", "rx_power_dbm", "if_output_dbm"});
        for (std::size_t i = 0; i < freqs.size(); ++i)
            csv.row({freqs[i], tx[i], eta[i], rx[i], out});
        ctx.log << "IF output " << format_number(out) << " dBm at "
                << format_number(std::abs(freqs[1] - freqs[0])) << " Hz\n";
    }
    else
    {
        csv.header({"frequency_hz", "tx_power_dbm", "eta_tot_db", "rx_power_dbm"});
        for (std::size_t i = 0; i < freqs.size(); ++i)
            csv.row({freqs[i], tx[i], eta[i], rx[i]});
    }
    return {os.str()};
}

Output cmd_validate(const Context &ctx, bool json)
{
    const double seed = ctx.config.number("seed", 20171119);
    if (seed < 0 || seed != std::floor(seed) || seed > 9007199254740992.0)
        throw ConfigError("seed: expected a non-negative integer");
    const auto report = run_validation(std::uint64_t(seed));
    Output o;
    o.is_csv = false;
    o.exit_code = report.all_passed() ? kExitOk : kExitCheckFailed;
    if (json)
    {
        nlohmann::ordered_json doc;
        doc["subcommand"] = "validate";
        doc["passed"] = report.all_passed();
        auto checks = nlohmann::ordered_json::array();
        for (const auto &ch : report.checks)
            checks.push_back({{"id", ch.id},
                              {"title", ch.title},
                              {"passed", ch.passed},
                              {"seconds", ch.seconds},
                              {"detail", ch.detail}});
        doc["checks"] = std::move(checks);
        auto dev = nlohmann::ordered_json::array();
        for (const auto &d : report.deviations)
            dev.push_back({{"title", d.title}, {"detail", d.detail}});
        doc["known_deviations"] = std::move(dev);
        o.text = doc.dump(2) + "\n";
    }
    else
    {
        std::ostringstream os;
        print_report(os, report);
        o.text = os.str();
    }
    return o;
}

struct Command
{
    std::string name;
    std::string description;
    std::vector<std::string> keys;
    std::string errors;
};

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts)
{
    std::vector<std::string> out;
    for (const auto &p : parts)
        out.insert(out.end(), p.begin(), p.end());
    return out;
}

const std::vector<Command> &commands()
{
    static const std::vector<Command> cmds{
        {"spectrum", "Square-law mixing of a tone set: input, squared and filtered one-sided spectra",
         {"tone_freqs_hz", "tone_amps_v", "tone_phases_deg", "sample_rate_hz", "duration_s", "filter_low_hz",
          "filter_high_hz"},
         "exit 2: bad config, Nyquist or cutoff violation, too few samples; exit 3: computation failure"},
        {"diode-iv", "Diode terminal I-V curve with first and second derivatives",
         concat({kDiodeKeys, {"voltage_min_v", "voltage_max_v", "voltage_step_v"}}),
         "exit 2: bad config or device parameters; exit 3: no convergence"},
        {"bias-sweep", "IF power over a bias voltage x input power grid (failed cells are NaN)",
         concat({kDiodeKeys, kChainKeys,
                 {"bias_min_v", "bias_max_v", "bias_step_v", "power_min_dbm", "power_max_dbm", "power_step_dbm",
                  "f1_hz", "f2_hz", "second_tone_offset_db"}}),
         "exit 2: bad config or grids; exit 3: computation failure outside a cell"},
        {"freq-sweep", "IF power over a bias voltage x center frequency grid (failed cells are NaN)",
         concat({kDiodeKeys, kChainKeys,
                 {"bias_min_v", "bias_max_v", "bias_step_v", "center_min_hz", "center_max_hz", "center_step_hz",
                  "spacing_hz", "power1_dbm", "power2_dbm"}}),
         "exit 2: bad config or grids; exit 3: computation failure outside a cell"},
        {"array-factor", "IF and RF array factors along one planar cut",
         concat({kGeometryKeys, {"f_i_hz", "f_ii_hz", "f_rf_hz", "phi_cut_deg", "theta_max_deg", "theta_step_deg"}}),
         "exit 2: bad config or geometry table; exit 3: computation failure"},
        {"pattern", "Self-mix pattern of two element patterns and its total patterns with the array factors",
         concat({kGeometryKeys,
                 {"f_i_hz", "f_ii_hz", "f_rf_hz", "phi_cut_deg", "theta_max_deg", "theta_step_deg", "pattern_i_file",
                  "pattern_i_kind", "pattern_i_q", "pattern_i_tilt_deg", "pattern_i_width_deg", "pattern_ii_file",
                  "pattern_ii_kind", "pattern_ii_q", "pattern_ii_tilt_deg", "pattern_ii_width_deg"}}),
         "exit 2: bad config or pattern file; exit 3: grid mismatch or computation failure"},
        {"link-budget", "Free-space received power per frequency and optional IF chain output",
         {"frequencies_hz", "tx_power_dbm", "tx_gain_db", "distance_m", "rx_directivity_db", "eta_tot_db",
          "lna_gain_db", "conversion_gain_db", "combiner_gain_db", "if_amp_gain_db", "cable_loss_db", "chain_output",
          "square_law"},
         "exit 2: bad config or parameters; exit 3: computation failure"},
        {"validate", "Run the acceptance checks and print one pass/fail line per check",
         {"seed"},
         "exit 1: at least one check failed; exit 2: bad config; exit 3: computation failure"},
    };
    return cmds;
}

Output dispatch(const std::string &name, const Context &ctx, bool json)
{
    if (name == "spectrum")
        return cmd_spectrum(ctx);
    if (name == "diode-iv")
        return cmd_diode_iv(ctx);
    if (name == "bias-sweep")
        return cmd_bias_sweep(ctx);
    if (name == "freq-sweep")
        return cmd_freq_sweep(ctx);
    if (name == "array-factor")
        return cmd_array_factor(ctx);
    if (name == "pattern")
        return cmd_pattern(ctx);
    if (name == "link-budget")
        return cmd_link_budget(ctx);
    return cmd_validate(ctx, json);
}

class NullBuffer : public std::streambuf
{
protected:
    int overflow(int c) override { return c; }
};

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"selfmix: self-mixing antenna array simulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "selfmix 0.1.0");

    struct Flags
    {
        std::string config, out, format = "csv";
        bool quiet = false;
    };
    std::map<std::string, Flags> flags;
    for (const auto &cmd : commands())
    {
        auto *sub = app.add_subcommand(cmd.name, cmd.description);
        Flags &f = flags[cmd.name];
        sub->add_option("--config", f.config, "Config file of 'key = value' lines")->check(CLI::ExistingFile);
        sub->add_option("--out", f.out, "Output file (default: stdout)");
        sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--quiet", f.quiet, "Suppress the summary on stderr");
        std::string keys = "Config keys:";
        for (const auto &k : cmd.keys)
            keys += "\n  " + k;
        sub->footer(keys + "\nErrors: " + cmd.errors);
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    const CLI::App *chosen = app.get_subcommands().front();
    const Command &cmd = *std::find_if(commands().begin(), commands().end(),
                                       [&](const Command &c) { return c.name == chosen->get_name(); });
    const Flags &f = flags.at(cmd.name);
    NullBuffer null_buf;
    std::ostream null_stream(&null_buf);

    Output result;
    try
    {
        Config config = f.config.empty() ? Config{} : Config::load(f.config);
        std::set<std::string> allowed(cmd.keys.begin(), cmd.keys.end());
        allowed.insert("scenario");
        for (const auto &k : config.keys())
            if (!allowed.count(k))
                throw ConfigError("unknown key '" + k + "' for " + cmd.name);
        const Context ctx{config, f.quiet ? null_stream : err};
        result = dispatch(cmd.name, ctx, f.format == "json");
        if (result.is_csv && f.format == "json")
            result.text = csv_to_json(result.text, cmd.name, config.text("scenario", ""));
    }
    catch (const ConfigError &e)
    {
        err << "selfmix " << cmd.name << ": config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    catch (const std::exception &e)
    {
        err << "selfmix " << cmd.name << ": computation error: " << e.what() << "\n";
        return kExitComputationError;
    }

    if (f.out.empty())
        out << result.text;
    else
    {
        std::ofstream file(f.out, std::ios::binary);
        file << result.text;
        if (!file)
        {
            err << "selfmix " << cmd.name << ": cannot write " << f.out << "\n";
            return kExitConfigError;
        }
    }
    return result.exit_code;
}

} // namespace selfmix::cli
