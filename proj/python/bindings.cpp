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
#include "selfmix/diode.hpp"
#include "selfmix/error.hpp"
#include "selfmix/link_budget.hpp"
#include "selfmix/pattern.hpp"
#include "selfmix/signal.hpp"
#include "selfmix/units.hpp"
#include "selfmix/validation.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <limits>

namespace py = pybind11;
using namespace selfmix;

namespace
{

py::array_t<double> to_array(const std::vector<double> &v)
{
    py::array_t<double> a(py::ssize_t(v.size()));
    std::copy(v.begin(), v.end(), a.mutable_data());
    return a;
}

std::vector<ToneSpec> tones_from(const std::vector<double> &f, const std::vector<double> &a,
                                 const std::vector<double> &p)
{
    if (f.size() != a.size() || (!p.empty() && p.size() != f.size()))
        throw Error(ErrorCode::InvalidArgument, "frequency, amplitude and phase lists differ in length");
    std::vector<ToneSpec> t;
    for (std::size_t i = 0; i < f.size(); ++i)
        t.emplace_back(f[i], a[i], p.empty() ? 0.0 : p[i]);
    return t;
}

py::dict spectrum_dict(const Spectrum &s)
{
    py::array_t<std::complex<double>> c(py::ssize_t(s.coefficients.size()));
    std::copy(s.coefficients.begin(), s.coefficients.end(), c.mutable_data());
    py::dict d;
    d["frequency_hz"] = to_array(s.frequencies);
    d["coefficients"] = c;
    d["resolution_hz"] = s.resolution;
    return d;
}

py::array_t<double> sweep_matrix(const SweepMatrix &s)
{
    py::array_t<double> out({s.bias_grid.size(), s.column_grid.size()});
    auto m = out.mutable_unchecked<2>();
    for (std::size_t r = 0; r < s.bias_grid.size(); ++r)
        for (std::size_t c = 0; c < s.column_grid.size(); ++c)
        {
            const auto &cell = s.at(r, c);
            m(r, c) = cell.result ? cell.result->if_power_dbm : std::numeric_limits<double>::quiet_NaN();
        }
    return out;
}

MixingChain make_chain(const DiodeModel &diode, double bias_v, double lna_gain_db, double if_load_ohm)
{
    MixingChain c;
    c.diode = diode;
    c.bias = bias_at_voltage(diode, bias_v);
    c.lna_gain_db = lna_gain_db;
    c.if_load = if_load_ohm;
    return c;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Self-mixing antenna array simulation";

    static py::exception<Error> error_type(m, "SelfmixError", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const Error &e)
        {
            py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
            exc.attr("code") = to_string(e.code());
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    // signal
    m.def(
        "synthesize",
        [](const std::vector<double> &f, const std::vector<double> &a, double rate, double duration,
           const std::vector<double> &phases) {
            const auto w = synthesize_waveform(tones_from(f, a, phases), rate, duration);
            return to_array({w.samples().begin(), w.samples().end()});
        },
        py::arg("frequencies_hz"), py::arg("amplitudes_v"), py::arg("sample_rate_hz"), py::arg("duration_s"),
        py::arg("phases_rad") = std::vector<double>{});
    m.def(
        "square_law_spectrum",
        [](const std::vector<double> &f, const std::vector<double> &a, double rate, double duration,
           double cutoff_hz) {
            auto y = square_law_mix(synthesize_waveform(tones_from(f, a, {}), rate, duration));
            if (cutoff_hz > 0.0)
                y = apply_filter(y, FilterSpec::low_pass(cutoff_hz));
            return spectrum_dict(dft_spectrum(y));
        },
        py::arg("frequencies_hz"), py::arg("amplitudes_v"), py::arg("sample_rate_hz"), py::arg("duration_s"),
        py::arg("cutoff_hz") = 0.0, "Spectrum of the squared (optionally low-passed) tone sum");
    m.def(
        "two_tone_products",
        [](double f1, double a1, double f2, double a2) {
            const auto p = analytic_two_tone_products(ToneSpec(f1, a1), ToneSpec(f2, a2));
            py::dict d;
            d["dc"] = p.dc;
            d["if_amplitude"] = p.if_amplitude;
            d["if_frequency"] = p.if_frequency;
            d["if_phase"] = p.if_phase;
            return d;
        },
        py::arg("f1_hz"), py::arg("a1_v"), py::arg("f2_hz"), py::arg("a2_v"));

    // diode
    py::class_<DiodeModel>(m, "DiodeModel")
        .def(py::init([](double is, double n, double rs, double vt) { return DiodeModel{is, n, rs, vt}; }),
             py::arg("saturation_current") = DiodeModel{}.saturation_current,
             py::arg("ideality") = DiodeModel{}.ideality,
             py::arg("series_resistance") = DiodeModel{}.series_resistance,
             py::arg("thermal_voltage") = DiodeModel{}.thermal_voltage)
        .def_readwrite("saturation_current", &DiodeModel::saturation_current)
        .def_readwrite("ideality", &DiodeModel::ideality)
        .def_readwrite("series_resistance", &DiodeModel::series_resistance)
        .def_readwrite("thermal_voltage", &DiodeModel::thermal_voltage)
        .def("__repr__", [](const DiodeModel &d) {
            return "DiodeModel(saturation_current=" + std::to_string(d.saturation_current) +
                   ", ideality=" + std::to_string(d.ideality) +
                   ", series_resistance=" + std::to_string(d.series_resistance) + ")";
        });

    m.def("junction_current", &junction_current, py::arg("diode"), py::arg("v_junction"));
    m.def(
        "terminal_current", [](const DiodeModel &d, double v) { return terminal_current(d, v); }, py::arg("diode"),
        py::arg("v"));
    m.def(
        "iv_derivatives",
        [](const DiodeModel &d, double v) {
            const auto r = iv_derivatives(d, v);
            return py::make_tuple(r.di_dv, r.d2i_dv2);
        },
        py::arg("diode"), py::arg("v"));
    m.def(
        "optimal_bias_static",
        [](const DiodeModel &d, double lo, double hi, double step) {
            const auto b = optimal_bias_static(d, lo, hi, step);
            return py::make_tuple(b.terminal_voltage, b.bias_current);
        },
        py::arg("diode"), py::arg("v_min"), py::arg("v_max"), py::arg("step") = 1e-3);
    m.def(
        "bias_for_current",
        [](const DiodeModel &d, double i) { return bias_for_current(d, i).terminal_voltage; }, py::arg("diode"),
        py::arg("current_a"));
    m.def(
        "simulate_mixing",
        [](const DiodeModel &d, double bias_v, const std::vector<double> &f, const std::vector<double> &p_dbm,
           double if_hz, double lna_gain_db, double if_load_ohm) {
            if (f.size() != p_dbm.size())
                throw Error(ErrorCode::InvalidArgument, "one power per tone expected");
            const auto chain = make_chain(d, bias_v, lna_gain_db, if_load_ohm);
            std::vector<ToneSpec> tones;
            for (std::size_t i = 0; i < f.size(); ++i)
                tones.emplace_back(f[i], tone_amplitude_from_dbm(p_dbm[i], chain.source_impedance));
            const auto r = simulate_mixing(chain, tones, if_hz);
            py::dict out;
            out["if_power_dbm"] = r.if_power_dbm;
            out["dc_current_a"] = r.dc_current;
            return out;
        },
        py::arg("diode"), py::arg("bias_v"), py::arg("frequencies_hz"), py::arg("powers_dbm"), py::arg("if_hz"),
        py::arg("lna_gain_db") = 25.0, py::arg("if_load_ohm") = 50.0);
    m.def(
        "bias_power_sweep",
        [](const DiodeModel &d, const std::vector<double> &bias, const std::vector<double> &power, double f1,
           double f2, double offset_db) {
            MixingChain tmpl;
            tmpl.diode = d;
            return sweep_matrix(bias_power_sweep(tmpl, bias, power, TonePair{f1, f2, offset_db}));
        },
        py::arg("diode"), py::arg("bias_v"), py::arg("power_dbm"), py::arg("f1_hz") = 37.5e9,
        py::arg("f2_hz") = 38.5e9, py::arg("second_tone_offset_db") = -5.0,
        "IF power in dBm, one row per bias voltage; failed cells are NaN");

    // array
    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init([](const std::vector<std::pair<double, double>> &xy, const std::vector<double> &offsets) {
                 std::vector<Vec2> p;
                 for (const auto &[x, y] : xy)
                     p.push_back({x, y});
                 return ArrayGeometry(p, offsets);
             }),
             py::arg("positions_m"), py::arg("rf_phase_offsets_rad") = std::vector<double>{})
        .def_static("rectangular", &ArrayGeometry::rectangular, py::arg("cols"), py::arg("rows"), py::arg("dx_m"),
                    py::arg("dy_m"), py::arg("rotate_odd_rows") = false)
        .def("__len__", &ArrayGeometry::size)
        .def("positions", [](const ArrayGeometry &g) {
            std::vector<std::pair<double, double>> out;
            for (const auto &p : g.positions())
                out.emplace_back(p.x, p.y);
            return out;
        });

    m.def(
        "if_array_factor",
        [](const ArrayGeometry &g, double fI, double fII, double theta, double phi) {
            return if_array_factor(g, fI, fII, Direction(theta, phi));
        },
        py::arg("geometry"), py::arg("f_I_hz"), py::arg("f_II_hz"), py::arg("theta_rad"), py::arg("phi_rad"));
    m.def(
        "rf_array_factor",
        [](const ArrayGeometry &g, double f, double theta, double phi) {
            return rf_array_factor(g, f, Direction(theta, phi));
        },
        py::arg("geometry"), py::arg("f_rf_hz"), py::arg("theta_rad"), py::arg("phi_rad"));
    m.def(
        "array_factor_cut",
        [](const ArrayGeometry &g, double fI, double fII, double frf, double phi_deg,
           const std::vector<double> &theta_deg) {
            const auto cut = array_factor_cut(g, fI, fII, frf, phi_deg, theta_deg);
            std::vector<double> a, b;
            for (const auto &s : cut)
            {
                a.push_back(s.af_if);
                b.push_back(s.af_rf);
            }
            py::dict d;
            d["theta_deg"] = to_array(theta_deg);
            d["af_if"] = to_array(a);
            d["af_rf"] = to_array(b);
            return d;
        },
        py::arg("geometry"), py::arg("f_I_hz"), py::arg("f_II_hz"), py::arg("f_rf_hz"), py::arg("phi_cut_deg"),
        py::arg("theta_deg"));
    m.def(
        "effective_spacing",
        [](double d, double df, double fref) {
            const auto e = effective_spacing(d, df, fref);
            return py::make_tuple(e.if_spacing, e.rf_spacing);
        },
        py::arg("spacing_m"), py::arg("delta_f_hz"), py::arg("f_ref_hz"));
    m.def(
        "combine_elements",
        [](const std::vector<std::pair<double, double>> &phasors, double loss_db) {
            std::vector<Phasor> p;
            for (const auto &[a, ph] : phasors)
                p.push_back({a, ph});
            return combine_elements(p, loss_db).power_gain_db;
        },
        py::arg("phasors"), py::arg("loss_db") = 0.0, "Power gain in dB for (amplitude, phase) inputs");
    m.def(
        "array_if_power",
        [](const ArrayGeometry &g, double fI, double fII, double theta, double phi, bool time_domain) {
            const TwoToneIllumination ill{fI, fII, 1.0, 1.0, Direction(theta, phi)};
            return (time_domain ? simulate_array_timedomain(g, ill) : predicted_array_if(g, ill)).if_power_rel_db;
        },
        py::arg("geometry"), py::arg("f_I_hz"), py::arg("f_II_hz"), py::arg("theta_rad"), py::arg("phi_rad"),
        py::arg("time_domain") = false, "Combined IF power relative to one isotropic element, dB");

    // pattern
    m.def(
        "beamwidth_3db",
        [](const std::vector<double> &theta_rad, const std::vector<double> &gains) {
            PatternGrid p{theta_rad, 0.0, gains, 0.0};
            const auto b = beamwidth_3db(p);
            return py::make_tuple(b.width, b.crossed);
        },
        py::arg("theta_rad"), py::arg("gains"), "(width_rad, crossed) of a linear amplitude pattern cut");

    // link budget
    m.def(
        "friis_rx_power",
        [](double tx_dbm, double tx_gain_db, double distance_m, double f_hz, double rx_dir_db, double eta_db) {
            return friis_rx_power({tx_dbm, tx_gain_db, distance_m, f_hz, rx_dir_db, eta_db});
        },
        py::arg("tx_power_dbm"), py::arg("tx_gain_db"), py::arg("distance_m"), py::arg("frequency_hz"),
        py::arg("rx_directivity_db") = 0.0, py::arg("total_efficiency_db") = 0.0);
    m.def("default_total_efficiency_db", &default_total_efficiency_db, py::arg("frequency_hz"));
    m.def(
        "chain_output_power",
        [](double p1, double p2, double lna, double k, double comb, double ifamp, double cable, bool square_law) {
            return chain_output_power(p1, p2, ChainSpec{lna, k, comb, ifamp, cable}, square_law);
        },
        py::arg("tone1_dbm"), py::arg("tone2_dbm"), py::arg("lna_gain_db") = 25.0,
        py::arg("conversion_gain_db") = kDefaultConversionConstantDb, py::arg("combiner_gain_db") = 0.0,
        py::arg("if_amp_gain_db") = 0.0, py::arg("cable_loss_db") = 0.0, py::arg("square_law") = true);

    // acceptance
    m.def(
        "run_validation",
        [](std::uint64_t seed) {
            const auto r = run_validation(seed);
            py::list checks;
            for (const auto &c : r.checks)
            {
                py::dict d;
                d["id"] = c.id;
                d["title"] = c.title;
                d["passed"] = c.passed;
                d["detail"] = c.detail;
                d["seconds"] = c.seconds;
                checks.append(d);
            }
            return checks;
        },
        py::arg("seed") = 20171119);
}
