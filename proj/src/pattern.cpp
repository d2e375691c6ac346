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

#include "selfmix/pattern.hpp"

#include "selfmix/error.hpp"
#include "selfmix/io.hpp"
#include "selfmix/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

namespace selfmix
{

namespace
{

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kAngleTolerance = 1e-12;

std::string trim(std::string s)
{
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

} // namespace

void PatternGrid::validate() const
{
    if (theta.empty() || theta.size() != gains.size())
        throw Error(ErrorCode::InvalidGrid, "pattern needs one gain per angle and at least one angle");
    if (!std::isfinite(phi_cut))
        throw Error(ErrorCode::InvalidGrid, "phi cut must be finite");
    for (std::size_t i = 0; i < theta.size(); ++i)
    {
        if (!(std::abs(theta[i]) <= kHalfPi + kAngleTolerance))
            throw Error(ErrorCode::InvalidGrid, "cut angles must lie in [-pi/2, pi/2]");
        if (i > 0 && !(theta[i] > theta[i - 1]))
            throw Error(ErrorCode::InvalidGrid, "cut angles must be strictly increasing");
        if (!(gains[i] >= 0.0) || !std::isfinite(gains[i]))
            throw Error(ErrorCode::InvalidGrid, "pattern gains must be finite and non-negative");
    }
}

double PatternGrid::peak() const
{
    return gains.empty() ? 0.0 : *std::max_element(gains.begin(), gains.end());
}

AnalyticPattern AnalyticPattern::isotropic(double frequency_hz)
{
    return {Kind::Isotropic, 0.0, 0.0, 0.0, frequency_hz};
}

AnalyticPattern AnalyticPattern::cos_q(double q, double frequency_hz)
{
    if (!(q >= 0.0) || !std::isfinite(q))
        throw Error(ErrorCode::InvalidArgument, "cos^q exponent must be >= 0");
    return {Kind::CosQ, q, 0.0, 0.0, frequency_hz};
}

AnalyticPattern AnalyticPattern::two_beam(double tilt_rad, double width_rad, double frequency_hz)
{
    if (!(tilt_rad > 0.0 && tilt_rad < kHalfPi))
        throw Error(ErrorCode::InvalidArgument, "two-beam tilt must lie in (0, pi/2)");
    if (!(width_rad > 0.0) || !std::isfinite(width_rad))
        throw Error(ErrorCode::InvalidArgument, "two-beam width must be positive");
    return {Kind::TwoBeam, 0.0, tilt_rad, width_rad, frequency_hz};
}

std::vector<double> uniform_theta_grid(double max_abs_rad, double step_rad)
{
    if (!(max_abs_rad > 0.0 && max_abs_rad <= kHalfPi + kAngleTolerance) || !(step_rad > 0.0))
        throw Error(ErrorCode::InvalidGrid, "grid needs 0 < max <= pi/2 and a positive step");
    const auto intervals = std::max<long long>(1, std::llround(2.0 * max_abs_rad / step_rad));
    std::vector<double> grid(std::size_t(intervals) + 1);
    for (long long i = 0; i <= intervals; ++i)
        grid[std::size_t(i)] = -max_abs_rad + 2.0 * max_abs_rad * double(i) / double(intervals);
    grid.back() = max_abs_rad;
    return grid;
}

PatternGrid sample_pattern(const AnalyticPattern &p, std::span<const double> theta_rad, double phi_cut_rad)
{
    PatternGrid out;
    out.theta.assign(theta_rad.begin(), theta_rad.end());
    out.phi_cut = phi_cut_rad;
    out.frequency = p.frequency;
    out.gains.resize(out.theta.size(), 1.0);
    if (out.theta.empty())
        throw Error(ErrorCode::InvalidGrid, "empty angle grid");

    switch (p.kind)
    {
    case AnalyticPattern::Kind::Isotropic:
        break;
    case AnalyticPattern::Kind::CosQ:
        for (std::size_t i = 0; i < out.theta.size(); ++i)
            out.gains[i] = std::pow(std::max(std::cos(out.theta[i]), 0.0), p.q);
        break;
    case AnalyticPattern::Kind::TwoBeam:
    {
        // Gaussian beams at +-tilt, each 0.5 in amplitude at +-width/2 from its centre.
        const double k = 4.0 * std::log(2.0) / (p.width * p.width);
        for (std::size_t i = 0; i < out.theta.size(); ++i)
        {
            const double a = out.theta[i] - p.tilt;
            const double b = out.theta[i] + p.tilt;
            out.gains[i] = std::exp(-k * a * a) + std::exp(-k * b * b);
        }
        out = normalized(out);
        break;
    }
    }
    out.validate();
    return out;
}

PatternGrid self_mix_pattern(const PatternGrid &c_I, const PatternGrid &c_II)
{
    c_I.validate();
    c_II.validate();
    if (c_I.theta.size() != c_II.theta.size() || std::abs(c_I.phi_cut - c_II.phi_cut) > kAngleTolerance)
        throw Error(ErrorCode::GridMismatch, "patterns are sampled on different cuts");
    for (std::size_t i = 0; i < c_I.theta.size(); ++i)
        if (std::abs(c_I.theta[i] - c_II.theta[i]) > kAngleTolerance)
            throw Error(ErrorCode::GridMismatch, "patterns are sampled on different angle grids");

    PatternGrid out = c_I;
    for (std::size_t i = 0; i < out.gains.size(); ++i)
        out.gains[i] *= c_II.gains[i];
    out.frequency = std::abs(c_I.frequency - c_II.frequency);
    return out;
}

PatternGrid total_pattern(const PatternGrid &self_mix, const ArrayFactorFn &array_factor)
{
    self_mix.validate();
    PatternGrid out = self_mix;
    for (std::size_t i = 0; i < out.theta.size(); ++i)
    {
        const double af = array_factor(Direction::from_cut(out.theta[i], out.phi_cut));
        if (!(af >= 0.0) || !std::isfinite(af))
            throw Error(ErrorCode::InvalidArgument, "array factor must be finite and non-negative");
        out.gains[i] *= af;
    }
    return out;
}

PatternGrid normalized(const PatternGrid &p)
{
    PatternGrid out = p;
    const double peak = p.peak();
    if (peak > 0.0)
        for (auto &g : out.gains)
            g /= peak;
    return out;
}

BeamwidthResult beamwidth_3db(const PatternGrid &p)
{
    p.validate();
    const double peak = p.peak();
    if (!(peak > 0.0))
        throw Error(ErrorCode::InvalidGrid, "beamwidth of an all-zero pattern");

    // Among (near-)equal maxima take the one closest to broadside.
    std::size_t centre = 0;
    for (std::size_t i = 0; i < p.gains.size(); ++i)
        if (p.gains[i] >= peak * (1.0 - 1e-12) &&
            (p.gains[centre] < peak * (1.0 - 1e-12) || std::abs(p.theta[i]) < std::abs(p.theta[centre])))
            centre = i;

    const double level = peak / std::sqrt(2.0);
    const auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double gi = p.gains[inside];
        const double go = p.gains[outside];
        const double frac = gi == go ? 0.0 : (gi - level) / (gi - go);
        return p.theta[inside] + frac * (p.theta[outside] - p.theta[inside]);
    };

    std::optional<double> right;
    for (std::size_t i = centre + 1; i < p.gains.size(); ++i)
        if (p.gains[i] <= level)
        {
            right = crossing(i - 1, i);
            break;
        }
    std::optional<double> left;
    for (std::size_t i = centre; i-- > 0;)
        if (p.gains[i] <= level)
        {
            left = crossing(i + 1, i);
            break;
        }

    if (!left || !right)
        return {p.theta.back() - p.theta.front(), false};
    return {*right - *left, true};
}

std::vector<Lobe> find_lobes(const PatternGrid &p, double min_relative_level, double max_abs_theta_rad)
{
    p.validate();
    const double peak = p.peak();
    std::vector<Lobe> lobes;
    if (!(peak > 0.0) || p.gains.size() < 3)
        return lobes;
    for (std::size_t i = 1; i + 1 < p.gains.size(); ++i)
    {
        if (std::abs(p.theta[i]) > max_abs_theta_rad + kAngleTolerance)
            continue;
        if (p.gains[i] > p.gains[i - 1] && p.gains[i] >= p.gains[i + 1] && p.gains[i] / peak >= min_relative_level)
            lobes.push_back({p.theta[i], p.gains[i] / peak});
    }
    return lobes;
}

PatternGrid read_pattern_csv(std::istream &in, double phi_cut_rad, double frequency_hz)
{
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::ParseError, "pattern CSV is empty");
    std::string header = trim(line);
    header.erase(std::remove(header.begin(), header.end(), ' '), header.end());
    if (header != "theta_deg,gain_db")
        throw Error(ErrorCode::ParseError, "pattern CSV header must be 'theta_deg,gain_db'");

    PatternGrid p;
    p.phi_cut = phi_cut_rad;
    p.frequency = frequency_hz;
    int line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        line = trim(line);
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::ParseError, "pattern CSV line " + std::to_string(line_no) + ": expected two fields");
        try
        {
            std::size_t used_t = 0, used_g = 0;
            const std::string ts = trim(line.substr(0, comma));
            const std::string gs = trim(line.substr(comma + 1));
            const double theta_deg = std::stod(ts, &used_t);
            const double gain_db = std::stod(gs, &used_g);
            if (used_t != ts.size() || used_g != gs.size())
                throw std::invalid_argument(line);
            p.theta.push_back(deg_to_rad(theta_deg));
            p.gains.push_back(std::pow(10.0, gain_db / 20.0));
        }
        catch (const std::exception &)
        {
            throw Error(ErrorCode::ParseError, "pattern CSV line " + std::to_string(line_no) + ": bad number");
        }
    }
    p.validate();
    return p;
}

void write_pattern_csv(std::ostream &os, const PatternGrid &p)
{
    p.validate();
    CsvWriter csv(os);
    csv.header({"theta_deg", "gain_db"});
    for (std::size_t i = 0; i < p.theta.size(); ++i)
        csv.row({rad_to_deg(p.theta[i]), amplitude_ratio_to_db(p.gains[i])});
}

void write_total_pattern_csv(std::ostream &os, const PatternGrid &self_mix, std::span<const double> af_if,
                             std::span<const double> af_rf)
{
    self_mix.validate();
    if (af_if.size() != self_mix.theta.size() || af_rf.size() != self_mix.theta.size())
        throw Error(ErrorCode::GridMismatch, "array factors must match the pattern grid");
    CsvWriter csv(os);
    csv.header({"theta_deg", "gain_db", "af_if", "af_rf", "total_if_db", "total_rf_db"});
    for (std::size_t i = 0; i < self_mix.theta.size(); ++i)
    {
        const double g = self_mix.gains[i];
        csv.row({rad_to_deg(self_mix.theta[i]), amplitude_ratio_to_db(g), af_if[i], af_rf[i],
                 amplitude_ratio_to_db(g * af_if[i]), amplitude_ratio_to_db(g * af_rf[i])});
    }
}

} // namespace selfmix
