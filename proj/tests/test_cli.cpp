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

#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace selfmix::cli;

namespace
{

struct Run
{
    int code = -1;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "selfmix");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Run r;
    r.code = run(int(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::filesystem::path write_temp(const std::string &name, const std::string &text)
{
    const auto dir = std::filesystem::temp_directory_path() / "selfmix_cli_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> row;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ','))
            row.push_back(f);
        rows.push_back(row);
    }
    return rows;
}

// Full width of the region around the first maximum where the column stays at or above peak / sqrt(2).
double width_deg(const std::vector<std::vector<std::string>> &rows, std::size_t col)
{
    double peak = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        peak = std::max(peak, std::stod(rows[i][col]));
    std::size_t centre = 1;
    while (std::stod(rows[centre][col]) < peak)
        ++centre;
    std::size_t lo = centre, hi = centre;
    while (lo > 1 && std::stod(rows[lo - 1][col]) >= peak / std::sqrt(2.0))
        --lo;
    while (hi + 1 < rows.size() && std::stod(rows[hi + 1][col]) >= peak / std::sqrt(2.0))
        ++hi;
    return std::stod(rows[hi][0]) - std::stod(rows[lo][0]);
}

} // namespace

TEST_CASE("config parsing")
{
    std::istringstream in("# comment\nalpha_hz = 1e9  # trailing\n\nlist_m = 1, 2,3\nname = demo run\n");
    const auto c = Config::parse(in);
    CHECK(c.number("alpha_hz", 0.0) == 1e9);
    CHECK(c.list("list_m", {}) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(c.text("name", "") == "demo run");
    CHECK_FALSE(c.number("missing_hz").has_value());

    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(Config::parse(dup), ConfigError);
    std::istringstream noeq("a 1\n");
    CHECK_THROWS_AS(Config::parse(noeq), ConfigError);
    std::istringstream upper("Alpha = 1\n");
    CHECK_THROWS_AS(Config::parse(upper), ConfigError);
    std::istringstream bad_number("a_hz = 1e9x\n");
    const auto b = Config::parse(bad_number);
    CHECK_THROWS_AS(b.number("a_hz", 0.0), ConfigError);
}

TEST_CASE("array-factor with one element gives a flat IF factor")
{
    const auto cfg = write_temp("one.cfg", "array_cols = 1\narray_rows = 1\n");
    const auto r = run_cli({"array-factor", "--config", cfg.string(), "--quiet"});
    REQUIRE(r.code == 0);
    CHECK(r.err.empty());
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 722);
    CHECK(rows[0][2] == "af_if");
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i][2] == "1");
}

TEST_CASE("array-factor on the 4x2 array: IF width exceeds RF width tenfold")
{
    const auto r = run_cli({"array-factor", "--quiet"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows[0] == std::vector<std::string>{"theta_deg", "phi_deg", "af_if", "af_rf", "af_if_db", "af_rf_db"});
    CHECK(width_deg(rows, 2) > 10.0 * width_deg(rows, 3));
}

TEST_CASE("identical config gives byte-identical output files")
{
    const auto cfg = write_temp("sweep.cfg", "scenario = repeat\nbias_min_v = 0.5\nbias_max_v = 0.7\n"
                                             "power_min_dbm = -50\npower_max_dbm = -30\npower_step_dbm = 10\n");
    const auto a = std::filesystem::temp_directory_path() / "selfmix_cli_test" / "a.csv";
    const auto b = std::filesystem::temp_directory_path() / "selfmix_cli_test" / "b.csv";
    REQUIRE(run_cli({"bias-sweep", "--config", cfg.string(), "--out", a.string(), "--quiet"}).code == 0);
    REQUIRE(run_cli({"bias-sweep", "--config", cfg.string(), "--out", b.string(), "--quiet"}).code == 0);
    std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
    const std::string ta((std::istreambuf_iterator<char>(fa)), {}), tb((std::istreambuf_iterator<char>(fb)), {});
    CHECK(ta == tb);
    CHECK(ta.rfind("bias_v,input_power_dbm,if_power_dbm,dc_current_a\n", 0) == 0);
    CHECK(parse_csv(ta).size() == 1 + 5 * 3);
    CHECK(ta.find('\r') == std::string::npos);
}

TEST_CASE("every subcommand starts its CSV with unit-named columns")
{
    for (const char *cmd : {"spectrum", "diode-iv", "freq-sweep", "pattern", "link-budget"})
    {
        const auto r = run_cli({cmd, "--quiet"});
        REQUIRE(r.code == 0);
        const auto header = parse_csv(r.out).front();
        for (const auto &col : header)
            CHECK(col.find('_') != std::string::npos);
    }
}

TEST_CASE("json output")
{
    const auto cfg = write_temp("lb.cfg", "scenario = anchors\nfrequencies_hz = 34e9, 36.5e9\ntx_power_dbm = 0, 5\n"
                                          "chain_output = true\n");
    const auto r = run_cli({"link-budget", "--config", cfg.string(), "--format", "json", "--quiet"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("\"scenario\": \"anchors\"") != std::string::npos);
    CHECK(r.out.find("\"if_output_dbm\"") != std::string::npos);
    CHECK(r.out.find("-43.3991867") != std::string::npos);
}

TEST_CASE("exit codes")
{
    const auto unknown = write_temp("unknown.cfg", "bogus_hz = 1\n");
    const auto r1 = run_cli({"diode-iv", "--config", unknown.string()});
    CHECK(r1.code == kExitConfigError);
    CHECK(r1.err.find("unknown key 'bogus_hz'") != std::string::npos);

    CHECK(run_cli({"diode-iv", "--config", "/nonexistent/x.cfg"}).code == kExitConfigError);
    CHECK(run_cli({"no-such-command"}).code == kExitConfigError);
    CHECK(run_cli({"diode-iv", "--format", "xml"}).code == kExitConfigError);

    const auto bad_device = write_temp("device.cfg", "ideality = 7\n");
    CHECK(run_cli({"diode-iv", "--config", bad_device.string()}).code == kExitConfigError);

    // 37.5 GHz and 37.5 GHz + 0.5 Hz: incommensurate time grid
    const auto incommensurate = write_temp("inc.cfg", "center_min_hz = 37.5e9\ncenter_max_hz = 37.5e9\n"
                                                      "spacing_hz = 0.5\nbias_min_v = 0.6\nbias_max_v = 0.6\n");
    const auto r2 = run_cli({"freq-sweep", "--config", incommensurate.string(), "--quiet"});
    CHECK(r2.code == 0);
    CHECK(r2.out.find("nan") != std::string::npos);

    const auto nyquist = write_temp("nyq.cfg", "tone_freqs_hz = 9e3\ntone_amps_v = 1\nsample_rate_hz = 15e3\n");
    CHECK(run_cli({"spectrum", "--config", nyquist.string()}).code == kExitComputationError);

    const auto mismatch = write_temp("mm.cfg", "pattern_i_file = p.csv\n");
    write_temp("p.csv", "theta_deg,gain_db\n-10,0\n0,0\n10,0\n");
    CHECK(run_cli({"pattern", "--config", mismatch.string()}).code == kExitComputationError);
}

TEST_CASE("help lists keys and errors")
{
    const auto r = run_cli({"link-budget", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("eta_tot_db") != std::string::npos);
    CHECK(r.out.find("exit 2") != std::string::npos);
}

TEST_CASE("validate prints one line per check within the time budget")
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_cli({"validate"});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(seconds < 60.0);
    CHECK((r.code == kExitOk || r.code == kExitCheckFailed));
    std::size_t lines = 0;
    std::istringstream in(r.out);
    std::string line;
    while (std::getline(in, line))
        lines += (line.rfind("[PASS] AC", 0) == 0 || line.rfind("[FAIL] AC", 0) == 0) ? 1 : 0;
    CHECK(lines == 10);
    CHECK(r.out.find("[KNOWN DEVIATION] effective spacing, 36 mm") != std::string::npos);
}
