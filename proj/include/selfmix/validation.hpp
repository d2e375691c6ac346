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

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace selfmix
{

struct CheckResult
{
    std::string id;     // "AC1" ... "AC10"
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double time_limit_s = 0.0;  // 0: no runtime bound
};

// Documented mismatches against reference values that are reported but not failed.
struct KnownDeviation
{
    std::string title;
    std::string detail;
};

struct ValidationReport
{
    std::vector<CheckResult> checks;
    std::vector<KnownDeviation> deviations;

    bool all_passed() const;
};

// Runs every acceptance check. Random fixtures derive from `seed`, so a given seed is reproducible.
ValidationReport run_validation(std::uint64_t seed = 20171119);

// One "[PASS]" / "[FAIL]" line per check, then the known deviations.
void print_report(std::ostream &os, const ValidationReport &report);

// Individual checks, exposed for the test suites.
CheckResult check_limiting_case_gain();
CheckResult check_if_vs_rf_beamwidth();
CheckResult check_effective_spacing(std::vector<KnownDeviation> *deviations = nullptr);
CheckResult check_signal_oracle(std::uint64_t seed);
CheckResult check_array_oracle(std::uint64_t seed);
CheckResult check_row_rotation();
CheckResult check_square_law_slope();
CheckResult check_bias_optimum();
CheckResult check_friis_anchors();
CheckResult check_high_power_bias_insensitivity();

} // namespace selfmix
