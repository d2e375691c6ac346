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

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace selfmix::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitComputationError = 3;

class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Flat "key = value" document. '#' starts a comment; blank lines are ignored.
class Config
{
public:
    static Config parse(std::istream &in, const std::string &source = "<config>");
    static Config load(const std::filesystem::path &path);

    bool has(const std::string &key) const { return values_.count(key) != 0; }
    std::vector<std::string> keys() const;

    double number(const std::string &key, double fallback) const;
    std::optional<double> number(const std::string &key) const;
    std::vector<double> list(const std::string &key, std::vector<double> fallback) const;
    std::string text(const std::string &key, const std::string &fallback) const;
    bool flag(const std::string &key, bool fallback) const;

    // Relative paths resolve against the directory of the config file.
    std::filesystem::path path(const std::string &key) const;

    void set(const std::string &key, const std::string &value) { values_[key] = value; }
    void set_base_dir(std::filesystem::path dir) { base_dir_ = std::move(dir); }

private:
    const std::string &raw(const std::string &key) const;

    std::map<std::string, std::string> values_;
    std::filesystem::path base_dir_;
};

double parse_number(const std::string &text, const std::string &what);

// Converts the CSV emitted by a subcommand into the JSON document written by --format json.
std::string csv_to_json(const std::string &csv, const std::string &subcommand, const std::string &scenario);

// Entry point of the `selfmix` binary. Result text goes to `out` unless --out is given.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace selfmix::cli
