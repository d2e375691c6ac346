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

#include "selfmix/io.hpp"

#include <cmath>
#include <cstdio>

namespace selfmix
{

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

std::string csv_escape(std::string_view field)
{
    if (field.find_first_of(",\"\n\r") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::header(std::initializer_list<std::string_view> names)
{
    bool first = true;
    for (auto n : names)
    {
        if (!first)
            os_ << ',';
        os_ << csv_escape(n);
        first = false;
    }
    os_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values)
{
    bool first = true;
    for (double v : values)
    {
        if (!first)
            os_ << ',';
        os_ << format_number(v);
        first = false;
    }
    os_ << '\n';
}

} // namespace selfmix
