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

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace selfmix
{

// Fixed 9-significant-digit rendering used by every emitter; NaN prints as "nan".
std::string format_number(double value);

// Writes comma-separated rows terminated by LF. Fields containing commas,
// quotes or newlines are quoted (RFC 4180).
class CsvWriter
{
public:
    explicit CsvWriter(std::ostream &os) : os_(os) {}

    void header(std::initializer_list<std::string_view> names);
    void row(std::initializer_list<double> values);

private:
    std::ostream &os_;
};

std::string csv_escape(std::string_view field);

} // namespace selfmix
