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

#include <stdexcept>
#include <string>

namespace selfmix
{

enum class ErrorCode
{
    InvalidArgument,
    EmptyToneList,
    NyquistViolation,
    CutoffAboveNyquist,
    TooFewSamples,
    NonUniformBins,
    DegenerateEqualFrequencies,
    IncommensurateTones,
    InvalidIfFrequency,
    NoConvergence,
    NoInteriorMaximum,
    IndexOutOfRange,
    NonPositiveInput,
    EmptyInput,
    InvalidGrid,
    GridMismatch,
    InvalidParams,
    ParseError,
};

const char *to_string(ErrorCode code) noexcept;

// All library failures are reported with this type; code() identifies the condition.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace selfmix
