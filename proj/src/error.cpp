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

#include "selfmix/error.hpp"

namespace selfmix
{

const char *to_string(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyToneList: return "EmptyToneList";
    case ErrorCode::NyquistViolation: return "NyquistViolation";
    case ErrorCode::CutoffAboveNyquist: return "CutoffAboveNyquist";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NonUniformBins: return "NonUniformBins";
    case ErrorCode::DegenerateEqualFrequencies: return "DegenerateEqualFrequencies";
    case ErrorCode::IncommensurateTones: return "IncommensurateTones";
    case ErrorCode::InvalidIfFrequency: return "InvalidIfFrequency";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NoInteriorMaximum: return "NoInteriorMaximum";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
{
}

} // namespace selfmix
