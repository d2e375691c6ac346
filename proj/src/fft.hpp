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

#include <complex>
#include <span>
#include <vector>

namespace selfmix::detail
{

// Unnormalized forward transform of a real sequence; returns bins 0..N/2.
std::vector<std::complex<double>> forward_real(std::span<const double> x);

// Inverse of forward_real including the 1/N factor.
std::vector<double> inverse_real(std::span<const std::complex<double>> half_spectrum, std::size_t n);

} // namespace selfmix::detail
