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

// Shared helpers for the unit suites: seeded generators and independent oracles.

#include "selfmix/error.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace selfmix::test
{

class Gen
{
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    double phase() { return uniform(-std::numbers::pi, std::numbers::pi); }

    // `count` distinct integers from [lo, hi].
    std::vector<int> distinct(int count, int lo, int hi)
    {
        std::vector<int> out;
        while (int(out.size()) < count)
        {
            const int v = integer(lo, hi);
            bool seen = false;
            for (int o : out)
                seen = seen || o == v;
            if (!seen)
                out.push_back(v);
        }
        return out;
    }

private:
    std::mt19937_64 rng_;
};

// O(N^2) DFT, X[k] / N, for signed bin k.
inline std::complex<double> direct_dft_bin(const std::vector<double> &x, long k)
{
    const double n = double(x.size());
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double arg = -2.0 * std::numbers::pi * double(k) * double(i) / n;
        acc += x[i] * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return acc / n;
}

template <class F>
ErrorCode error_code_of(F &&f)
{
    try
    {
        f();
    }
    catch (const Error &e)
    {
        return e.code();
    }
    throw std::logic_error("expected a selfmix::Error");
}

} // namespace selfmix::test
