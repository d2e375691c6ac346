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

#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <memory>
#include <mutex>

namespace selfmix::detail
{
namespace
{

// FFTW's planner is not thread safe; execution on distinct arrays is.
std::mutex &planner_mutex()
{
    static std::mutex m;
    return m;
}

struct FftwFree
{
    void operator()(void *p) const noexcept { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n)
{
    return std::unique_ptr<T[], FftwFree>(static_cast<T *>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

class Plan
{
public:
    explicit Plan(fftw_plan p) : plan_(p) {}
    Plan(const Plan &) = delete;
    Plan &operator=(const Plan &) = delete;
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

} // namespace

std::vector<std::complex<double>> forward_real(std::span<const double> x)
{
    const std::size_t n = x.size();
    const std::size_t m = n / 2 + 1;
    auto in = fftw_buffer<double>(n);
    auto out = fftw_buffer<fftw_complex>(m);

    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_r2c_1d(int(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    Plan plan(raw);
    std::copy(x.begin(), x.end(), in.get());
    plan.execute();

    std::vector<std::complex<double>> result(m);
    for (std::size_t k = 0; k < m; ++k)
        result[k] = {out[k][0], out[k][1]};
    return result;
}

std::vector<double> inverse_real(std::span<const std::complex<double>> half_spectrum, std::size_t n)
{
    const std::size_t m = n / 2 + 1;
    auto in = fftw_buffer<fftw_complex>(m);
    auto out = fftw_buffer<double>(n);

    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_c2r_1d(int(n), in.get(), out.get(), FFTW_ESTIMATE);
    }
    Plan plan(raw);
    for (std::size_t k = 0; k < m; ++k)
    {
        in[k][0] = half_spectrum[k].real();
        in[k][1] = half_spectrum[k].imag();
    }
    plan.execute();

    std::vector<double> result(out.get(), out.get() + n);
    for (auto &v : result)
        v /= double(n);
    return result;
}

} // namespace selfmix::detail
