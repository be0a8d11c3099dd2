// Copyright 2026 The scatterscore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scatterscore/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "scatterscore/errors.hpp"

namespace scs::fft {
namespace {

// Plan creation is not thread-safe in FFTW; execution via fftw_execute_dft
// on distinct arrays is. Plans are FFTW_ESTIMATE so that plan selection does
// not depend on runtime measurements.
std::mutex g_plan_mutex;

struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

fftw_plan plan_for(std::size_t n, int sign) {
  static std::map<std::size_t, PlanPair>* cache = new std::map<std::size_t, PlanPair>();
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  PlanPair& pp = (*cache)[n];
  fftw_plan& p = (sign == FFTW_FORWARD) ? pp.fwd : pp.bwd;
  if (p == nullptr) {
    fftw_complex* a = fftw_alloc_complex(n);
    fftw_complex* b = fftw_alloc_complex(n);
    p = fftw_plan_dft_1d(static_cast<int>(n), a, b, sign, FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
  }
  return p;
}

struct AlignedBuffer {
  explicit AlignedBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~AlignedBuffer() { fftw_free(data); }
  AlignedBuffer(const AlignedBuffer&) = delete;
  AlignedBuffer& operator=(const AlignedBuffer&) = delete;
  fftw_complex* data;
};

std::vector<std::complex<double>> execute(const std::vector<std::complex<double>>& in,
                                          int sign) {
  const std::size_t n = in.size();
  if (n == 0) throw Error("fft: empty input");
  fftw_plan p = plan_for(n, sign);
  AlignedBuffer a(n), b(n);
  // std::complex<double> is layout-compatible with fftw_complex.
  std::memcpy(static_cast<void*>(a.data), static_cast<const void*>(in.data()),
              n * sizeof(fftw_complex));
  fftw_execute_dft(p, a.data, b.data);
  std::vector<std::complex<double>> out(n);
  std::memcpy(static_cast<void*>(out.data()), static_cast<const void*>(b.data),
              n * sizeof(fftw_complex));
  return out;
}

}  // namespace

std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in) {
  return execute(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in) {
  std::vector<std::complex<double>> out = execute(in, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& x : out) x *= scale;
  return out;
}

std::vector<std::complex<double>> forward_real(const std::vector<double>& in) {
  std::vector<std::complex<double>> buf(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) buf[i] = in[i];
  return forward(buf);
}

}  // namespace scs::fft
