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

#ifndef SCATTERSCORE_FFT_HPP_
#define SCATTERSCORE_FFT_HPP_

#include <complex>
#include <vector>

namespace scs::fft {

/// Complex DFT, X[k] = sum_n x[n] exp(-2*pi*i*k*n/N). Plans are cached per
/// size; execution is thread-safe.
std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in);

/// Inverse DFT scaled by 1/N, so inverse(forward(x)) == x up to rounding.
std::vector<std::complex<double>> inverse(const std::vector<std::complex<double>>& in);

/// Forward DFT of a real signal (packed into the complex transform).
std::vector<std::complex<double>> forward_real(const std::vector<double>& in);

}  // namespace scs::fft

#endif  // SCATTERSCORE_FFT_HPP_
