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

#ifndef SCATTERSCORE_SCATTERING_HPP_
#define SCATTERSCORE_SCATTERING_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "scatterscore/audio.hpp"
#include "scatterscore/mat.hpp"

namespace scs {

/// Wavelet scattering configuration. The averaging support is 2^J samples;
/// q1/q2 are wavelets per octave of the first/second-order banks.
struct ScatteringConfig {
  int j = 8;
  int q1 = 8;
  int q2 = 1;
  bool pad_to_pow2 = true;
};

/// One band-pass filter sampled in the frequency domain at the bank's signal
/// length. center_freq and sigma are in cycles/sample (Nyquist = 0.5).
struct Wavelet {
  double center_freq = 0.0;
  double sigma = 0.0;
  std::vector<double> response;  // real-valued frequency response, length N
};

/// Frequency-domain filter bank: first- and second-order Morlet wavelets plus
/// the Gaussian low-pass. Immutable after construction and shareable across
/// threads. The bank satisfies, per order:
///   - zero mean: |psi_hat(0)| < 1e-7 for every wavelet,
///   - Littlewood-Paley: phi^2(w) + 0.5 * sum(psi^2(w) + psi^2(-w)) <= 1.01,
///   - strictly decreasing center frequencies.
struct FilterBank {
  ScatteringConfig config;
  std::size_t signal_length = 0;
  std::vector<Wavelet> psi1;
  std::vector<Wavelet> psi2;
  std::vector<double> phi;
  double phi_sigma = 0.0;  // frequency std of the low-pass, sigma0 / 2^J
  /// Retained second-order paths (index into psi1, index into psi2), ordered
  /// lexicographically. A pair is kept only when psi2's center frequency lies
  /// below psi1's half-power bandwidth frontier (frequency-decreasing paths).
  std::vector<std::pair<int, int>> pairs;
};

/// Scattering path label. order 1 paths carry the psi1 index in i1 (i2 = -1);
/// order 2 paths carry (i1, i2).
struct ScatterPath {
  int order = 1;
  int i1 = 0;
  int i2 = -1;
};

std::string path_label(const ScatterPath& p);

/// Time-indexed scattering coefficients. Column p of values corresponds to
/// paths[p]; paths list all order-1 paths by decreasing center frequency,
/// then all retained order-2 paths lexicographically.
struct ScatteringCoeffs {
  Mat values;
  std::vector<ScatterPath> paths;
  std::size_t frames() const { return values.rows; }
};

/// Builds the Morlet filter bank for a power-of-two signal_length >= 2^J.
/// Throws InvalidConfigError otherwise.
FilterBank build_filterbank(const ScatteringConfig& config, std::size_t signal_length);

/// First-order coefficients: for each wavelet, |x (*) psi| (*) phi subsampled
/// by 2^J. x must have exactly fb.signal_length samples (LengthMismatchError).
/// Output is (signal_length / 2^J) x |psi1|.
Mat scatter_order1(const std::vector<double>& x, const FilterBank& fb);

/// Second-order coefficients over the retained pairs:
/// ||x (*) psi1| (*) psi2| (*) phi, subsampled by 2^J.
Mat scatter_order2(const std::vector<double>& x, const FilterBank& fb);

/// Full pipeline: zero-pads x to the next power of two >= len + 2*2^J,
/// computes both orders, concatenates along the path axis and trims frames to
/// ceil(len / 2^J).
ScatteringCoeffs scattering_features(const AudioBuffer& audio,
                                     const ScatteringConfig& config);

/// Max over the frequency grid of the Littlewood-Paley sum for the given
/// order's bank (1 or 2). Exposed for verification.
double littlewood_paley_max(const FilterBank& fb, int order);

/// Deterministic path list for a bank (order-1 paths, then order-2 pairs).
std::vector<ScatterPath> scattering_paths(const FilterBank& fb);

}  // namespace scs

#endif  // SCATTERSCORE_SCATTERING_HPP_
