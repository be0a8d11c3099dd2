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

#include "scatterscore/stft.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "scatterscore/errors.hpp"
#include "scatterscore/fft.hpp"

namespace scs {

std::vector<double> hann_periodic(std::size_t n_samples) {
  std::vector<double> w(n_samples);
  for (std::size_t n = 0; n < n_samples; ++n) {
    w[n] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                 static_cast<double>(n_samples)));
  }
  return w;
}

Spectrogram stft_magnitude(const AudioBuffer& audio, std::size_t window,
                           std::size_t hop) {
  if (window < 2 || window % 2 != 0) {
    throw Error("stft window must be even and >= 2");
  }
  if (hop == 0) throw Error("stft hop must be >= 1");
  const std::size_t len = audio.samples.size();
  if (len < window) {
    throw InputTooShortError("signal of " + std::to_string(len) +
                             " samples is shorter than one window (" +
                             std::to_string(window) + ")");
  }

  const std::size_t n_frames = (len - window) / hop + 1;
  const std::size_t n_bins = window / 2 + 1;
  const std::vector<double> win = hann_periodic(window);

  Spectrogram out;
  out.values = Mat(n_frames, n_bins);
  std::vector<std::complex<double>> frame(window);
  for (std::size_t f = 0; f < n_frames; ++f) {
    const std::size_t off = f * hop;
    for (std::size_t n = 0; n < window; ++n) {
      frame[n] = audio.samples[off + n] * win[n];
    }
    const auto spec = fft::forward(frame);
    for (std::size_t k = 0; k < n_bins; ++k) {
      out.values(f, k) = std::abs(spec[k]);
    }
  }
  return out;
}

}  // namespace scs
