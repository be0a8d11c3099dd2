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

#ifndef SCATTERSCORE_STFT_HPP_
#define SCATTERSCORE_STFT_HPP_

#include <cstddef>
#include <vector>

#include "scatterscore/audio.hpp"
#include "scatterscore/mat.hpp"

namespace scs {

/// Magnitude spectrogram: one row per frame, window/2 + 1 bins per row.
struct Spectrogram {
  Mat values;
  std::size_t frames() const { return values.rows; }
  std::size_t bins() const { return values.cols; }
};

/// Periodic Hann window, w[n] = 0.5 * (1 - cos(2*pi*n/n_samples)).
std::vector<double> hann_periodic(std::size_t n_samples);

/// Magnitude STFT. Frame f covers samples [f*hop, f*hop + window); frames are
/// drawn from the raw signal with no centering or padding, so the frame count
/// is floor((len - window)/hop) + 1. Signals shorter than one window are
/// rejected with InputTooShortError.
Spectrogram stft_magnitude(const AudioBuffer& audio, std::size_t window = 512,
                           std::size_t hop = 256);

}  // namespace scs

#endif  // SCATTERSCORE_STFT_HPP_
