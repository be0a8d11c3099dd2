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

#ifndef SCATTERSCORE_AUDIO_HPP_
#define SCATTERSCORE_AUDIO_HPP_

#include <filesystem>
#include <vector>

namespace scs {

/// Mono waveform, samples in [-1, 1].
struct AudioBuffer {
  std::vector<double> samples;
  int sample_rate = 16000;
};

/// Reads a RIFF/WAVE file. Accepts PCM, 16-bit, mono only; 16-bit values are
/// scaled by 1/32768. Throws NotFoundError, UnsupportedFormatError (non-PCM,
/// non-16-bit, multichannel) or CorruptFileError (bad magic, truncated
/// chunks).
AudioBuffer read_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono. Samples are clamped to [-1, 1] and rounded to the
/// nearest 16-bit value.
void write_wav(const std::filesystem::path& path, const AudioBuffer& audio);

}  // namespace scs

#endif  // SCATTERSCORE_AUDIO_HPP_
