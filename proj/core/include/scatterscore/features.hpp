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

#ifndef SCATTERSCORE_FEATURES_HPP_
#define SCATTERSCORE_FEATURES_HPP_

#include <filesystem>
#include <string>

#include "scatterscore/mat.hpp"
#include "scatterscore/scattering.hpp"
#include "scatterscore/stft.hpp"

namespace scs {

/// Training-ready sample: the two normalized branch inputs with a common
/// frame count.
struct FeatureSample {
  Mat spec;  // frames x bins, values in [0, 1]
  Mat scat;  // frames x paths, values in [0, 1]
  std::size_t frames = 0;
  std::string utterance_id;
};

/// Min-max normalization with one scalar min and max over the whole matrix.
/// A constant matrix maps to all zeros.
Mat minmax_normalize(const Mat& m);

/// Intelligibility rescale from the 0-10 listening-test range to the 0-5
/// training range (x0.5). Throws OutOfRangeError outside [0, 10].
double rescale_intelligibility(double score_0_10);

/// Inverse of rescale_intelligibility, for reporting on the 0-10 scale.
double intelligibility_to_0_10(double score_0_5);

/// Truncates both streams to the smaller frame count and normalizes each
/// stream independently. The two streams use the same 256-sample hop, so
/// counts may disagree only by the padding policies; a gap > 4 frames signals
/// a pipeline bug and throws FrameMismatchError.
FeatureSample align_frames(const Spectrogram& spec, const ScatteringCoeffs& scat,
                           std::string utterance_id);

/// Rounds every value through IEEE float32, matching what a feature-file
/// write/read roundtrip produces. Applied at prediction time so in-memory
/// extraction and file-based extraction feed the model identical values.
void quantize_to_f32(Mat& m);

/// Feature file (.scsf): magic "SCSF", version u16, then for each of the two
/// streams (spec first) rows u32, cols u32 and row-major float32, all
/// little-endian. The utterance id is the file stem.
void write_features(const FeatureSample& sample, const std::filesystem::path& path);
FeatureSample read_features(const std::filesystem::path& path);

}  // namespace scs

#endif  // SCATTERSCORE_FEATURES_HPP_
