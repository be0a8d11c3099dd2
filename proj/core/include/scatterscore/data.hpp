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

#ifndef SCATTERSCORE_DATA_HPP_
#define SCATTERSCORE_DATA_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace scs {

/// One listening-test rating row. quality is 1-5, intelligibility 0-10
/// (characters recognized out of 10).
struct RatingRecord {
  std::string utterance_id;
  std::string wav_path;
  std::string rater_id;
  int quality = 0;
  int intelligibility = 0;
  std::string method;      // optional condition metadata
  std::string noise_type;  // optional
  std::optional<double> snr;
};

/// Test-side utterance with rater-averaged scores.
struct TestUtterance {
  std::string utterance_id;
  std::string wav_path;
  double quality_mean = 0.0;
  double intelligibility_mean = 0.0;
  int rater_count = 0;
};

/// Train/test partition. Training keeps one sample per rating record;
/// test utterances carry averaged scores.
struct DatasetManifest {
  std::vector<RatingRecord> train;
  std::vector<TestUtterance> test;
  std::size_t total_utterances = 0;
};

/// Parses the ratings CSV. Header must start with
/// utterance_id,wav_path,rater_id,quality,intelligibility and may append any
/// of method,noise_type,snr. Malformed rows raise SchemaError and
/// out-of-range scores RangeError, both with 1-based line numbers.
std::vector<RatingRecord> load_ratings(const std::filesystem::path& csv_path);

/// Utterances scored by >= 3 distinct raters become test (averaged scores);
/// every remaining rating record becomes one training sample. Records whose
/// method is "example" never enter the test split.
DatasetManifest partition(const std::vector<RatingRecord>& records);

std::string manifest_to_json(const DatasetManifest& manifest);

struct SynthConfig {
  int n_utts = 8;
  std::uint64_t seed = 1;
  double test_fraction = 0.25;  // fraction of utterances given 3-5 raters
  int train_raters = 2;         // raters per non-test utterance
  int rater_noise = 1;          // noise amplitude on scores, 0 disables
  int sample_rate = 16000;
};

/// Generates a desk-scale corpus: 1-3 s multi-tone utterances mixed with
/// white/pink noise at SNRs in {-5, 0, 5, 10, 15} dB, plus a ratings CSV with
/// pseudo-scores that increase with SNR (a fixed sigmoid map with bounded
/// rater noise; non-physical, for pipeline verification only). Writes
/// <out_dir>/synth_NNNN.wav and <out_dir>/ratings.csv, deterministically in
/// the seed. Throws InvalidConfigError when n_utts < 8.
void synth_corpus(const SynthConfig& config, const std::filesystem::path& out_dir);

}  // namespace scs

#endif  // SCATTERSCORE_DATA_HPP_
