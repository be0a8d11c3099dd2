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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "scatterscore/errors.hpp"
#include "scatterscore/features.hpp"
#include "scatterscore/rng.hpp"

namespace fs = std::filesystem;
using namespace scs;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "scs_features_test";
  fs::create_directories(dir);
  return dir;
}

Mat random_mat(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(r, c);
  for (double& x : m.v) x = rng.uniform(-3.0, 5.0);
  return m;
}

std::string file_bytes(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("minmax_normalize maps endpoints and degenerate input") {
  Mat m(2, 2);
  m(0, 0) = 1;
  m(0, 1) = 3;
  m(1, 0) = 5;
  m(1, 1) = 3;
  const Mat n = minmax_normalize(m);
  CHECK(n(0, 0) == 0.0);
  CHECK(n(0, 1) == 0.5);
  CHECK(n(1, 0) == 1.0);
  CHECK(n(1, 1) == 0.5);

  const Mat constant(2, 2, 2.0);
  for (double v : minmax_normalize(constant).v) CHECK(v == 0.0);
}

TEST_CASE("minmax_normalize hits 0 and 1 and is idempotent") {
  const Mat m = random_mat(7, 5, 13);
  const Mat n = minmax_normalize(m);
  const auto [lo, hi] = std::minmax_element(n.v.begin(), n.v.end());
  CHECK(*lo == 0.0);
  CHECK(*hi == 1.0);
  const Mat again = minmax_normalize(n);
  for (std::size_t i = 0; i < n.v.size(); ++i) {
    CHECK(again.v[i] == doctest::Approx(n.v[i]).epsilon(1e-15));
  }
}

TEST_CASE("intelligibility rescale and inverse") {
  CHECK(rescale_intelligibility(10.0) == 5.0);
  CHECK(rescale_intelligibility(0.0) == 0.0);
  CHECK(rescale_intelligibility(7.0) == 3.5);
  CHECK(intelligibility_to_0_10(3.5) == 7.0);
  CHECK_THROWS_AS(rescale_intelligibility(-0.1), OutOfRangeError);
  CHECK_THROWS_AS(rescale_intelligibility(10.5), OutOfRangeError);

  // compose to identity across the range
  for (double s = 0.0; s <= 10.0; s += 0.25) {
    CHECK(std::abs(intelligibility_to_0_10(rescale_intelligibility(s)) - s) <= 1e-12);
  }
}

TEST_CASE("align_frames truncates to the smaller count and normalizes") {
  Spectrogram spec;
  spec.values = random_mat(187, 9, 1);
  ScatteringCoeffs scat;
  scat.values = random_mat(188, 4, 2);
  scat.paths.assign(4, ScatterPath{1, 0, -1});

  const FeatureSample s = align_frames(spec, scat, "utt1");
  CHECK(s.frames == 187);
  CHECK(s.spec.rows == 187);
  CHECK(s.scat.rows == 187);
  CHECK(s.utterance_id == "utt1");
  for (double v : s.spec.v) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  for (double v : s.scat.v) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("align_frames rejects gaps above four frames") {
  Spectrogram spec;
  spec.values = random_mat(180, 9, 1);
  ScatteringCoeffs scat;
  scat.values = random_mat(188, 4, 2);
  CHECK_THROWS_AS(align_frames(spec, scat, "utt"), FrameMismatchError);
}

TEST_CASE("feature file roundtrip is bit-exact") {
  FeatureSample s;
  s.spec = minmax_normalize(random_mat(31, 17, 5));
  s.scat = minmax_normalize(random_mat(31, 23, 6));
  s.frames = 31;
  s.utterance_id = "roundtrip";

  const fs::path p1 = temp_dir() / "roundtrip.scsf";
  write_features(s, p1);
  const FeatureSample back = read_features(p1);
  CHECK(back.frames == 31);
  CHECK(back.utterance_id == "roundtrip");
  CHECK(back.spec.rows == s.spec.rows);
  CHECK(back.scat.cols == s.scat.cols);

  // Values equal the f32 quantization of the original, and a second
  // write/read cycle reproduces the file bytes exactly.
  Mat qspec = s.spec;
  quantize_to_f32(qspec);
  CHECK(back.spec.v == qspec.v);

  const fs::path p2 = temp_dir() / "roundtrip2.scsf";
  write_features(back, p2);
  CHECK(file_bytes(p1) == file_bytes(p2));
}

TEST_CASE("feature file error taxonomy") {
  const fs::path bad_magic = temp_dir() / "bad_magic.scsf";
  std::ofstream(bad_magic, std::ios::binary) << "NOPE then some bytes";
  CHECK_THROWS_AS(read_features(bad_magic), VersionMismatchError);

  const fs::path empty = temp_dir() / "empty.scsf";
  std::ofstream(empty, std::ios::binary);
  CHECK_THROWS_AS(read_features(empty), IoError);

  const fs::path missing = temp_dir() / "missing.scsf";
  CHECK_THROWS_AS(read_features(missing), IoError);
}
