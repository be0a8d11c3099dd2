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

#include "scatterscore/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "scatterscore/errors.hpp"

namespace scs {
namespace {

constexpr char kMagic[4] = {'S', 'C', 'S', 'F'};
constexpr std::uint16_t kFormatVersion = 1;

void write_u16(std::ofstream& f, std::uint16_t x) {
  const unsigned char b[2] = {static_cast<unsigned char>(x & 0xff),
                              static_cast<unsigned char>(x >> 8)};
  f.write(reinterpret_cast<const char*>(b), 2);
}

void write_u32(std::ofstream& f, std::uint32_t x) {
  const unsigned char b[4] = {
      static_cast<unsigned char>(x & 0xff), static_cast<unsigned char>((x >> 8) & 0xff),
      static_cast<unsigned char>((x >> 16) & 0xff),
      static_cast<unsigned char>((x >> 24) & 0xff)};
  f.write(reinterpret_cast<const char*>(b), 4);
}

std::uint16_t read_u16(std::ifstream& f, const std::string& what) {
  unsigned char b[2];
  if (!f.read(reinterpret_cast<char*>(b), 2)) throw IoError("truncated " + what);
  return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
}

std::uint32_t read_u32(std::ifstream& f, const std::string& what) {
  unsigned char b[4];
  if (!f.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated " + what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_stream(std::ofstream& f, const Mat& m) {
  write_u32(f, static_cast<std::uint32_t>(m.rows));
  write_u32(f, static_cast<std::uint32_t>(m.cols));
  std::vector<float> buf(m.v.size());
  for (std::size_t i = 0; i < m.v.size(); ++i) buf[i] = static_cast<float>(m.v[i]);
  // float32 little-endian; this code targets little-endian hosts.
  f.write(reinterpret_cast<const char*>(buf.data()),
          static_cast<std::streamsize>(buf.size() * sizeof(float)));
}

Mat read_stream(std::ifstream& f, const std::string& path) {
  const std::uint32_t rows = read_u32(f, "stream header in " + path);
  const std::uint32_t cols = read_u32(f, "stream header in " + path);
  Mat m(rows, cols);
  std::vector<float> buf(static_cast<std::size_t>(rows) * cols);
  if (!f.read(reinterpret_cast<char*>(buf.data()),
              static_cast<std::streamsize>(buf.size() * sizeof(float)))) {
    throw IoError("truncated stream data in " + path);
  }
  for (std::size_t i = 0; i < buf.size(); ++i) m.v[i] = static_cast<double>(buf[i]);
  return m;
}

}  // namespace

Mat minmax_normalize(const Mat& m) {
  if (!m.all_finite()) throw Error("minmax_normalize: non-finite input");
  if (m.empty()) return m;
  const auto [lo_it, hi_it] = std::minmax_element(m.v.begin(), m.v.end());
  const double lo = *lo_it, hi = *hi_it;
  Mat out(m.rows, m.cols);
  if (hi == lo) return out;  // constant matrix -> zeros
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < m.v.size(); ++i) out.v[i] = (m.v[i] - lo) * inv;
  return out;
}

double rescale_intelligibility(double score_0_10) {
  if (!(score_0_10 >= 0.0 && score_0_10 <= 10.0)) {
    throw OutOfRangeError("intelligibility score " + std::to_string(score_0_10) +
                          " outside [0, 10]");
  }
  return score_0_10 * 0.5;
}

double intelligibility_to_0_10(double score_0_5) { return score_0_5 * 2.0; }

FeatureSample align_frames(const Spectrogram& spec, const ScatteringCoeffs& scat,
                           std::string utterance_id) {
  const std::size_t fs = spec.frames();
  const std::size_t fc = scat.frames();
  const std::size_t gap = fs > fc ? fs - fc : fc - fs;
  if (gap > 4) {
    throw FrameMismatchError("frame counts differ by " + std::to_string(gap) +
                             " (spectrogram " + std::to_string(fs) + ", scattering " +
                             std::to_string(fc) + ")");
  }
  const std::size_t frames = std::min(fs, fc);

  auto truncate = [frames](const Mat& m) {
    Mat out(frames, m.cols);
    std::copy(m.v.begin(), m.v.begin() + static_cast<std::ptrdiff_t>(frames * m.cols),
              out.v.begin());
    return out;
  };

  FeatureSample sample;
  sample.spec = minmax_normalize(truncate(spec.values));
  sample.scat = minmax_normalize(truncate(scat.values));
  sample.frames = frames;
  sample.utterance_id = std::move(utterance_id);
  return sample;
}

void quantize_to_f32(Mat& m) {
  for (double& x : m.v) x = static_cast<double>(static_cast<float>(x));
}

void write_features(const FeatureSample& sample, const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path.string());
  f.write(kMagic, 4);
  write_u16(f, kFormatVersion);
  write_stream(f, sample.spec);
  write_stream(f, sample.scat);
  if (!f) throw IoError("short write: " + path.string());
}

FeatureSample read_features(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path.string());
  char magic[4];
  if (!f.read(magic, 4)) throw IoError("empty or truncated file: " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw VersionMismatchError("bad magic in " + path.string());
  }
  const std::uint16_t version = read_u16(f, "version in " + path.string());
  if (version != kFormatVersion) {
    throw VersionMismatchError("unsupported feature format version " +
                               std::to_string(version) + " in " + path.string());
  }
  FeatureSample sample;
  sample.spec = read_stream(f, path.string());
  sample.scat = read_stream(f, path.string());
  if (sample.spec.rows != sample.scat.rows) {
    throw VersionMismatchError("stream frame counts disagree in " + path.string());
  }
  sample.frames = sample.spec.rows;
  sample.utterance_id = path.stem().string();
  return sample;
}

}  // namespace scs
