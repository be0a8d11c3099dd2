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

#ifndef SCATTERSCORE_MAT_HPP_
#define SCATTERSCORE_MAT_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

namespace scs {

/// Row-major dense matrix of doubles. Feature streams (spectrogram frames,
/// scattering frames) are Mat with one row per frame.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

  std::size_t size() const { return v.size(); }
  bool empty() const { return v.empty(); }

  bool all_finite() const {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }
};

inline double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (double x : m.v) s += x * x;
  return std::sqrt(s);
}

}  // namespace scs

#endif  // SCATTERSCORE_MAT_HPP_
