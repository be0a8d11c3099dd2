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

#ifndef SCATTERSCORE_NN_TENSOR_HPP_
#define SCATTERSCORE_NN_TENSOR_HPP_

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <new>
#include <numeric>
#include <string>
#include <vector>

#include "scatterscore/errors.hpp"

namespace scs::nn {

/// 64-byte-aligned allocator. Tensor storage feeds Eigen maps, and Eigen's
/// vectorized kernels pick alignment-dependent code paths with
/// alignment-dependent rounding; pinning every buffer to the same alignment
/// keeps training bitwise reproducible across runs.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::size_t kAlign = 64;

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), std::align_val_t{kAlign}));
  }
  void deallocate(T* p, std::size_t n) {
    ::operator delete(p, n * sizeof(T), std::align_val_t{kAlign});
  }
  template <typename U>
  bool operator==(const AlignedAllocator<U>&) const {
    return true;
  }
};

using AlignedVec = std::vector<double, AlignedAllocator<double>>;

/// Dense row-major tensor of doubles. All model math is 64-bit so gradients
/// can be verified against finite differences at tight tolerances.
struct Tensor {
  std::vector<std::size_t> shape;
  AlignedVec v;

  Tensor() = default;
  explicit Tensor(std::initializer_list<std::size_t> dims) : shape(dims) {
    v.assign(count(shape), 0.0);
  }
  explicit Tensor(std::vector<std::size_t> dims) : shape(std::move(dims)) {
    v.assign(count(shape), 0.0);
  }

  static std::size_t count(const std::vector<std::size_t>& dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                           [](std::size_t a, std::size_t b) { return a * b; });
  }

  std::size_t size() const { return v.size(); }
  std::size_t dim(std::size_t d) const { return shape[d]; }

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  // 2-D / 3-D accessors.
  double& at(std::size_t i, std::size_t j) { return v[i * shape[1] + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * shape[1] + j]; }
  double& at(std::size_t i, std::size_t j, std::size_t k) {
    return v[(i * shape[1] + j) * shape[2] + k];
  }
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return v[(i * shape[1] + j) * shape[2] + k];
  }

  void fill(double x) { std::fill(v.begin(), v.end(), x); }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  /// NaN/Inf anywhere is a hard error.
  void check_finite(const std::string& what) const {
    for (double x : v) {
      if (!std::isfinite(x)) throw Error("non-finite value in " + what);
    }
  }
};

inline void check_same_shape(const Tensor& a, const Tensor& b, const std::string& what) {
  if (!a.same_shape(b)) throw ShapeMismatchError("shape mismatch in " + what);
}

}  // namespace scs::nn

#endif  // SCATTERSCORE_NN_TENSOR_HPP_
