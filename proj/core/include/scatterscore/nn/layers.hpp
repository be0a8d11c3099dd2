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

#ifndef SCATTERSCORE_NN_LAYERS_HPP_
#define SCATTERSCORE_NN_LAYERS_HPP_

#include <functional>
#include <string>

#include "scatterscore/nn/tensor.hpp"

namespace scs::nn {

/// Visits (name, value, gradient) for every parameter tensor. Traversal order
/// is fixed, which pins checkpoint layout, optimizer state order and the init
/// RNG stream.
using ParamVisitor =
    std::function<void(const std::string& name, Tensor& value, Tensor& grad)>;

struct ConvBlockConfig {
  int filters = 16;
  int kernel = 3;      // square kernel, odd
  int freq_stride = 1;
};

/// 2-D convolution over T x F x Cin tensors. "Same" padding on the time axis
/// (time is never strided, keeping frame alignment for the frame-level loss);
/// the frequency axis uses TF-style SAME padding with the configured stride.
/// Kernel weights are stored (kt*kf*cin) x cout for the im2col product.
class Conv2d {
 public:
  Conv2d(int cin, const ConvBlockConfig& cfg);

  Tensor forward(const Tensor& in);
  /// Returns grad wrt input; accumulates grad_w/grad_b.
  Tensor backward(const Tensor& grad_out);

  void visit_params(const std::string& prefix, const ParamVisitor& fn);
  int out_cols(int f_in) const;  // output frequency bins for a given input width
  int filters() const { return cfg_.filters; }

  Tensor w, b, gw, gb;

 private:
  ConvBlockConfig cfg_;
  int cin_;
  // forward cache
  Tensor cols_;  // (T*F_out) x (k*k*cin)
  std::size_t in_t_ = 0, in_f_ = 0;
  bool has_forward_ = false;
};

/// Elementwise max(0, x).
class Relu {
 public:
  Tensor forward(const Tensor& in);
  Tensor backward(const Tensor& grad_out);

 private:
  Tensor mask_;
  bool has_forward_ = false;
};

/// Time-distributed affine map, T x Din -> T x Dout.
class Dense {
 public:
  Dense(int din, int dout);

  Tensor forward(const Tensor& in);
  Tensor backward(const Tensor& grad_out);
  void visit_params(const std::string& prefix, const ParamVisitor& fn);

  Tensor w, b, gw, gb;  // w: Din x Dout

 private:
  Tensor in_;
  bool has_forward_ = false;
};

/// One LSTM direction, run forward in time. Gate layout [i | f | g | o].
class LstmDir {
 public:
  LstmDir(int input_dim, int hidden);

  Tensor forward(const Tensor& in);          // T x D -> T x h
  Tensor backward(const Tensor& grad_out);   // BPTT
  void visit_params(const std::string& prefix, const ParamVisitor& fn);

  Tensor wx, wh, bias, gwx, gwh, gbias;  // wx: D x 4h, wh: h x 4h
  int hidden() const { return h_; }

 private:
  int d_, h_;
  // forward caches (per time step)
  Tensor in_, gates_, cells_, tanh_cells_, hs_;
  bool has_forward_ = false;
};

/// Bidirectional LSTM: the backward direction runs on the time-reversed
/// sequence; outputs are concatenated per frame to T x 2h.
class Blstm {
 public:
  Blstm(int input_dim, int hidden);

  Tensor forward(const Tensor& in);
  Tensor backward(const Tensor& grad_out);
  void visit_params(const std::string& prefix, const ParamVisitor& fn);

  LstmDir fw, bw;

 private:
  int h_;
};

}  // namespace scs::nn

#endif  // SCATTERSCORE_NN_LAYERS_HPP_
