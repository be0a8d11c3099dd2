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

#include "scatterscore/nn/layers.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace scs::nn {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMat = Eigen::Map<RowMat>;
using ConstMapMat = Eigen::Map<const RowMat>;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor reverse_time(const Tensor& x) {
  Tensor out(x.shape);
  const std::size_t t_n = x.shape[0];
  const std::size_t row = x.size() / t_n;
  for (std::size_t t = 0; t < t_n; ++t) {
    std::copy(x.v.begin() + static_cast<std::ptrdiff_t>(t * row),
              x.v.begin() + static_cast<std::ptrdiff_t>((t + 1) * row),
              out.v.begin() + static_cast<std::ptrdiff_t>((t_n - 1 - t) * row));
  }
  return out;
}

}  // namespace

// ───────────────────────── Conv2d

Conv2d::Conv2d(int cin, const ConvBlockConfig& cfg) : cfg_(cfg), cin_(cin) {
  if (cfg.kernel < 1 || cfg.kernel % 2 == 0) {
    throw ShapeMismatchError("conv kernel must be odd and >= 1");
  }
  if (cfg.filters < 1 || cfg.freq_stride < 1) {
    throw ShapeMismatchError("conv filters and freq_stride must be >= 1");
  }
  const std::size_t k = static_cast<std::size_t>(cfg.kernel);
  w = Tensor{k * k * static_cast<std::size_t>(cin), static_cast<std::size_t>(cfg.filters)};
  b = Tensor{static_cast<std::size_t>(cfg.filters)};
  gw = Tensor(w.shape);
  gb = Tensor(b.shape);
}

int Conv2d::out_cols(int f_in) const {
  return (f_in + cfg_.freq_stride - 1) / cfg_.freq_stride;
}

Tensor Conv2d::forward(const Tensor& in) {
  if (in.shape.size() != 3 || in.shape[2] != static_cast<std::size_t>(cin_)) {
    throw ShapeMismatchError("conv2d expects T x F x " + std::to_string(cin_));
  }
  const int t_n = static_cast<int>(in.shape[0]);
  const int f_n = static_cast<int>(in.shape[1]);
  const int k = cfg_.kernel;
  const int s = cfg_.freq_stride;
  if (t_n < k || f_n < k) {
    throw ShapeMismatchError("conv2d input smaller than kernel");
  }
  const int f_out = out_cols(f_n);
  const int pad_t = (k - 1) / 2;
  const int pad_f_total = std::max(0, (f_out - 1) * s + k - f_n);
  const int pad_f_lo = pad_f_total / 2;

  in_t_ = static_cast<std::size_t>(t_n);
  in_f_ = static_cast<std::size_t>(f_n);

  const std::size_t rows = static_cast<std::size_t>(t_n) * static_cast<std::size_t>(f_out);
  const std::size_t cols_n = static_cast<std::size_t>(k) * k * cin_;
  cols_ = Tensor{rows, cols_n};

  for (int t = 0; t < t_n; ++t) {
    for (int fo = 0; fo < f_out; ++fo) {
      double* dst = &cols_.at(static_cast<std::size_t>(t) * f_out + fo, 0);
      for (int dt = 0; dt < k; ++dt) {
        const int ti = t - pad_t + dt;
        for (int df = 0; df < k; ++df) {
          const int fi = fo * s - pad_f_lo + df;
          if (ti < 0 || ti >= t_n || fi < 0 || fi >= f_n) {
            for (int c = 0; c < cin_; ++c) *dst++ = 0.0;
          } else {
            const double* src =
                in.v.data() + (static_cast<std::size_t>(ti) * in.shape[1] +
                               static_cast<std::size_t>(fi)) *
                                  in.shape[2];
            for (int c = 0; c < cin_; ++c) *dst++ = src[c];
          }
        }
      }
    }
  }

  Tensor out{static_cast<std::size_t>(t_n), static_cast<std::size_t>(f_out),
             static_cast<std::size_t>(cfg_.filters)};
  ConstMapMat mc(cols_.v.data(), static_cast<Eigen::Index>(rows),
                 static_cast<Eigen::Index>(cols_n));
  ConstMapMat mw(w.v.data(), static_cast<Eigen::Index>(cols_n), cfg_.filters);
  MapMat mo(out.v.data(), static_cast<Eigen::Index>(rows), cfg_.filters);
  mo.noalias() = mc * mw;
  mo.rowwise() += ConstMapMat(b.v.data(), 1, cfg_.filters).row(0);

  has_forward_ = true;
  return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
  if (!has_forward_) throw MissingForwardStateError("conv2d backward before forward");
  const int k = cfg_.kernel;
  const int s = cfg_.freq_stride;
  const int t_n = static_cast<int>(in_t_);
  const int f_n = static_cast<int>(in_f_);
  const int f_out = out_cols(f_n);
  const std::size_t rows = cols_.shape[0];
  const std::size_t cols_n = cols_.shape[1];
  if (grad_out.size() != rows * static_cast<std::size_t>(cfg_.filters)) {
    throw ShapeMismatchError("conv2d grad_out shape");
  }

  ConstMapMat mgo(grad_out.v.data(), static_cast<Eigen::Index>(rows), cfg_.filters);
  ConstMapMat mc(cols_.v.data(), static_cast<Eigen::Index>(rows),
                 static_cast<Eigen::Index>(cols_n));
  MapMat mgw(gw.v.data(), static_cast<Eigen::Index>(cols_n), cfg_.filters);
  mgw.noalias() += mc.transpose() * mgo;
  MapMat mgb(gb.v.data(), 1, cfg_.filters);
  mgb.row(0) += mgo.colwise().sum();

  Tensor dcols{rows, cols_n};
  MapMat mdc(dcols.v.data(), static_cast<Eigen::Index>(rows),
             static_cast<Eigen::Index>(cols_n));
  ConstMapMat mw(w.v.data(), static_cast<Eigen::Index>(cols_n), cfg_.filters);
  mdc.noalias() = mgo * mw.transpose();

  const int pad_t = (k - 1) / 2;
  const int pad_f_total = std::max(0, (f_out - 1) * s + k - f_n);
  const int pad_f_lo = pad_f_total / 2;

  Tensor din{in_t_, in_f_, static_cast<std::size_t>(cin_)};
  for (int t = 0; t < t_n; ++t) {
    for (int fo = 0; fo < f_out; ++fo) {
      const double* src = &dcols.at(static_cast<std::size_t>(t) * f_out + fo, 0);
      for (int dt = 0; dt < k; ++dt) {
        const int ti = t - pad_t + dt;
        for (int df = 0; df < k; ++df) {
          const int fi = fo * s - pad_f_lo + df;
          if (ti < 0 || ti >= t_n || fi < 0 || fi >= f_n) {
            src += cin_;
          } else {
            double* dst = &din.at(ti, fi, 0);
            for (int c = 0; c < cin_; ++c) dst[c] += *src++;
          }
        }
      }
    }
  }
  return din;
}

void Conv2d::visit_params(const std::string& prefix, const ParamVisitor& fn) {
  fn(prefix + ".w", w, gw);
  fn(prefix + ".b", b, gb);
}

// ───────────────────────── Relu

Tensor Relu::forward(const Tensor& in) {
  mask_ = Tensor(in.shape);
  Tensor out(in.shape);
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in.v[i] > 0.0) {
      out.v[i] = in.v[i];
      mask_.v[i] = 1.0;
    }
  }
  has_forward_ = true;
  return out;
}

Tensor Relu::backward(const Tensor& grad_out) {
  if (!has_forward_) throw MissingForwardStateError("relu backward before forward");
  check_same_shape(grad_out, mask_, "relu backward");
  Tensor din(grad_out.shape);
  for (std::size_t i = 0; i < grad_out.size(); ++i) {
    din.v[i] = grad_out.v[i] * mask_.v[i];
  }
  return din;
}

// ───────────────────────── Dense

Dense::Dense(int din, int dout) {
  if (din < 1 || dout < 1) throw ShapeMismatchError("dense dims must be >= 1");
  w = Tensor{static_cast<std::size_t>(din), static_cast<std::size_t>(dout)};
  b = Tensor{static_cast<std::size_t>(dout)};
  gw = Tensor(w.shape);
  gb = Tensor(b.shape);
}

Tensor Dense::forward(const Tensor& in) {
  if (in.shape.size() != 2 || in.shape[1] != w.shape[0]) {
    throw ShapeMismatchError("dense expects T x " + std::to_string(w.shape[0]));
  }
  in_ = in;
  const auto t_n = static_cast<Eigen::Index>(in.shape[0]);
  const auto din = static_cast<Eigen::Index>(w.shape[0]);
  const auto dout = static_cast<Eigen::Index>(w.shape[1]);
  Tensor out{in.shape[0], w.shape[1]};
  ConstMapMat mi(in.v.data(), t_n, din);
  ConstMapMat mw(w.v.data(), din, dout);
  MapMat mo(out.v.data(), t_n, dout);
  mo.noalias() = mi * mw;
  mo.rowwise() += ConstMapMat(b.v.data(), 1, dout).row(0);
  has_forward_ = true;
  return out;
}

Tensor Dense::backward(const Tensor& grad_out) {
  if (!has_forward_) throw MissingForwardStateError("dense backward before forward");
  if (grad_out.shape.size() != 2 || grad_out.shape[0] != in_.shape[0] ||
      grad_out.shape[1] != w.shape[1]) {
    throw ShapeMismatchError("dense grad_out shape");
  }
  const auto t_n = static_cast<Eigen::Index>(in_.shape[0]);
  const auto din = static_cast<Eigen::Index>(w.shape[0]);
  const auto dout = static_cast<Eigen::Index>(w.shape[1]);
  ConstMapMat mi(in_.v.data(), t_n, din);
  ConstMapMat mgo(grad_out.v.data(), t_n, dout);
  MapMat(gw.v.data(), din, dout).noalias() += mi.transpose() * mgo;
  MapMat(gb.v.data(), 1, dout).row(0) += mgo.colwise().sum();

  Tensor din_t{in_.shape[0], w.shape[0]};
  MapMat(din_t.v.data(), t_n, din).noalias() =
      mgo * ConstMapMat(w.v.data(), din, dout).transpose();
  return din_t;
}

void Dense::visit_params(const std::string& prefix, const ParamVisitor& fn) {
  fn(prefix + ".w", w, gw);
  fn(prefix + ".b", b, gb);
}

// ───────────────────────── LstmDir

LstmDir::LstmDir(int input_dim, int hidden) : d_(input_dim), h_(hidden) {
  if (input_dim < 1 || hidden < 1) throw ShapeMismatchError("lstm dims must be >= 1");
  const std::size_t h4 = 4 * static_cast<std::size_t>(hidden);
  wx = Tensor{static_cast<std::size_t>(input_dim), h4};
  wh = Tensor{static_cast<std::size_t>(hidden), h4};
  bias = Tensor{h4};
  gwx = Tensor(wx.shape);
  gwh = Tensor(wh.shape);
  gbias = Tensor(bias.shape);
}

Tensor LstmDir::forward(const Tensor& in) {
  if (in.shape.size() != 2 || in.shape[1] != static_cast<std::size_t>(d_)) {
    throw ShapeMismatchError("lstm expects T x " + std::to_string(d_));
  }
  const std::size_t t_n = in.shape[0];
  if (t_n == 0) throw ShapeMismatchError("lstm needs at least one frame");
  const std::size_t h4 = 4 * static_cast<std::size_t>(h_);

  in_ = in;
  gates_ = Tensor{t_n, h4};        // activated gate values [i f g o]
  cells_ = Tensor{t_n, static_cast<std::size_t>(h_)};
  tanh_cells_ = Tensor{t_n, static_cast<std::size_t>(h_)};
  hs_ = Tensor{t_n, static_cast<std::size_t>(h_)};

  // Input contribution for all frames in one product.
  Tensor pre{t_n, h4};
  MapMat mpre(pre.v.data(), static_cast<Eigen::Index>(t_n), static_cast<Eigen::Index>(h4));
  mpre.noalias() = ConstMapMat(in.v.data(), static_cast<Eigen::Index>(t_n), d_) *
                   ConstMapMat(wx.v.data(), d_, static_cast<Eigen::Index>(h4));
  mpre.rowwise() += ConstMapMat(bias.v.data(), 1, static_cast<Eigen::Index>(h4)).row(0);

  ConstMapMat mwh(wh.v.data(), h_, static_cast<Eigen::Index>(h4));
  Eigen::RowVectorXd h_prev = Eigen::RowVectorXd::Zero(h_);
  Eigen::RowVectorXd c_prev = Eigen::RowVectorXd::Zero(h_);

  for (std::size_t t = 0; t < t_n; ++t) {
    Eigen::RowVectorXd pre_t =
        mpre.row(static_cast<Eigen::Index>(t)) + h_prev * mwh;
    for (int u = 0; u < h_; ++u) {
      const double gi = sigmoid(pre_t[u]);
      const double gf = sigmoid(pre_t[h_ + u]);
      const double gg = std::tanh(pre_t[2 * h_ + u]);
      const double go = sigmoid(pre_t[3 * h_ + u]);
      const double c = gf * c_prev[u] + gi * gg;
      const double tc = std::tanh(c);
      gates_.at(t, static_cast<std::size_t>(u)) = gi;
      gates_.at(t, static_cast<std::size_t>(h_ + u)) = gf;
      gates_.at(t, static_cast<std::size_t>(2 * h_ + u)) = gg;
      gates_.at(t, static_cast<std::size_t>(3 * h_ + u)) = go;
      cells_.at(t, static_cast<std::size_t>(u)) = c;
      tanh_cells_.at(t, static_cast<std::size_t>(u)) = tc;
      hs_.at(t, static_cast<std::size_t>(u)) = go * tc;
    }
    for (int u = 0; u < h_; ++u) {
      h_prev[u] = hs_.at(t, static_cast<std::size_t>(u));
      c_prev[u] = cells_.at(t, static_cast<std::size_t>(u));
    }
  }
  has_forward_ = true;
  return hs_;
}

Tensor LstmDir::backward(const Tensor& grad_out) {
  if (!has_forward_) throw MissingForwardStateError("lstm backward before forward");
  check_same_shape(grad_out, hs_, "lstm backward");
  const std::size_t t_n = in_.shape[0];
  const std::size_t h4 = 4 * static_cast<std::size_t>(h_);

  Tensor dpre_all{t_n, h4};
  Eigen::RowVectorXd dh_next = Eigen::RowVectorXd::Zero(h_);
  Eigen::RowVectorXd dc_next = Eigen::RowVectorXd::Zero(h_);
  ConstMapMat mwh(wh.v.data(), h_, static_cast<Eigen::Index>(h4));

  for (std::size_t ti = t_n; ti-- > 0;) {
    Eigen::RowVectorXd dpre(static_cast<Eigen::Index>(h4));
    for (int u = 0; u < h_; ++u) {
      const double gi = gates_.at(ti, static_cast<std::size_t>(u));
      const double gf = gates_.at(ti, static_cast<std::size_t>(h_ + u));
      const double gg = gates_.at(ti, static_cast<std::size_t>(2 * h_ + u));
      const double go = gates_.at(ti, static_cast<std::size_t>(3 * h_ + u));
      const double tc = tanh_cells_.at(ti, static_cast<std::size_t>(u));
      const double c_prev =
          (ti == 0) ? 0.0 : cells_.at(ti - 1, static_cast<std::size_t>(u));

      const double dh = grad_out.at(ti, static_cast<std::size_t>(u)) + dh_next[u];
      const double dc = dh * go * (1.0 - tc * tc) + dc_next[u];

      dpre[u] = dc * gg * gi * (1.0 - gi);                  // input gate
      dpre[h_ + u] = dc * c_prev * gf * (1.0 - gf);         // forget gate
      dpre[2 * h_ + u] = dc * gi * (1.0 - gg * gg);         // candidate
      dpre[3 * h_ + u] = dh * tc * go * (1.0 - go);         // output gate
      dc_next[u] = dc * gf;
    }
    dh_next.noalias() = dpre * mwh.transpose();
    for (std::size_t j = 0; j < h4; ++j) dpre_all.at(ti, j) = dpre[static_cast<Eigen::Index>(j)];
  }

  // Batched parameter gradients.
  ConstMapMat mdpre(dpre_all.v.data(), static_cast<Eigen::Index>(t_n),
                    static_cast<Eigen::Index>(h4));
  ConstMapMat min(in_.v.data(), static_cast<Eigen::Index>(t_n), d_);
  MapMat(gwx.v.data(), d_, static_cast<Eigen::Index>(h4)).noalias() +=
      min.transpose() * mdpre;
  MapMat(gbias.v.data(), 1, static_cast<Eigen::Index>(h4)).row(0) +=
      mdpre.colwise().sum();

  // h_{t-1} rows: zero row then hs_[0..T-2].
  RowMat h_prev(static_cast<Eigen::Index>(t_n), h_);
  h_prev.row(0).setZero();
  if (t_n > 1) {
    h_prev.bottomRows(static_cast<Eigen::Index>(t_n - 1)) =
        ConstMapMat(hs_.v.data(), static_cast<Eigen::Index>(t_n), h_)
            .topRows(static_cast<Eigen::Index>(t_n - 1));
  }
  MapMat(gwh.v.data(), h_, static_cast<Eigen::Index>(h4)).noalias() +=
      h_prev.transpose() * mdpre;

  Tensor din{t_n, static_cast<std::size_t>(d_)};
  MapMat(din.v.data(), static_cast<Eigen::Index>(t_n), d_).noalias() =
      mdpre * ConstMapMat(wx.v.data(), d_, static_cast<Eigen::Index>(h4)).transpose();
  return din;
}

void LstmDir::visit_params(const std::string& prefix, const ParamVisitor& fn) {
  fn(prefix + ".wx", wx, gwx);
  fn(prefix + ".wh", wh, gwh);
  fn(prefix + ".b", bias, gbias);
}

// ───────────────────────── Blstm

Blstm::Blstm(int input_dim, int hidden)
    : fw(input_dim, hidden), bw(input_dim, hidden), h_(hidden) {}

Tensor Blstm::forward(const Tensor& in) {
  const Tensor hf = fw.forward(in);
  const Tensor hb = bw.forward(reverse_time(in));
  const std::size_t t_n = in.shape[0];
  Tensor out{t_n, 2 * static_cast<std::size_t>(h_)};
  for (std::size_t t = 0; t < t_n; ++t) {
    for (int u = 0; u < h_; ++u) {
      out.at(t, static_cast<std::size_t>(u)) = hf.at(t, static_cast<std::size_t>(u));
      out.at(t, static_cast<std::size_t>(h_ + u)) =
          hb.at(t_n - 1 - t, static_cast<std::size_t>(u));
    }
  }
  return out;
}

Tensor Blstm::backward(const Tensor& grad_out) {
  if (grad_out.shape.size() != 2 || grad_out.shape[1] != 2 * static_cast<std::size_t>(h_)) {
    throw ShapeMismatchError("blstm grad_out shape");
  }
  const std::size_t t_n = grad_out.shape[0];
  Tensor gf{t_n, static_cast<std::size_t>(h_)};
  Tensor gb_rev{t_n, static_cast<std::size_t>(h_)};
  for (std::size_t t = 0; t < t_n; ++t) {
    for (int u = 0; u < h_; ++u) {
      gf.at(t, static_cast<std::size_t>(u)) = grad_out.at(t, static_cast<std::size_t>(u));
      gb_rev.at(t_n - 1 - t, static_cast<std::size_t>(u)) =
          grad_out.at(t, static_cast<std::size_t>(h_ + u));
    }
  }
  const Tensor din_f = fw.backward(gf);
  const Tensor din_b = reverse_time(bw.backward(gb_rev));
  Tensor din(din_f.shape);
  for (std::size_t i = 0; i < din.size(); ++i) din.v[i] = din_f.v[i] + din_b.v[i];
  return din;
}

void Blstm::visit_params(const std::string& prefix, const ParamVisitor& fn) {
  fw.visit_params(prefix + ".fw", fn);
  bw.visit_params(prefix + ".bw", fn);
}

}  // namespace scs::nn
