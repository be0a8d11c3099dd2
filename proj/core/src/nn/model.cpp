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

#include "scatterscore/nn/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "scatterscore/rng.hpp"

namespace scs::nn {
namespace {

constexpr char kMagic[4] = {'I', 'N', 'Q', 'M'};
constexpr std::uint16_t kCheckpointVersion = 1;

Tensor mat_to_tensor(const Mat& m) {
  Tensor t{m.rows, m.cols, 1};
  std::copy(m.v.begin(), m.v.end(), t.v.begin());
  return t;
}

Tensor flatten_frames(const Tensor& t3) {
  // T x F x C and T x (F*C) share the same row-major layout.
  Tensor out = t3;
  out.shape = {t3.shape[0], t3.shape[1] * t3.shape[2]};
  return out;
}

template <typename T>
void write_pod(std::ofstream& f, T x) {
  f.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& f, const std::string& what) {
  T x{};
  if (!f.read(reinterpret_cast<char*>(&x), sizeof(T))) {
    throw IoError("truncated checkpoint (" + what + ")");
  }
  return x;
}

}  // namespace

// ───────────────────────── Head

Model::Head::Head(int in_dim, int blstm_hidden, int dense_hidden)
    : blstm(in_dim, blstm_hidden),
      dense1(2 * blstm_hidden, dense_hidden),
      dense2(dense_hidden, 1) {}

std::vector<double> Model::Head::forward(const Tensor& concat) {
  const Tensor h = blstm.forward(concat);
  const Tensor d1 = relu.forward(dense1.forward(h));
  const Tensor scores = dense2.forward(d1);  // T x 1
  return scores.v;
}

Tensor Model::Head::backward(const std::vector<double>& d_frames) {
  Tensor d_scores{d_frames.size(), 1};
  d_scores.v = d_frames;
  const Tensor d_d1 = dense1.backward(relu.backward(dense2.backward(d_scores)));
  return blstm.backward(d_d1);
}

void Model::Head::visit_params(const std::string& prefix, const ParamVisitor& fn) {
  blstm.visit_params(prefix + ".blstm", fn);
  dense1.visit_params(prefix + ".dense1", fn);
  dense2.visit_params(prefix + ".dense2", fn);
}

// ───────────────────────── Model

Model::Branch Model::make_branch(const ModelConfig& config, int in_bins) {
  Branch br;
  br.in_bins = in_bins;
  int cin = 1;
  int f = in_bins;
  for (const ConvBlockConfig& blk : config.conv_blocks) {
    br.convs.emplace_back(cin, blk);
    br.relus.emplace_back();
    f = br.convs.back().out_cols(f);
    cin = blk.filters;
  }
  br.out_dim = f * cin;
  return br;
}

Model::Model(const ModelConfig& config) : config_(config) {
  if (config.conv_blocks.empty()) {
    throw ShapeMismatchError("model needs at least one conv block");
  }
  if (config.blstm_hidden < 1 || config.dense_hidden < 1) {
    throw ShapeMismatchError("hidden sizes must be >= 1");
  }
  if (!config.use_spec && !config.use_scat) {
    throw ShapeMismatchError("model needs at least one input branch");
  }

  int concat_dim = 0;
  if (config.use_spec) {
    if (config.spec_bins < 1) throw ShapeMismatchError("spec_bins must be >= 1");
    spec_branch_ = make_branch(config, config.spec_bins);
    concat_dim += spec_branch_->out_dim;
  }
  if (config.use_scat) {
    if (config.scat_bins < 1) throw ShapeMismatchError("scat_bins must be >= 1");
    scat_branch_ = make_branch(config, config.scat_bins);
    concat_dim += scat_branch_->out_dim;
  }

  intel_head_.emplace(concat_dim, config.blstm_hidden, config.dense_hidden);
  qual_head_.emplace(concat_dim, config.blstm_hidden, config.dense_hidden);
  init_params();
}

void Model::init_params() {
  Rng rng(config_.seed);
  visit_params([&rng](const std::string&, Tensor& value, Tensor& grad) {
    grad.fill(0.0);
    if (value.shape.size() == 2) {
      const double a = std::sqrt(6.0 / static_cast<double>(value.shape[0] + value.shape[1]));
      for (double& x : value.v) x = rng.uniform(-a, a);
    } else {
      value.fill(0.0);
    }
  });
  // Forget-gate bias 1 for stable early training.
  const int h = config_.blstm_hidden;
  for (Head* head : {&*intel_head_, &*qual_head_}) {
    for (LstmDir* dir : {&head->blstm.fw, &head->blstm.bw}) {
      for (int u = 0; u < h; ++u) dir->bias.v[static_cast<std::size_t>(h + u)] = 1.0;
    }
  }
}

Tensor Model::branch_forward(Branch& br, const Mat& input) {
  if (static_cast<int>(input.cols) != br.in_bins) {
    throw ShapeMismatchError("branch input has " + std::to_string(input.cols) +
                             " bins, expected " + std::to_string(br.in_bins));
  }
  Tensor x = mat_to_tensor(input);
  for (std::size_t i = 0; i < br.convs.size(); ++i) {
    x = br.relus[i].forward(br.convs[i].forward(x));
  }
  return flatten_frames(x);
}

void Model::branch_backward(Branch& br, const Tensor& grad_flat) {
  // Undo the flatten: T x (F*C) back to the conv stack's output shape.
  const std::size_t t_n = grad_flat.shape[0];
  int f = br.in_bins;
  for (const Conv2d& c : br.convs) f = c.out_cols(f);
  Tensor g = grad_flat;
  g.shape = {t_n, static_cast<std::size_t>(f),
             static_cast<std::size_t>(br.convs.back().filters())};
  for (std::size_t i = br.convs.size(); i-- > 0;) {
    g = br.convs[i].backward(br.relus[i].backward(g));
  }
}

Predictions Model::forward(const FeatureSample& sample) {
  if (sample.frames == 0) throw ShapeMismatchError("sample has no frames");
  frames_ = sample.frames;

  std::vector<const Tensor*> parts;
  Tensor spec_out, scat_out;
  if (spec_branch_) {
    spec_out = branch_forward(*spec_branch_, sample.spec);
    parts.push_back(&spec_out);
  }
  if (scat_branch_) {
    scat_out = branch_forward(*scat_branch_, sample.scat);
    parts.push_back(&scat_out);
  }

  std::size_t concat_dim = 0;
  for (const Tensor* p : parts) concat_dim += p->shape[1];
  Tensor concat{frames_, concat_dim};
  for (std::size_t t = 0; t < frames_; ++t) {
    std::size_t off = 0;
    for (const Tensor* p : parts) {
      const std::size_t d = p->shape[1];
      std::memcpy(&concat.at(t, off), &p->v[t * d], d * sizeof(double));
      off += d;
    }
  }

  Predictions pred;
  pred.frames = frames_;
  pred.frame_i = intel_head_->forward(concat);
  pred.frame_q = qual_head_->forward(concat);

  auto mean = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
  };
  pred.utterance_i = mean(pred.frame_i);
  pred.utterance_q = mean(pred.frame_q);

  for (double x : pred.frame_i) {
    if (!std::isfinite(x)) throw NonFiniteValueError("non-finite intelligibility frame score");
  }
  for (double x : pred.frame_q) {
    if (!std::isfinite(x)) throw NonFiniteValueError("non-finite quality frame score");
  }

  has_forward_ = true;
  return pred;
}

void Model::backward(const LossGrads& grads) {
  if (!has_forward_) throw MissingForwardStateError("model backward before forward");
  if (grads.d_frame_i.size() != frames_ || grads.d_frame_q.size() != frames_) {
    throw ShapeMismatchError("loss grads frame count");
  }
  const double inv_t = 1.0 / static_cast<double>(frames_);

  // Mean-pool chain rule: utterance gradients spread evenly over frames.
  std::vector<double> di(frames_), dq(frames_);
  for (std::size_t t = 0; t < frames_; ++t) {
    di[t] = grads.d_frame_i[t] + grads.d_utterance_i * inv_t;
    dq[t] = grads.d_frame_q[t] + grads.d_utterance_q * inv_t;
  }

  const Tensor d_concat_i = intel_head_->backward(di);
  const Tensor d_concat_q = qual_head_->backward(dq);
  Tensor d_concat(d_concat_i.shape);
  for (std::size_t i = 0; i < d_concat.size(); ++i) {
    d_concat.v[i] = d_concat_i.v[i] + d_concat_q.v[i];
  }

  std::size_t off = 0;
  if (spec_branch_) {
    const std::size_t d = static_cast<std::size_t>(spec_branch_->out_dim);
    Tensor g{frames_, d};
    for (std::size_t t = 0; t < frames_; ++t) {
      std::memcpy(&g.at(t, 0), &d_concat.at(t, off), d * sizeof(double));
    }
    branch_backward(*spec_branch_, g);
    off += d;
  }
  if (scat_branch_) {
    const std::size_t d = static_cast<std::size_t>(scat_branch_->out_dim);
    Tensor g{frames_, d};
    for (std::size_t t = 0; t < frames_; ++t) {
      std::memcpy(&g.at(t, 0), &d_concat.at(t, off), d * sizeof(double));
    }
    branch_backward(*scat_branch_, g);
  }
  has_forward_ = false;
}

void Model::zero_grads() {
  visit_params([](const std::string&, Tensor&, Tensor& grad) { grad.fill(0.0); });
}

void Model::visit_params(const ParamVisitor& fn) {
  int idx = 0;
  if (spec_branch_) {
    for (Conv2d& c : spec_branch_->convs) c.visit_params("spec.conv" + std::to_string(idx++), fn);
  }
  idx = 0;
  if (scat_branch_) {
    for (Conv2d& c : scat_branch_->convs) c.visit_params("scat.conv" + std::to_string(idx++), fn);
  }
  intel_head_->visit_params("intel", fn);
  qual_head_->visit_params("qual", fn);
}

std::size_t Model::param_count() {
  std::size_t n = 0;
  visit_params([&n](const std::string&, Tensor& value, Tensor&) { n += value.size(); });
  return n;
}

void Model::save(const std::filesystem::path& path,
                 const std::string& provenance_json) const {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint for writing: " + path.string());
  f.write(kMagic, 4);
  write_pod(f, kCheckpointVersion);

  write_pod(f, static_cast<std::uint32_t>(config_.conv_blocks.size()));
  for (const ConvBlockConfig& blk : config_.conv_blocks) {
    write_pod(f, static_cast<std::int32_t>(blk.filters));
    write_pod(f, static_cast<std::int32_t>(blk.kernel));
    write_pod(f, static_cast<std::int32_t>(blk.freq_stride));
  }
  write_pod(f, static_cast<std::int32_t>(config_.blstm_hidden));
  write_pod(f, static_cast<std::int32_t>(config_.dense_hidden));
  write_pod(f, static_cast<std::uint64_t>(config_.seed));
  write_pod(f, static_cast<std::uint8_t>(config_.use_spec ? 1 : 0));
  write_pod(f, static_cast<std::uint8_t>(config_.use_scat ? 1 : 0));
  write_pod(f, static_cast<std::int32_t>(config_.spec_bins));
  write_pod(f, static_cast<std::int32_t>(config_.scat_bins));

  write_pod(f, static_cast<std::uint32_t>(provenance_json.size()));
  f.write(provenance_json.data(), static_cast<std::streamsize>(provenance_json.size()));

  // Parameter records in visit order.
  std::size_t n_params = 0;
  const_cast<Model*>(this)->visit_params(
      [&n_params](const std::string&, Tensor&, Tensor&) { ++n_params; });
  write_pod(f, static_cast<std::uint32_t>(n_params));
  const_cast<Model*>(this)->visit_params(
      [&f](const std::string& name, Tensor& value, Tensor&) {
        write_pod(f, static_cast<std::uint16_t>(name.size()));
        f.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_pod(f, static_cast<std::uint8_t>(value.shape.size()));
        for (std::size_t d : value.shape) write_pod(f, static_cast<std::uint32_t>(d));
        f.write(reinterpret_cast<const char*>(value.v.data()),
                static_cast<std::streamsize>(value.v.size() * sizeof(double)));
      });
  if (!f) throw IoError("short write: " + path.string());
}

std::pair<Model, std::string> Model::load(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open checkpoint: " + path.string());
  char magic[4];
  if (!f.read(magic, 4)) throw IoError("empty or truncated checkpoint: " + path.string());
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw VersionMismatchError("bad checkpoint magic in " + path.string());
  }
  const auto version = read_pod<std::uint16_t>(f, "version");
  if (version != kCheckpointVersion) {
    throw VersionMismatchError("unsupported checkpoint version " +
                               std::to_string(version) + " in " + path.string());
  }

  ModelConfig cfg;
  cfg.conv_blocks.clear();
  const auto n_blocks = read_pod<std::uint32_t>(f, "conv block count");
  for (std::uint32_t i = 0; i < n_blocks; ++i) {
    ConvBlockConfig blk;
    blk.filters = read_pod<std::int32_t>(f, "filters");
    blk.kernel = read_pod<std::int32_t>(f, "kernel");
    blk.freq_stride = read_pod<std::int32_t>(f, "freq_stride");
    cfg.conv_blocks.push_back(blk);
  }
  cfg.blstm_hidden = read_pod<std::int32_t>(f, "blstm_hidden");
  cfg.dense_hidden = read_pod<std::int32_t>(f, "dense_hidden");
  cfg.seed = read_pod<std::uint64_t>(f, "seed");
  cfg.use_spec = read_pod<std::uint8_t>(f, "use_spec") != 0;
  cfg.use_scat = read_pod<std::uint8_t>(f, "use_scat") != 0;
  cfg.spec_bins = read_pod<std::int32_t>(f, "spec_bins");
  cfg.scat_bins = read_pod<std::int32_t>(f, "scat_bins");

  const auto json_len = read_pod<std::uint32_t>(f, "json length");
  std::string json(json_len, '\0');
  if (!f.read(json.data(), json_len)) throw IoError("truncated provenance json");

  Model model(cfg);
  const auto n_params = read_pod<std::uint32_t>(f, "param count");
  std::uint32_t seen = 0;
  model.visit_params([&](const std::string& name, Tensor& value, Tensor&) {
    if (seen++ >= n_params) throw VersionMismatchError("missing parameter record: " + name);
    const auto name_len = read_pod<std::uint16_t>(f, "param name length");
    std::string rec_name(name_len, '\0');
    if (!f.read(rec_name.data(), name_len)) throw IoError("truncated param name");
    if (rec_name != name) {
      throw VersionMismatchError("parameter order mismatch: expected " + name +
                                 ", found " + rec_name);
    }
    const auto ndim = read_pod<std::uint8_t>(f, "param rank");
    std::vector<std::size_t> dims(ndim);
    for (auto& d : dims) d = read_pod<std::uint32_t>(f, "param dim");
    if (dims != value.shape) throw VersionMismatchError("parameter shape mismatch: " + name);
    if (!f.read(reinterpret_cast<char*>(value.v.data()),
                static_cast<std::streamsize>(value.v.size() * sizeof(double)))) {
      throw IoError("truncated param data: " + name);
    }
  });
  if (seen != n_params) {
    throw VersionMismatchError("checkpoint has extra parameter records");
  }
  return {std::move(model), std::move(json)};
}

}  // namespace scs::nn
