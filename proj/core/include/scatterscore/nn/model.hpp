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

#ifndef SCATTERSCORE_NN_MODEL_HPP_
#define SCATTERSCORE_NN_MODEL_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scatterscore/features.hpp"
#include "scatterscore/nn/layers.hpp"

namespace scs::nn {

/// Architecture knobs. The the two branches share the conv block layout but
/// no parameters; each head owns its BLSTM and dense stack. The concrete
/// default sizes are this toolkit's stand-ins, not published values; override
/// them through the config file when experimenting.
struct ModelConfig {
  std::vector<ConvBlockConfig> conv_blocks = {
      {16, 3, 3}, {32, 3, 3}, {64, 3, 3}};
  int blstm_hidden = 64;
  int dense_hidden = 64;
  std::uint64_t seed = 1;
  bool use_spec = true;
  bool use_scat = true;
  int spec_bins = 257;  // input width of the spectrogram branch
  int scat_bins = 0;    // input width of the scattering branch (from the bank)
};

/// Frame- and utterance-level outputs for one utterance. The utterance score
/// is the mean of the frame scores (global average pooling).
struct Predictions {
  std::vector<double> frame_i;
  std::vector<double> frame_q;
  double utterance_i = 0.0;
  double utterance_q = 0.0;
  std::size_t frames = 0;
};

/// Loss gradients wrt the model outputs, treating utterance and frame scores
/// as independent loss inputs; the mean-pool chain rule is applied inside
/// Model::backward.
struct LossGrads {
  double d_utterance_i = 0.0;
  double d_utterance_q = 0.0;
  std::vector<double> d_frame_i;
  std::vector<double> d_frame_q;
};

/// Dual-branch conv front end feeding two recurrent heads. The intelligibility
/// and quality heads consume the same concatenated branch output but share no
/// parameters with each other.
class Model {
 public:
  explicit Model(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }

  Predictions forward(const FeatureSample& sample);
  /// Accumulates parameter gradients; requires a preceding forward.
  void backward(const LossGrads& grads);
  void zero_grads();

  void visit_params(const ParamVisitor& fn);
  std::size_t param_count();

  /// Checkpoint: magic "INQM", version u16, binary model config, a UTF-8
  /// provenance JSON blob (stored verbatim), then one record per parameter
  /// (name, shape, float64 little-endian data). Save/load is bit-exact.
  void save(const std::filesystem::path& path, const std::string& provenance_json) const;
  static std::pair<Model, std::string> load(const std::filesystem::path& path);

 private:
  struct Branch {
    std::vector<Conv2d> convs;
    std::vector<Relu> relus;
    int in_bins = 0;
    int out_dim = 0;  // flattened per-frame width after the conv stack
  };
  struct Head {
    Head(int in_dim, int blstm_hidden, int dense_hidden);
    Blstm blstm;
    Dense dense1;
    Relu relu;
    Dense dense2;
    /// frame scores T; fills caches for backward
    std::vector<double> forward(const Tensor& concat);
    Tensor backward(const std::vector<double>& d_frames);
    void visit_params(const std::string& prefix, const ParamVisitor& fn);
  };

  static Branch make_branch(const ModelConfig& config, int in_bins);
  Tensor branch_forward(Branch& br, const Mat& input);
  void branch_backward(Branch& br, const Tensor& grad_flat);
  void init_params();

  ModelConfig config_;
  std::optional<Branch> spec_branch_;
  std::optional<Branch> scat_branch_;
  std::optional<Head> intel_head_;
  std::optional<Head> qual_head_;
  std::size_t frames_ = 0;
  bool has_forward_ = false;
};

}  // namespace scs::nn

#endif  // SCATTERSCORE_NN_MODEL_HPP_
