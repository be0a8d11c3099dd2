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

#ifndef SCATTERSCORE_TRAINING_HPP_
#define SCATTERSCORE_TRAINING_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "scatterscore/features.hpp"
#include "scatterscore/nn/adam.hpp"
#include "scatterscore/nn/model.hpp"

namespace scs {

/// Which loss terms drive the optimizer (the ablation axis; the full model
/// uses Both). Disabled terms are still evaluated and logged, just not
/// backpropagated.
enum class Objective { Intelligibility, Quality, Both };

Objective objective_from_string(const std::string& s);  // "i" | "q" | "i+q"
std::string objective_to_string(Objective obj);

/// One training row: a feature sample plus its targets. target_i is on the
/// rescaled 0-5 scale, target_q on the native 1-5 scale. Rating-level rows of
/// the same utterance share the FeatureSample.
struct ScoredUtterance {
  std::shared_ptr<const FeatureSample> features;
  double target_i = 0.0;
  double target_q = 0.0;
  std::string utterance_id;
};

struct LossTerms {
  double total = 0.0;
  double intel = 0.0;
  double quality = 0.0;
};

/// Per-utterance multi-task loss:
///   L_i = (target_i - I)^2 + (1/T) * sum_t (target_i - i_t)^2
///   L_q analogously, L = L_i + L_q.
/// When `grads` is non-null it receives dL/d(outputs) for the terms selected
/// by `objective` (utterance and frame scores treated as independent inputs).
LossTerms multitask_loss(const nn::Predictions& pred, double target_i, double target_q,
                         nn::LossGrads* grads = nullptr,
                         Objective objective = Objective::Both);

double objective_loss(const LossTerms& terms, Objective objective);

/// Deterministic split of n rows: floor(n * val_fraction) (at least 1) go to
/// validation. Returns (train indices, val indices), each sorted ascending,
/// disjoint and exhaustive. Throws DatasetTooSmallError when n < 10.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_val(
    std::size_t n, std::uint64_t seed, double val_fraction = 0.1);

struct TrainConfig {
  int max_epochs = 100;
  int patience = 10;
  nn::AdamConfig adam;
  double val_fraction = 0.1;
  std::uint64_t seed = 1;
  Objective objective = Objective::Both;
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_l = 0.0, train_li = 0.0, train_lq = 0.0;
  double val_l = 0.0, val_li = 0.0, val_lq = 0.0;
  bool selected = false;
};

/// JSON-lines record for the training log.
std::string epoch_record_to_json(const EpochRecord& rec);

struct TrainResult {
  nn::Model model;  // checkpoint with the lowest validation loss
  std::vector<EpochRecord> log;
  double best_val_loss = 0.0;
  int best_epoch = 0;
};

/// One optimizer step per utterance, shuffled order each epoch; keeps the
/// checkpoint with the lowest validation loss and stops after `patience`
/// consecutive epochs without improvement. Deterministic given (seeds, data).
/// Throws DatasetTooSmallError or NonFiniteLossError (naming the utterance).
TrainResult train(const std::vector<ScoredUtterance>& dataset,
                  const nn::ModelConfig& model_config, const TrainConfig& train_config);

}  // namespace scs

#endif  // SCATTERSCORE_TRAINING_HPP_
