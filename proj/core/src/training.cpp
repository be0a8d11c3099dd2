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

#include "scatterscore/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "scatterscore/rng.hpp"

namespace scs {
namespace {

// Weight of each task in the optimized objective.
void task_weights(Objective obj, double* wi, double* wq) {
  *wi = (obj == Objective::Quality) ? 0.0 : 1.0;
  *wq = (obj == Objective::Intelligibility) ? 0.0 : 1.0;
}

struct LossAccumulator {
  double l = 0.0, li = 0.0, lq = 0.0;
  std::size_t n = 0;
  void add(const LossTerms& t, Objective obj) {
    l += objective_loss(t, obj);
    li += t.intel;
    lq += t.quality;
    ++n;
  }
  void fill(double* out_l, double* out_li, double* out_lq) const {
    const double inv = n ? 1.0 / static_cast<double>(n) : 0.0;
    *out_l = l * inv;
    *out_li = li * inv;
    *out_lq = lq * inv;
  }
};

}  // namespace

Objective objective_from_string(const std::string& s) {
  if (s == "i") return Objective::Intelligibility;
  if (s == "q") return Objective::Quality;
  if (s == "i+q" || s == "q+i") return Objective::Both;
  throw Error("unknown objective '" + s + "' (expected i, q or i+q)");
}

std::string objective_to_string(Objective obj) {
  switch (obj) {
    case Objective::Intelligibility: return "i";
    case Objective::Quality: return "q";
    case Objective::Both: break;
  }
  return "i+q";
}

LossTerms multitask_loss(const nn::Predictions& pred, double target_i, double target_q,
                         nn::LossGrads* grads, Objective objective) {
  const std::size_t t_n = pred.frames;
  if (t_n == 0 || pred.frame_i.size() != t_n || pred.frame_q.size() != t_n) {
    throw EmptyPredictionError("predictions carry no frames");
  }
  const double inv_t = 1.0 / static_cast<double>(t_n);

  LossTerms terms;
  const double du_i = target_i - pred.utterance_i;
  const double du_q = target_q - pred.utterance_q;
  double frame_i_sum = 0.0, frame_q_sum = 0.0;
  for (std::size_t t = 0; t < t_n; ++t) {
    const double di = target_i - pred.frame_i[t];
    const double dq = target_q - pred.frame_q[t];
    frame_i_sum += di * di;
    frame_q_sum += dq * dq;
  }
  terms.intel = du_i * du_i + frame_i_sum * inv_t;
  terms.quality = du_q * du_q + frame_q_sum * inv_t;
  terms.total = terms.intel + terms.quality;

  if (grads != nullptr) {
    double wi, wq;
    task_weights(objective, &wi, &wq);
    grads->d_utterance_i = wi * 2.0 * (pred.utterance_i - target_i);
    grads->d_utterance_q = wq * 2.0 * (pred.utterance_q - target_q);
    grads->d_frame_i.resize(t_n);
    grads->d_frame_q.resize(t_n);
    for (std::size_t t = 0; t < t_n; ++t) {
      grads->d_frame_i[t] = wi * 2.0 * inv_t * (pred.frame_i[t] - target_i);
      grads->d_frame_q[t] = wq * 2.0 * inv_t * (pred.frame_q[t] - target_q);
    }
  }
  return terms;
}

double objective_loss(const LossTerms& terms, Objective objective) {
  double wi, wq;
  task_weights(objective, &wi, &wq);
  return wi * terms.intel + wq * terms.quality;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_train_val(
    std::size_t n, std::uint64_t seed, double val_fraction) {
  if (n < 10) {
    throw DatasetTooSmallError("need at least 10 training rows, got " + std::to_string(n));
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(seed, 0x51u));
  rng.shuffle(order);

  const std::size_t n_val =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::floor(static_cast<double>(n) * val_fraction)));
  std::vector<std::size_t> val(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(val.begin(), val.end());
  std::sort(train.begin(), train.end());
  return {std::move(train), std::move(val)};
}

std::string epoch_record_to_json(const EpochRecord& rec) {
  nlohmann::json j{{"epoch", rec.epoch},       {"train_L", rec.train_l},
                   {"train_Li", rec.train_li}, {"train_Lq", rec.train_lq},
                   {"val_L", rec.val_l},       {"val_Li", rec.val_li},
                   {"val_Lq", rec.val_lq},     {"selected", rec.selected}};
  return j.dump();
}

TrainResult train(const std::vector<ScoredUtterance>& dataset,
                  const nn::ModelConfig& model_config, const TrainConfig& train_config) {
  auto [train_idx, val_idx] =
      split_train_val(dataset.size(), train_config.seed, train_config.val_fraction);

  nn::Model model(model_config);

  // Adam state in parameter visit order.
  std::vector<nn::Tensor> m_state, v_state;
  model.visit_params([&](const std::string&, nn::Tensor& value, nn::Tensor&) {
    m_state.emplace_back(value.shape);
    v_state.emplace_back(value.shape);
  });
  std::int64_t step = 0;

  TrainResult result{nn::Model(model_config), {}, 0.0, 0};
  result.model = model;
  double best_val = std::numeric_limits<double>::infinity();
  int wait = 0;

  auto eval_loss = [&](nn::Model& mdl, const ScoredUtterance& row) {
    nn::Predictions pred;
    try {
      pred = mdl.forward(*row.features);
    } catch (const NonFiniteValueError& e) {
      throw NonFiniteLossError(row.utterance_id, e.what());
    }
    return pred;
  };

  for (int epoch = 1; epoch <= train_config.max_epochs; ++epoch) {
    std::vector<std::size_t> order = train_idx;
    Rng rng(mix_seed(train_config.seed, static_cast<std::uint64_t>(epoch)));
    rng.shuffle(order);

    LossAccumulator train_acc;
    for (std::size_t idx : order) {
      const ScoredUtterance& row = dataset[idx];
      const nn::Predictions pred = eval_loss(model, row);
      nn::LossGrads grads;
      const LossTerms terms = multitask_loss(pred, row.target_i, row.target_q, &grads,
                                             train_config.objective);
      if (!std::isfinite(terms.total)) {
        throw NonFiniteLossError(row.utterance_id, "loss overflow");
      }
      train_acc.add(terms, train_config.objective);

      model.zero_grads();
      model.backward(grads);
      ++step;
      std::size_t p = 0;
      model.visit_params([&](const std::string&, nn::Tensor& value, nn::Tensor& grad) {
        nn::adam_update(value, grad, m_state[p], v_state[p], step, train_config.adam);
        ++p;
      });
    }

    LossAccumulator val_acc;
    for (std::size_t idx : val_idx) {
      const ScoredUtterance& row = dataset[idx];
      const nn::Predictions pred = eval_loss(model, row);
      const LossTerms terms = multitask_loss(pred, row.target_i, row.target_q);
      val_acc.add(terms, train_config.objective);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    train_acc.fill(&rec.train_l, &rec.train_li, &rec.train_lq);
    val_acc.fill(&rec.val_l, &rec.val_li, &rec.val_lq);
    rec.selected = rec.val_l < best_val;
    result.log.push_back(rec);

    if (rec.selected) {
      best_val = rec.val_l;
      result.model = model;
      result.best_epoch = epoch;
      result.best_val_loss = best_val;
      wait = 0;
    } else {
      ++wait;
      if (wait >= std::max(train_config.patience, 0)) break;
    }
  }
  return result;
}

}  // namespace scs
