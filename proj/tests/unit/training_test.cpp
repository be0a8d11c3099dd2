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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "scatterscore/errors.hpp"
#include "scatterscore/rng.hpp"
#include "scatterscore/training.hpp"

namespace fs = std::filesystem;
using namespace scs;

namespace {

nn::Predictions make_pred(std::vector<double> fi, std::vector<double> fq) {
  nn::Predictions p;
  p.frames = fi.size();
  p.frame_i = std::move(fi);
  p.frame_q = std::move(fq);
  double si = 0.0, sq = 0.0;
  for (double v : p.frame_i) si += v;
  for (double v : p.frame_q) sq += v;
  p.utterance_i = si / static_cast<double>(p.frames);
  p.utterance_q = sq / static_cast<double>(p.frames);
  return p;
}

std::shared_ptr<FeatureSample> random_features(std::size_t frames, int spec_bins,
                                               int scat_bins, std::uint64_t seed,
                                               const std::string& id) {
  Rng rng(seed);
  auto s = std::make_shared<FeatureSample>();
  s->frames = frames;
  s->spec = Mat(frames, static_cast<std::size_t>(spec_bins));
  s->scat = Mat(frames, static_cast<std::size_t>(scat_bins));
  for (double& x : s->spec.v) x = rng.uniform(0.0, 1.0);
  for (double& x : s->scat.v) x = rng.uniform(0.0, 1.0);
  s->utterance_id = id;
  return s;
}

// 12 rows with targets that are a fixed function of the features' seed.
std::vector<ScoredUtterance> tiny_dataset() {
  std::vector<ScoredUtterance> rows;
  for (int u = 0; u < 12; ++u) {
    ScoredUtterance row;
    row.utterance_id = "u" + std::to_string(u);
    row.features = random_features(6, 9, 7, 1000 + static_cast<std::uint64_t>(u),
                                   row.utterance_id);
    row.target_i = 0.5 + 0.35 * u;  // spread over [0.5, 4.35]
    row.target_q = 1.0 + 0.3 * u;
    rows.push_back(std::move(row));
  }
  return rows;
}

nn::ModelConfig tiny_model() {
  nn::ModelConfig cfg;
  cfg.conv_blocks = {{2, 3, 3}};
  cfg.blstm_hidden = 4;
  cfg.dense_hidden = 4;
  cfg.seed = 5;
  cfg.spec_bins = 9;
  cfg.scat_bins = 7;
  return cfg;
}

}  // namespace

TEST_CASE("multitask loss reproduces the hand-computed example") {
  // target 4, utterance prediction 3, both frame predictions 3:
  // L_i = (4-3)^2 + (1/2)((4-3)^2 + (4-3)^2) = 2.0
  const nn::Predictions pred = make_pred({3.0, 3.0}, {2.0, 2.0});
  const LossTerms terms = multitask_loss(pred, 4.0, 2.0);
  CHECK(terms.intel == 2.0);
  CHECK(terms.quality == 0.0);
  CHECK(terms.total == 2.0);
}

TEST_CASE("loss is zero iff predictions equal targets everywhere") {
  const nn::Predictions exact = make_pred({3.5, 3.5, 3.5}, {4.0, 4.0, 4.0});
  const LossTerms zero = multitask_loss(exact, 3.5, 4.0);
  CHECK(zero.total == 0.0);

  const nn::Predictions off = make_pred({3.5, 3.6, 3.5}, {4.0, 4.0, 4.0});
  CHECK(multitask_loss(off, 3.5, 4.0).total > 0.0);
}

TEST_CASE("loss decomposes exactly as L = L_i + L_q") {
  Rng rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> fi(4), fq(4);
    for (double& v : fi) v = rng.uniform(-1.0, 6.0);
    for (double& v : fq) v = rng.uniform(-1.0, 6.0);
    const nn::Predictions pred = make_pred(fi, fq);
    const LossTerms t = multitask_loss(pred, rng.uniform(0.0, 5.0), rng.uniform(1.0, 5.0));
    CHECK(t.total == t.intel + t.quality);
    CHECK(t.intel >= 0.0);
    CHECK(t.quality >= 0.0);
  }
}

TEST_CASE("loss gradients match finite differences") {
  Rng rng(7);
  std::vector<double> fi(5), fq(5);
  for (double& v : fi) v = rng.uniform(0.0, 5.0);
  for (double& v : fq) v = rng.uniform(1.0, 5.0);
  nn::Predictions pred = make_pred(fi, fq);
  const double ti = 3.1, tq = 2.6;

  nn::LossGrads grads;
  multitask_loss(pred, ti, tq, &grads, Objective::Both);

  // gradients treat utterance and frame predictions as independent inputs
  const auto loss = [&]() { return multitask_loss(pred, ti, tq).total; };
  for (std::size_t t = 0; t < 5; ++t) {
    const double fd_i = oracle::central_diff(&pred.frame_i[t], 1e-6, loss);
    CHECK(oracle::rel_err(fd_i, grads.d_frame_i[t], 1e-8) < 1e-8);
    const double fd_q = oracle::central_diff(&pred.frame_q[t], 1e-6, loss);
    CHECK(oracle::rel_err(fd_q, grads.d_frame_q[t], 1e-8) < 1e-8);
  }
  const double fd_ui = oracle::central_diff(&pred.utterance_i, 1e-6, loss);
  CHECK(oracle::rel_err(fd_ui, grads.d_utterance_i, 1e-8) < 1e-8);
  const double fd_uq = oracle::central_diff(&pred.utterance_q, 1e-6, loss);
  CHECK(oracle::rel_err(fd_uq, grads.d_utterance_q, 1e-8) < 1e-8);

  nn::Predictions empty;
  CHECK_THROWS_AS(multitask_loss(empty, 1.0, 1.0), EmptyPredictionError);
}

TEST_CASE("objective weighting zeroes the unused task's gradients") {
  const nn::Predictions pred = make_pred({1.0, 2.0}, {3.0, 1.0});
  nn::LossGrads gi;
  multitask_loss(pred, 4.0, 4.0, &gi, Objective::Intelligibility);
  CHECK(gi.d_utterance_q == 0.0);
  for (double g : gi.d_frame_q) CHECK(g == 0.0);
  CHECK(gi.d_utterance_i != 0.0);

  nn::LossGrads gq;
  multitask_loss(pred, 4.0, 4.0, &gq, Objective::Quality);
  CHECK(gq.d_utterance_i == 0.0);
  for (double g : gq.d_frame_i) CHECK(g == 0.0);

  CHECK(objective_from_string("i") == Objective::Intelligibility);
  CHECK(objective_from_string("i+q") == Objective::Both);
  CHECK(objective_to_string(Objective::Quality) == "q");
  CHECK_THROWS_AS(objective_from_string("both"), Error);
}

TEST_CASE("split_train_val sizes, determinism and disjointness") {
  auto [train, val] = split_train_val(100, 42);
  CHECK(train.size() == 90);
  CHECK(val.size() == 10);

  auto [t2, v2] = split_train_val(10, 42);
  CHECK(t2.size() == 9);
  CHECK(v2.size() == 1);

  // disjoint and exhaustive
  std::set<std::size_t> all(train.begin(), train.end());
  all.insert(val.begin(), val.end());
  CHECK(all.size() == 100);

  auto [t3, v3] = split_train_val(100, 42);
  CHECK(t3 == train);
  CHECK(v3 == val);
  auto [t4, v4] = split_train_val(100, 43);
  CHECK(v4 != val);

  CHECK_THROWS_AS(split_train_val(9, 1), DatasetTooSmallError);
}

TEST_CASE("training overfits a tiny dataset and logs every epoch") {
  const auto rows = tiny_dataset();
  TrainConfig tc;
  tc.max_epochs = 60;
  tc.patience = 60;
  tc.adam.lr = 1e-2;  // tiny net, aggressive rate converges in seconds
  tc.seed = 9;

  const TrainResult res = train(rows, tiny_model(), tc);
  REQUIRE(!res.log.empty());
  CHECK(res.log.front().epoch == 1);
  CHECK(res.log.back().train_l < res.log.front().train_l / 10.0);

  // the returned model's validation loss is the minimum over the log
  double min_val = res.log.front().val_l;
  for (const EpochRecord& r : res.log) min_val = std::min(min_val, r.val_l);
  CHECK(res.best_val_loss == min_val);

  // selected rows are exactly the strictly-improving ones
  double best = std::numeric_limits<double>::infinity();
  for (const EpochRecord& r : res.log) {
    CHECK(r.selected == (r.val_l < best));
    best = std::min(best, r.val_l);
  }
}

TEST_CASE("patience zero stops after the first non-improving epoch") {
  const auto rows = tiny_dataset();
  TrainConfig tc;
  tc.max_epochs = 50;
  tc.patience = 0;
  tc.adam.lr = 0.0;  // loss can never improve after epoch 1
  tc.seed = 4;
  const TrainResult res = train(rows, tiny_model(), tc);
  CHECK(res.log.size() == 2);  // epoch 1 sets the best, epoch 2 fails to improve
}

TEST_CASE("training is deterministic given seed and data") {
  const auto rows = tiny_dataset();
  TrainConfig tc;
  tc.max_epochs = 5;
  tc.patience = 10;
  tc.seed = 17;

  TrainResult a = train(rows, tiny_model(), tc);
  TrainResult b = train(rows, tiny_model(), tc);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(epoch_record_to_json(a.log[i]) == epoch_record_to_json(b.log[i]));
  }

  const fs::path dir = fs::temp_directory_path() / "scs_training_test";
  fs::create_directories(dir);
  a.model.save(dir / "a.ckpt", "{}");
  b.model.save(dir / "b.ckpt", "{}");
  std::ifstream fa(dir / "a.ckpt", std::ios::binary), fb(dir / "b.ckpt", std::ios::binary);
  const std::string ba((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string bb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(ba == bb);
}

TEST_CASE("objective i leaves the quality head untouched") {
  const auto rows = tiny_dataset();
  TrainConfig tc;
  tc.max_epochs = 2;
  tc.patience = 10;
  tc.seed = 21;
  tc.objective = Objective::Intelligibility;

  const nn::ModelConfig mc = tiny_model();
  nn::Model init(mc);
  std::vector<double> init_qual;
  init.visit_params([&](const std::string& name, nn::Tensor& value, nn::Tensor&) {
    if (name.rfind("qual.", 0) == 0) {
      init_qual.insert(init_qual.end(), value.v.begin(), value.v.end());
    }
  });

  TrainResult res = train(rows, mc, tc);
  std::vector<double> trained_qual, trained_intel;
  std::vector<double> init_intel;
  init.visit_params([&](const std::string& name, nn::Tensor& value, nn::Tensor&) {
    if (name.rfind("intel.", 0) == 0) {
      init_intel.insert(init_intel.end(), value.v.begin(), value.v.end());
    }
  });
  res.model.visit_params([&](const std::string& name, nn::Tensor& value, nn::Tensor&) {
    if (name.rfind("qual.", 0) == 0) {
      trained_qual.insert(trained_qual.end(), value.v.begin(), value.v.end());
    }
    if (name.rfind("intel.", 0) == 0) {
      trained_intel.insert(trained_intel.end(), value.v.begin(), value.v.end());
    }
  });
  CHECK(trained_qual == init_qual);    // zero gradients, bitwise unchanged
  CHECK(trained_intel != init_intel);  // the optimized head moved
}

TEST_CASE("non-finite forward aborts with the utterance name") {
  auto rows = tiny_dataset();
  // Corrupt one sample so the forward pass overflows.
  auto bad = std::make_shared<FeatureSample>(*rows[3].features);
  for (double& x : bad->spec.v) x = 1e200;
  rows[3].features = bad;
  rows[3].utterance_id = "poisoned";

  TrainConfig tc;
  tc.max_epochs = 1;
  tc.seed = 2;
  try {
    train(rows, tiny_model(), tc);
    FAIL("expected NonFiniteLossError");
  } catch (const NonFiniteLossError& e) {
    CHECK(e.utterance_id() == "poisoned");
  }
}

TEST_CASE("epoch records serialize as stable JSON lines") {
  EpochRecord rec;
  rec.epoch = 3;
  rec.train_l = 1.5;
  rec.train_li = 1.0;
  rec.train_lq = 0.5;
  rec.val_l = 2.0;
  rec.val_li = 1.25;
  rec.val_lq = 0.75;
  rec.selected = true;
  const std::string line = epoch_record_to_json(rec);
  CHECK(line.find("\"epoch\":3") != std::string::npos);
  CHECK(line.find("\"selected\":true") != std::string::npos);
  CHECK(line.find('\n') == std::string::npos);
}
