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

#include "scatterscore/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "scatterscore/errors.hpp"

namespace scs {
namespace {

// Neumaier compensated summation; keeps the 1e-12 oracle tolerances honest
// for long vectors.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = s_ + x;
    if (std::abs(s_) >= std::abs(x)) {
      c_ += (s_ - t) + x;
    } else {
      c_ += (x - t) + s_;
    }
    s_ = t;
  }
  double value() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

double compensated_mean(const std::vector<double>& xs) {
  CompensatedSum s;
  for (double x : xs) s.add(x);
  return s.value() / static_cast<double>(xs.size());
}

void validate(const ScorePairs& p) {
  if (p.predicted.size() != p.actual.size()) {
    throw LengthMismatchError("score vectors have different lengths (" +
                              std::to_string(p.predicted.size()) + " vs " +
                              std::to_string(p.actual.size()) + ")");
  }
  if (p.predicted.size() < 2) {
    throw TooFewPointsError("need at least 2 score pairs, got " +
                            std::to_string(p.predicted.size()));
  }
  for (double x : p.predicted) {
    if (!std::isfinite(x)) throw Error("non-finite predicted score");
  }
  for (double x : p.actual) {
    if (!std::isfinite(x)) throw Error("non-finite actual score");
  }
}

bool is_constant(const std::vector<double>& xs) {
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  return *lo == *hi;
}

}  // namespace

double mse(const ScorePairs& p) {
  validate(p);
  CompensatedSum s;
  for (std::size_t i = 0; i < p.predicted.size(); ++i) {
    const double d = p.predicted[i] - p.actual[i];
    s.add(d * d);
  }
  return s.value() / static_cast<double>(p.predicted.size());
}

double pcc(const ScorePairs& p) {
  validate(p);
  if (is_constant(p.predicted)) throw ZeroVarianceError("predicted vector is constant");
  if (is_constant(p.actual)) throw ZeroVarianceError("actual vector is constant");

  const double mx = compensated_mean(p.predicted);
  const double my = compensated_mean(p.actual);
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < p.predicted.size(); ++i) {
    const double dx = p.predicted[i] - mx;
    const double dy = p.actual[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });

  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    // positions i..j (0-based) share the mean 1-based rank
    const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double srcc(const ScorePairs& p) {
  validate(p);
  ScorePairs ranked{average_ranks(p.predicted), average_ranks(p.actual)};
  return pcc(ranked);
}

LinRegResult linreg_r2(const std::vector<double>& x, const std::vector<double>& y) {
  return linreg_r2_heldout(x, y, x, y);
}

LinRegResult linreg_r2_heldout(const std::vector<double>& x_fit,
                               const std::vector<double>& y_fit,
                               const std::vector<double>& x_eval,
                               const std::vector<double>& y_eval) {
  ScorePairs fit{x_fit, y_fit};
  validate(fit);
  ScorePairs eval{x_eval, y_eval};
  validate(eval);
  if (is_constant(x_fit)) throw ZeroVarianceError("regressor vector is constant");

  const double mx = compensated_mean(x_fit);
  const double my = compensated_mean(y_fit);
  CompensatedSum sxy, sxx;
  for (std::size_t i = 0; i < x_fit.size(); ++i) {
    const double dx = x_fit[i] - mx;
    sxy.add(dx * (y_fit[i] - my));
    sxx.add(dx * dx);
  }

  LinRegResult out;
  out.slope = sxy.value() / sxx.value();
  out.intercept = my - out.slope * mx;

  const double me = compensated_mean(y_eval);
  CompensatedSum ss_res, ss_tot;
  for (std::size_t i = 0; i < x_eval.size(); ++i) {
    const double r = y_eval[i] - (out.slope * x_eval[i] + out.intercept);
    ss_res.add(r * r);
    const double d = y_eval[i] - me;
    ss_tot.add(d * d);
  }
  if (ss_tot.value() == 0.0) {
    throw ZeroVarianceError("evaluation targets are constant");
  }
  out.r2 = 1.0 - ss_res.value() / ss_tot.value();
  return out;
}

}  // namespace scs
