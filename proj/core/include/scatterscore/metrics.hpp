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

#ifndef SCATTERSCORE_METRICS_HPP_
#define SCATTERSCORE_METRICS_HPP_

#include <vector>

namespace scs {

/// Paired predicted/actual score vectors. Metrics require equal lengths,
/// n >= 2 and finite values.
struct ScorePairs {
  std::vector<double> predicted;
  std::vector<double> actual;
};

/// Mean squared error, (1/n) * sum (pred - actual)^2.
double mse(const ScorePairs& p);

/// Sample Pearson correlation. Throws ZeroVarianceError if either vector is
/// constant.
double pcc(const ScorePairs& p);

/// Spearman rank correlation: Pearson on tie-averaged (fractional) ranks.
double srcc(const ScorePairs& p);

/// Tie-averaged ranks, 1-based (ties receive the mean of their positions).
std::vector<double> average_ranks(const std::vector<double>& xs);

struct LinRegResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y ~ slope*x + intercept with in-sample
/// r2 = 1 - SS_res/SS_tot. Throws ZeroVarianceError if x is constant.
LinRegResult linreg_r2(const std::vector<double>& x, const std::vector<double>& y);

/// Fit on (x_fit, y_fit), score r2 on (x_eval, y_eval) around the evaluation
/// set's own mean; out-of-sample r2 may be negative.
LinRegResult linreg_r2_heldout(const std::vector<double>& x_fit,
                               const std::vector<double>& y_fit,
                               const std::vector<double>& x_eval,
                               const std::vector<double>& y_eval);

}  // namespace scs

#endif  // SCATTERSCORE_METRICS_HPP_
