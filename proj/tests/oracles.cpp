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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace oracle {
namespace {

std::vector<std::complex<double>> root_table(std::size_t n, double sign) {
  std::vector<std::complex<double>> roots(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(r) /
                       static_cast<double>(n);
    roots[r] = {std::cos(ang), std::sin(ang)};
  }
  return roots;
}

// phi average of an envelope at one output point t0 (circular).
double phi_average_at(const std::vector<double>& env,
                      const std::vector<std::complex<double>>& phi_t, std::size_t t0) {
  const std::size_t n = env.size();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += phi_t[k].real() * env[(t0 + n - k) % n];
  }
  return acc;
}

std::vector<double> modulus(const std::vector<std::complex<double>>& y) {
  std::vector<double> env(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) env[i] = std::abs(y[i]);
  return env;
}

}  // namespace

std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  const auto roots = root_table(n, -1.0);
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc{0.0, 0.0};
    std::size_t idx = 0;
    for (std::size_t m = 0; m < n; ++m) {
      acc += x[m] * roots[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    out[k] = acc;
  }
  return out;
}

std::vector<std::complex<double>> naive_dft_real(const std::vector<double>& x) {
  std::vector<std::complex<double>> xc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xc[i] = x[i];
  return naive_dft(xc);
}

std::vector<std::complex<double>> time_filter(const std::vector<double>& freq_response) {
  const std::size_t n = freq_response.size();
  const auto roots = root_table(n, 1.0);
  std::vector<std::complex<double>> h(n);
  for (std::size_t t = 0; t < n; ++t) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t m = 0; m < n; ++m) {
      re += freq_response[m] * roots[idx].real();
      im += freq_response[m] * roots[idx].imag();
      idx += t;
      if (idx >= n) idx -= n;
    }
    h[t] = std::complex<double>(re, im) / static_cast<double>(n);
  }
  return h;
}

std::vector<std::complex<double>> circular_conv(const std::vector<double>& x,
                                                const std::vector<std::complex<double>>& h) {
  const std::size_t n = x.size();
  std::vector<double> yre(n, 0.0), yim(n, 0.0);
  // Scatter ordering keeps both inner loops contiguous over t.
  for (std::size_t k = 0; k < n; ++k) {
    const double hre = h[k].real();
    const double him = h[k].imag();
    const double* xs = x.data();
    double* re = yre.data();
    double* im = yim.data();
    for (std::size_t t = k; t < n; ++t) {
      re[t] += hre * xs[t - k];
      im[t] += him * xs[t - k];
    }
    for (std::size_t t = 0; t < k; ++t) {
      re[t] += hre * xs[n + t - k];
      im[t] += him * xs[n + t - k];
    }
  }
  std::vector<std::complex<double>> y(n);
  for (std::size_t t = 0; t < n; ++t) y[t] = {yre[t], yim[t]};
  return y;
}

scs::Mat scatter_order1_naive(const std::vector<double>& x, const scs::FilterBank& fb) {
  const std::size_t n = fb.signal_length;
  const std::size_t hop = std::size_t{1} << fb.config.j;
  const std::size_t frames = n / hop;
  const auto phi_t = time_filter(fb.phi);

  scs::Mat out(frames, fb.psi1.size());
  for (std::size_t l = 0; l < fb.psi1.size(); ++l) {
    const auto psi_t = time_filter(fb.psi1[l].response);
    const auto env = modulus(circular_conv(x, psi_t));
    for (std::size_t f = 0; f < frames; ++f) {
      out(f, l) = phi_average_at(env, phi_t, f * hop);
    }
  }
  return out;
}

scs::Mat scatter_order2_naive(const std::vector<double>& x, const scs::FilterBank& fb) {
  const std::size_t n = fb.signal_length;
  const std::size_t hop = std::size_t{1} << fb.config.j;
  const std::size_t frames = n / hop;
  const auto phi_t = time_filter(fb.phi);

  std::vector<std::vector<std::complex<double>>> psi2_t(fb.psi2.size());
  for (std::size_t l = 0; l < fb.psi2.size(); ++l) {
    psi2_t[l] = time_filter(fb.psi2[l].response);
  }

  scs::Mat out(frames, fb.pairs.size());
  int current_i1 = -1;
  std::vector<double> env1;
  std::size_t col = 0;
  for (const auto& [i1, i2] : fb.pairs) {
    if (i1 != current_i1) {
      const auto psi_t = time_filter(fb.psi1[static_cast<std::size_t>(i1)].response);
      env1 = modulus(circular_conv(x, psi_t));
      current_i1 = i1;
    }
    const auto env2 =
        modulus(circular_conv(env1, psi2_t[static_cast<std::size_t>(i2)]));
    for (std::size_t f = 0; f < frames; ++f) {
      out(f, col) = phi_average_at(env2, phi_t, f * hop);
    }
    ++col;
  }
  return out;
}

double rel_l2(const scs::Mat& a, const scs::Mat& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double d = a.v[i] - b.v[i];
    num += d * d;
    den += b.v[i] * b.v[i];
  }
  return std::sqrt(num) / std::sqrt(den);
}

double brute_mse(const std::vector<double>& p, const std::vector<double>& a) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const long double d = static_cast<long double>(p[i]) - a[i];
    s += d * d;
  }
  return static_cast<double>(s / static_cast<long double>(p.size()));
}

double brute_pcc(const std::vector<double>& p, const std::vector<double>& a) {
  const std::size_t n = p.size();
  long double mp = 0.0L, ma = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    mp += p[i];
    ma += a[i];
  }
  mp /= n;
  ma /= n;
  long double sxy = 0.0L, sxx = 0.0L, syy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    const long double dx = p[i] - mp;
    const long double dy = a[i] - ma;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

std::vector<double> brute_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (xs[j] < xs[i]) ++less;
      if (j != i && xs[j] == xs[i]) ++equal;
    }
    ranks[i] = 1.0 + static_cast<double>(less) + static_cast<double>(equal) / 2.0;
  }
  return ranks;
}

double brute_srcc(const std::vector<double>& p, const std::vector<double>& a) {
  return brute_pcc(brute_ranks(p), brute_ranks(a));
}

BruteLinReg brute_linreg(const std::vector<double>& x, const std::vector<double>& y) {
  return brute_linreg_heldout(x, y, x, y);
}

BruteLinReg brute_linreg_heldout(const std::vector<double>& x_fit,
                                 const std::vector<double>& y_fit,
                                 const std::vector<double>& x_eval,
                                 const std::vector<double>& y_eval) {
  const std::size_t n = x_fit.size();
  long double sx = 0.0L, sy = 0.0L, sxx = 0.0L, sxy = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x_fit[i];
    sy += y_fit[i];
    sxx += static_cast<long double>(x_fit[i]) * x_fit[i];
    sxy += static_cast<long double>(x_fit[i]) * y_fit[i];
  }
  const long double denom = static_cast<long double>(n) * sxx - sx * sx;
  const long double slope = (static_cast<long double>(n) * sxy - sx * sy) / denom;
  const long double intercept = (sy - slope * sx) / static_cast<long double>(n);

  long double me = 0.0L;
  for (double v : y_eval) me += v;
  me /= static_cast<long double>(y_eval.size());
  long double ss_res = 0.0L, ss_tot = 0.0L;
  for (std::size_t i = 0; i < x_eval.size(); ++i) {
    const long double r = y_eval[i] - (slope * x_eval[i] + intercept);
    ss_res += r * r;
    const long double d = y_eval[i] - me;
    ss_tot += d * d;
  }
  return {static_cast<double>(slope), static_cast<double>(intercept),
          static_cast<double>(1.0L - ss_res / ss_tot)};
}

double central_diff(double* param, double eps, const std::function<double()>& f) {
  const double orig = *param;
  *param = orig + eps;
  const double fp = f();
  *param = orig - eps;
  const double fm = f();
  *param = orig;
  return (fp - fm) / (2.0 * eps);
}

double rel_err(double a, double b, double floor_value) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor_value});
}

}  // namespace oracle
