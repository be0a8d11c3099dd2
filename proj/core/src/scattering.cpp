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

#include "scatterscore/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "scatterscore/errors.hpp"
#include "scatterscore/fft.hpp"

namespace scs {
namespace {

// Frequency std of the low-pass is kSigma0 / 2^J (cycles/sample), which puts
// the time-domain std at 2^J / (2*pi*kSigma0) samples.
constexpr double kSigma0 = 0.1;

// Adjacent wavelets overlap at relative amplitude r = sqrt(0.5); this is the
// resulting bandwidth-to-spacing factor 1/sqrt(2*ln(1/r)) = 1/sqrt(ln 2).
const double kBandwidthFactor = 1.0 / std::sqrt(std::log(2.0));

// A second-order path (l1, l2) is retained only when xi2 lies inside psi_l1's
// envelope bandwidth; the frontier is the half-power point of a Gaussian of
// std sigma1.
const double kFrontierFactor = std::sqrt(2.0 * std::log(2.0));

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double highest_center_freq(int q) {
  return std::max(1.0 / (1.0 + std::pow(2.0, 3.0 / q)), 0.35);
}

double wavelet_sigma(double xi, int q) {
  const double factor = std::pow(2.0, -1.0 / q);
  return xi * (1.0 - factor) / (1.0 + factor) * kBandwidthFactor;
}

struct GridPoint {
  double xi;
  double sigma;
};

// Center-frequency grid for one order: geometric at q per octave from the
// highest admissible frequency down to the low-pass bandwidth, then q
// linearly spaced filters of width sigma_low covering the bottom.
std::vector<GridPoint> frequency_grid(int q, double sigma_low) {
  std::vector<GridPoint> grid;
  double xi = highest_center_freq(q);
  double sigma = wavelet_sigma(xi, q);
  const double step = std::pow(2.0, -1.0 / q);
  while (sigma > sigma_low) {
    grid.push_back({xi, sigma});
    xi *= step;
    sigma *= step;
  }
  const double last_xi = grid.empty() ? highest_center_freq(q) : grid.back().xi;
  for (int i = 1; i <= q; ++i) {
    const double f = static_cast<double>(q + 1 - i) / static_cast<double>(q + 1);
    grid.push_back({last_xi * f, sigma_low});
  }
  return grid;
}

// Gaussian sampled on the FFT bin grid and periodized over [-4, 4] cycles.
std::vector<double> periodized_gaussian(std::size_t n, double center, double sigma) {
  std::vector<double> g(n, 0.0);
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  for (std::size_t k = 0; k < n; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(n);
    double acc = 0.0;
    for (int p = -4; p <= 4; ++p) {
      const double d = f - center - static_cast<double>(p);
      acc += std::exp(-d * d * inv_two_sigma2);
    }
    g[k] = acc;
  }
  return g;
}

double periodized_gaussian_at(double f, double center, double sigma) {
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  double acc = 0.0;
  for (int p = -4; p <= 4; ++p) {
    const double d = f - center - static_cast<double>(p);
    acc += std::exp(-d * d * inv_two_sigma2);
  }
  return acc;
}

// Morlet: Gaussian at xi minus a scaled Gaussian at 0, with the scale chosen
// so the response vanishes exactly at frequency zero.
Wavelet make_morlet(std::size_t n, double xi, double sigma) {
  Wavelet w;
  w.center_freq = xi;
  w.sigma = sigma;
  w.response.resize(n);
  const double kappa =
      periodized_gaussian_at(0.0, xi, sigma) / periodized_gaussian_at(0.0, 0.0, sigma);
  const std::vector<double> g_xi = periodized_gaussian(n, xi, sigma);
  const std::vector<double> g_0 = periodized_gaussian(n, 0.0, sigma);
  for (std::size_t k = 0; k < n; ++k) {
    w.response[k] = g_xi[k] - kappa * g_0[k];
  }
  return w;
}

// Littlewood-Paley sum at bin k for one wavelet set.
double lp_sum_at(const std::vector<double>& phi, const std::vector<Wavelet>& psis,
                 std::size_t n, std::size_t k) {
  double s = phi[k] * phi[k];
  const std::size_t neg = (n - k) % n;
  for (const Wavelet& w : psis) {
    s += 0.5 * (w.response[k] * w.response[k] + w.response[neg] * w.response[neg]);
  }
  return s;
}

// Scales a wavelet set so the Littlewood-Paley sum stays <= 1 on the grid
// while keeping phi (hence the DC response) untouched.
void normalize_frame_bound(const std::vector<double>& phi, std::vector<Wavelet>& psis,
                           std::size_t n) {
  double c = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    double p = 0.0;
    const std::size_t neg = (n - k) % n;
    for (const Wavelet& w : psis) {
      p += 0.5 * (w.response[k] * w.response[k] + w.response[neg] * w.response[neg]);
    }
    if (p < 1e-12) continue;
    const double headroom = std::max(0.0, 1.0 - phi[k] * phi[k]);
    c = std::min(c, headroom / p);
  }
  const double scale = std::sqrt(c);
  for (Wavelet& w : psis) {
    for (double& x : w.response) x *= scale;
  }
}

std::vector<std::complex<double>> apply_filter(
    const std::vector<std::complex<double>>& spectrum, const std::vector<double>& resp) {
  std::vector<std::complex<double>> out(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) out[k] = spectrum[k] * resp[k];
  return out;
}

// |IFFT(spectrum * resp)|, the band-pass envelope.
std::vector<double> envelope(const std::vector<std::complex<double>>& spectrum,
                             const std::vector<double>& resp) {
  const auto y = fft::inverse(apply_filter(spectrum, resp));
  std::vector<double> env(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) env[i] = std::abs(y[i]);
  return env;
}

// phi-average and subsample by 2^J. Gaussian averaging of a nonnegative
// envelope; tiny negative rounding residue is clamped to zero.
std::vector<double> lowpass_subsample(const std::vector<double>& env,
                                      const FilterBank& fb) {
  const auto spec = fft::forward_real(env);
  const auto smooth = fft::inverse(apply_filter(spec, fb.phi));
  const std::size_t hop = std::size_t{1} << fb.config.j;
  const std::size_t frames = env.size() / hop;
  std::vector<double> out(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    out[f] = std::max(0.0, smooth[f * hop].real());
  }
  return out;
}

void check_input(const std::vector<double>& x, const FilterBank& fb) {
  if (x.size() != fb.signal_length) {
    throw LengthMismatchError("signal has " + std::to_string(x.size()) +
                              " samples, filter bank expects " +
                              std::to_string(fb.signal_length));
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

FilterBank build_filterbank(const ScatteringConfig& config, std::size_t signal_length) {
  if (config.j < 1 || config.q1 < 1 || config.q2 < 1) {
    throw InvalidConfigError("scattering config requires j >= 1, q1 >= 1, q2 >= 1");
  }
  if (config.j >= 63) throw InvalidConfigError("j too large");
  const std::size_t support = std::size_t{1} << config.j;
  if (!is_pow2(signal_length) || signal_length < support) {
    throw InvalidConfigError("signal_length must be a power of two >= 2^j (got " +
                             std::to_string(signal_length) + ", j=" +
                             std::to_string(config.j) + ")");
  }

  FilterBank fb;
  fb.config = config;
  fb.signal_length = signal_length;
  fb.phi_sigma = kSigma0 / static_cast<double>(support);
  fb.phi = periodized_gaussian(signal_length, 0.0, fb.phi_sigma);

  for (const GridPoint& g : frequency_grid(config.q1, fb.phi_sigma)) {
    fb.psi1.push_back(make_morlet(signal_length, g.xi, g.sigma));
  }
  for (const GridPoint& g : frequency_grid(config.q2, fb.phi_sigma)) {
    fb.psi2.push_back(make_morlet(signal_length, g.xi, g.sigma));
  }
  normalize_frame_bound(fb.phi, fb.psi1, signal_length);
  normalize_frame_bound(fb.phi, fb.psi2, signal_length);

  for (int i1 = 0; i1 < static_cast<int>(fb.psi1.size()); ++i1) {
    const double frontier = kFrontierFactor * fb.psi1[i1].sigma;
    for (int i2 = 0; i2 < static_cast<int>(fb.psi2.size()); ++i2) {
      if (fb.psi2[i2].center_freq < frontier) {
        fb.pairs.emplace_back(i1, i2);
      }
    }
  }
  return fb;
}

std::string path_label(const ScatterPath& p) {
  if (p.order == 1) return "1:" + std::to_string(p.i1);
  return "2:" + std::to_string(p.i1) + "/" + std::to_string(p.i2);
}

std::vector<ScatterPath> scattering_paths(const FilterBank& fb) {
  std::vector<ScatterPath> paths;
  paths.reserve(fb.psi1.size() + fb.pairs.size());
  for (int i1 = 0; i1 < static_cast<int>(fb.psi1.size()); ++i1) {
    paths.push_back({1, i1, -1});
  }
  for (const auto& [i1, i2] : fb.pairs) {
    paths.push_back({2, i1, i2});
  }
  return paths;
}

double littlewood_paley_max(const FilterBank& fb, int order) {
  const std::vector<Wavelet>& psis = (order == 1) ? fb.psi1 : fb.psi2;
  double m = 0.0;
  for (std::size_t k = 0; k < fb.signal_length; ++k) {
    m = std::max(m, lp_sum_at(fb.phi, psis, fb.signal_length, k));
  }
  return m;
}

Mat scatter_order1(const std::vector<double>& x, const FilterBank& fb) {
  check_input(x, fb);
  const auto spectrum = fft::forward_real(x);
  const std::size_t frames = fb.signal_length >> fb.config.j;
  Mat out(frames, fb.psi1.size());
  for (std::size_t l = 0; l < fb.psi1.size(); ++l) {
    const auto env = envelope(spectrum, fb.psi1[l].response);
    const auto coeffs = lowpass_subsample(env, fb);
    for (std::size_t f = 0; f < frames; ++f) out(f, l) = coeffs[f];
  }
  return out;
}

Mat scatter_order2(const std::vector<double>& x, const FilterBank& fb) {
  check_input(x, fb);
  const auto spectrum = fft::forward_real(x);
  const std::size_t frames = fb.signal_length >> fb.config.j;
  Mat out(frames, fb.pairs.size());
  std::size_t col = 0;
  int current_i1 = -1;
  std::vector<std::complex<double>> env1_spectrum;
  for (const auto& [i1, i2] : fb.pairs) {
    if (i1 != current_i1) {
      env1_spectrum = fft::forward_real(envelope(spectrum, fb.psi1[i1].response));
      current_i1 = i1;
    }
    const auto env2 = envelope(env1_spectrum, fb.psi2[i2].response);
    const auto coeffs = lowpass_subsample(env2, fb);
    for (std::size_t f = 0; f < frames; ++f) out(f, col) = coeffs[f];
    ++col;
  }
  return out;
}

ScatteringCoeffs scattering_features(const AudioBuffer& audio,
                                     const ScatteringConfig& config) {
  if (audio.samples.empty()) throw Error("scattering_features: empty signal");
  const std::size_t support = std::size_t{1} << config.j;
  const std::size_t len = audio.samples.size();

  std::size_t padded = len + 2 * support;
  if (config.pad_to_pow2) {
    padded = next_pow2(padded);
  } else if (!is_pow2(len)) {
    throw LengthMismatchError("pad_to_pow2 disabled and signal length is not a power of two");
  } else {
    padded = len;
  }

  std::vector<double> x(padded, 0.0);
  std::copy(audio.samples.begin(), audio.samples.end(), x.begin());

  const FilterBank fb = build_filterbank(config, padded);
  const Mat s1 = scatter_order1(x, fb);
  const Mat s2 = scatter_order2(x, fb);

  const std::size_t out_frames =
      std::min<std::size_t>(s1.rows, (len + support - 1) / support);

  ScatteringCoeffs out;
  out.paths = scattering_paths(fb);
  out.values = Mat(out_frames, s1.cols + s2.cols);
  for (std::size_t f = 0; f < out_frames; ++f) {
    for (std::size_t c = 0; c < s1.cols; ++c) out.values(f, c) = s1(f, c);
    for (std::size_t c = 0; c < s2.cols; ++c) out.values(f, s1.cols + c) = s2(f, c);
  }
  return out;
}

}  // namespace scs
