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

#include "scatterscore/data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "scatterscore/audio.hpp"
#include "scatterscore/errors.hpp"
#include "scatterscore/rng.hpp"

namespace scs {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

int parse_int_field(const std::string& s, const char* what, std::size_t line_no) {
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw SchemaError(std::string("line ") + std::to_string(line_no) + ": " + what +
                      " is not an integer: '" + s + "'");
  }
  if (pos != s.size()) {
    throw SchemaError(std::string("line ") + std::to_string(line_no) + ": " + what +
                      " is not an integer: '" + s + "'");
  }
  return value;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

int clamp_int(int x, int lo, int hi) { return std::min(std::max(x, lo), hi); }

// Paul Kellet's economy 1/f filter over white noise.
std::vector<double> pink_noise(std::size_t n, Rng& rng) {
  std::vector<double> out(n);
  double b0 = 0, b1 = 0, b2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double white = rng.gaussian();
    b0 = 0.99765 * b0 + white * 0.0990460;
    b1 = 0.96300 * b1 + white * 0.2965164;
    b2 = 0.57000 * b2 + white * 1.0526913;
    out[i] = (b0 + b1 + b2 + white * 0.1848) * 0.2;
  }
  return out;
}

double rms(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x * x;
  return std::sqrt(s / static_cast<double>(xs.size()));
}

std::string format_snr(double snr) {
  std::ostringstream os;
  os << snr;
  return os.str();
}

}  // namespace

std::vector<RatingRecord> load_ratings(const std::filesystem::path& csv_path) {
  std::ifstream f(csv_path);
  if (!f) throw IoError("cannot open ratings csv: " + csv_path.string());

  std::string line;
  if (!std::getline(f, line)) throw SchemaError("ratings csv is empty: " + csv_path.string());

  const std::vector<std::string> header = split_csv_line(line);
  const std::vector<std::string> required = {"utterance_id", "wav_path", "rater_id",
                                             "quality", "intelligibility"};
  if (header.size() < required.size()) {
    throw SchemaError("ratings csv header is missing required columns");
  }
  for (std::size_t i = 0; i < required.size(); ++i) {
    if (header[i] != required[i]) {
      throw SchemaError("ratings csv header column " + std::to_string(i + 1) +
                        " must be '" + required[i] + "', found '" + header[i] + "'");
    }
  }
  int method_col = -1, noise_col = -1, snr_col = -1;
  for (std::size_t i = required.size(); i < header.size(); ++i) {
    if (header[i] == "method") {
      method_col = static_cast<int>(i);
    } else if (header[i] == "noise_type") {
      noise_col = static_cast<int>(i);
    } else if (header[i] == "snr") {
      snr_col = static_cast<int>(i);
    } else {
      throw SchemaError("unknown ratings csv column '" + header[i] + "'");
    }
  }

  std::vector<RatingRecord> records;
  std::size_t line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields, found " +
                        std::to_string(fields.size()));
    }
    RatingRecord rec;
    rec.utterance_id = fields[0];
    rec.wav_path = fields[1];
    rec.rater_id = fields[2];
    if (rec.utterance_id.empty()) {
      throw SchemaError("line " + std::to_string(line_no) + ": empty utterance_id");
    }
    rec.quality = parse_int_field(fields[3], "quality", line_no);
    rec.intelligibility = parse_int_field(fields[4], "intelligibility", line_no);
    if (rec.quality < 1 || rec.quality > 5) {
      throw RangeError("line " + std::to_string(line_no) + ": quality " +
                       std::to_string(rec.quality) + " outside [1, 5]");
    }
    if (rec.intelligibility < 0 || rec.intelligibility > 10) {
      throw RangeError("line " + std::to_string(line_no) + ": intelligibility " +
                       std::to_string(rec.intelligibility) + " outside [0, 10]");
    }
    if (method_col >= 0) rec.method = fields[static_cast<std::size_t>(method_col)];
    if (noise_col >= 0) rec.noise_type = fields[static_cast<std::size_t>(noise_col)];
    if (snr_col >= 0 && !fields[static_cast<std::size_t>(snr_col)].empty()) {
      try {
        rec.snr = std::stod(fields[static_cast<std::size_t>(snr_col)]);
      } catch (const std::exception&) {
        throw SchemaError("line " + std::to_string(line_no) + ": snr is not a number");
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

DatasetManifest partition(const std::vector<RatingRecord>& records) {
  if (records.empty()) throw EmptyDatasetError("no rating records");

  // Group by utterance, keeping first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RatingRecord*>> groups;
  for (const RatingRecord& rec : records) {
    auto [it, inserted] = groups.try_emplace(rec.utterance_id);
    if (inserted) order.push_back(rec.utterance_id);
    it->second.push_back(&rec);
  }

  DatasetManifest manifest;
  manifest.total_utterances = groups.size();
  for (const std::string& id : order) {
    const auto& recs = groups[id];
    std::set<std::string> raters;
    bool is_example = false;
    for (const RatingRecord* r : recs) {
      raters.insert(r->rater_id);
      if (r->method == "example") is_example = true;
    }
    if (raters.size() >= 3 && !is_example) {
      TestUtterance t;
      t.utterance_id = id;
      t.wav_path = recs.front()->wav_path;
      t.rater_count = static_cast<int>(raters.size());
      double q = 0.0, i = 0.0;
      for (const RatingRecord* r : recs) {
        q += r->quality;
        i += r->intelligibility;
      }
      t.quality_mean = q / static_cast<double>(recs.size());
      t.intelligibility_mean = i / static_cast<double>(recs.size());
      manifest.test.push_back(std::move(t));
    } else {
      for (const RatingRecord* r : recs) manifest.train.push_back(*r);
    }
  }
  return manifest;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::json j;
  j["train"] = nlohmann::json::array();
  for (const RatingRecord& r : manifest.train) {
    nlohmann::json row{{"utterance_id", r.utterance_id},
                       {"wav_path", r.wav_path},
                       {"rater_id", r.rater_id},
                       {"quality", r.quality},
                       {"intelligibility", r.intelligibility}};
    if (!r.method.empty()) row["method"] = r.method;
    if (!r.noise_type.empty()) row["noise_type"] = r.noise_type;
    if (r.snr) row["snr"] = *r.snr;
    j["train"].push_back(std::move(row));
  }
  j["test"] = nlohmann::json::array();
  for (const TestUtterance& t : manifest.test) {
    j["test"].push_back({{"utterance_id", t.utterance_id},
                         {"wav_path", t.wav_path},
                         {"quality_mean", t.quality_mean},
                         {"intelligibility_mean", t.intelligibility_mean},
                         {"rater_count", t.rater_count}});
  }
  j["counts"] = {{"train", manifest.train.size()},
                 {"test", manifest.test.size()},
                 {"total_utterances", manifest.total_utterances}};
  return j.dump(2) + "\n";
}

void synth_corpus(const SynthConfig& config, const std::filesystem::path& out_dir) {
  if (config.n_utts < 8) {
    throw InvalidConfigError("synthetic corpus needs n_utts >= 8, got " +
                             std::to_string(config.n_utts));
  }
  if (config.test_fraction < 0.0 || config.test_fraction > 1.0) {
    throw InvalidConfigError("test_fraction must be in [0, 1]");
  }
  if (config.train_raters < 1 || config.rater_noise < 0) {
    throw InvalidConfigError("train_raters must be >= 1 and rater_noise >= 0");
  }
  std::filesystem::create_directories(out_dir);

  static const double kSnrChoices[] = {-5.0, 0.0, 5.0, 10.0, 15.0};
  const int n_test = static_cast<int>(
      std::lround(static_cast<double>(config.n_utts) * config.test_fraction));

  std::ostringstream csv;
  csv << "utterance_id,wav_path,rater_id,quality,intelligibility,method,noise_type,snr\n";

  for (int u = 0; u < config.n_utts; ++u) {
    Rng rng(mix_seed(config.seed, static_cast<std::uint64_t>(u)));

    const double dur = rng.uniform(1.0, 3.0);
    const std::size_t n = static_cast<std::size_t>(
        std::lround(dur * static_cast<double>(config.sample_rate)));
    const double f0 = rng.uniform(100.0, 300.0);
    const int partials = rng.uniform_int(3, 5);
    const double am_freq = rng.uniform(2.0, 6.0);
    const double am_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);

    std::vector<double> clean(n, 0.0);
    for (int p = 1; p <= partials; ++p) {
      const double amp = rng.uniform(0.5, 1.0) / static_cast<double>(p);
      const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double w = 2.0 * std::numbers::pi * f0 * static_cast<double>(p) /
                       static_cast<double>(config.sample_rate);
      for (std::size_t i = 0; i < n; ++i) {
        clean[i] += amp * std::sin(w * static_cast<double>(i) + phase);
      }
    }
    // Syllabic amplitude modulation to make the envelope speech-like.
    const double w_am = 2.0 * std::numbers::pi * am_freq / config.sample_rate;
    for (std::size_t i = 0; i < n; ++i) {
      clean[i] *= 0.55 + 0.45 * std::sin(w_am * static_cast<double>(i) + am_phase);
    }
    const double clean_rms = rms(clean);
    for (double& x : clean) x *= 0.15 / clean_rms;

    const double snr = kSnrChoices[rng.below(5)];
    const bool white = rng.below(2) == 0;
    std::vector<double> noise =
        white ? [&] {
          std::vector<double> w_noise(n);
          for (double& x : w_noise) x = rng.gaussian();
          return w_noise;
        }()
              : pink_noise(n, rng);
    const double noise_gain = 0.15 / rms(noise) / std::pow(10.0, snr / 20.0);

    std::vector<double> mix(n);
    for (std::size_t i = 0; i < n; ++i) mix[i] = clean[i] + noise_gain * noise[i];
    double peak = 0.0;
    for (double x : mix) peak = std::max(peak, std::abs(x));
    if (peak > 0.99) {
      const double g = 0.99 / peak;
      for (double& x : mix) x *= g;
    }

    char name[32];
    std::snprintf(name, sizeof(name), "synth_%04d", u);
    const std::string wav_name = std::string(name) + ".wav";
    write_wav(out_dir / wav_name, AudioBuffer{std::move(mix), config.sample_rate});

    const bool is_test = u < n_test;
    const int raters = is_test ? rng.uniform_int(3, 5) : config.train_raters;
    const int base_i = static_cast<int>(std::lround(10.0 * sigmoid(snr / 4.0)));
    const int base_q = static_cast<int>(std::lround(1.0 + 4.0 * sigmoid((snr - 2.0) / 5.0)));
    for (int r = 0; r < raters; ++r) {
      const int noise_i =
          config.rater_noise == 0 ? 0 : rng.uniform_int(-config.rater_noise, config.rater_noise);
      const int noise_q =
          config.rater_noise == 0 ? 0 : rng.uniform_int(-config.rater_noise, config.rater_noise);
      const int intel = clamp_int(base_i + noise_i, 0, 10);
      const int quality = clamp_int(base_q + noise_q, 1, 5);
      csv << name << "," << wav_name << ",rater" << r << "," << quality << "," << intel
          << ",synth," << (white ? "white" : "pink") << "," << format_snr(snr) << "\n";
    }
  }

  std::ofstream f(out_dir / "ratings.csv", std::ios::binary);
  if (!f) throw IoError("cannot write ratings csv in " + out_dir.string());
  const std::string body = csv.str();
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoError("short write: ratings.csv");
}

}  // namespace scs
