// Copyright 2026 The roomrelight Authors
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

#include "roomrelight/dataset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>
#include <tbb/parallel_for.h>

#include "roomrelight/dsp/wav.hpp"

namespace roomrelight::dataset {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::mt19937_64 example_rng(std::uint64_t seed, std::size_t split, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(split), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

std::vector<fs::path> wav_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw std::runtime_error(fmt::format("not a directory: {}", dir.string()));
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) {
      std::string ext = e.path().extension().string();
      std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
      if (ext == ".wav") out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

Split split_from_name(const std::string& s) {
  for (Split sp : kSplits) {
    if (s == split_name(sp)) return sp;
  }
  throw std::runtime_error(fmt::format("manifest: unknown split '{}'", s));
}

struct Stats {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
};

}  // namespace

const char* split_name(Split s) {
  switch (s) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "?";
}

json DatasetManifest::to_json() const {
  json j;
  j["version"] = version;
  j["seed"] = seed;
  j["sample_rate"] = sample_rate;
  j["tensor_shape"] = tensor_shape;
  j["normalization"] = {{"mean", norm_mean}, {"std", norm_std}};
  json splits = json::object();
  for (Split s : kSplits) {
    const auto i = static_cast<std::size_t>(s);
    splits[split_name(s)] = {{"speakers", speakers[i]}, {"irs", irs[i]}};
  }
  j["splits"] = splits;
  json ex = json::array();
  for (const auto& e : examples) {
    json t60 = json::array(), eq = json::array();
    for (double v : e.t60_labels) t60.push_back(number_or_null(v));
    for (double v : e.eq_labels) eq.push_back(number_or_null(v));
    ex.push_back({{"id", e.id},
                  {"features_path", e.features_path},
                  {"tensor_shape", e.tensor_shape},
                  {"t60_labels", t60},
                  {"eq_labels", eq},
                  {"validity_masks", {{"t60", e.t60_valid}, {"eq", e.eq_valid}}},
                  {"split", split_name(e.split)},
                  {"speaker_id", e.speaker_id},
                  {"ir_id", e.ir_id},
                  {"snr_db", number_or_null(e.snr_db)},
                  {"window_start", e.window_start}});
  }
  j["examples"] = ex;
  return j;
}

DatasetManifest DatasetManifest::from_json(const json& j) {
  DatasetManifest m;
  m.version = j.at("version").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.sample_rate = j.at("sample_rate").get<int>();
  m.tensor_shape = j.at("tensor_shape").get<std::vector<std::size_t>>();
  m.norm_mean = j.at("normalization").at("mean").get<double>();
  m.norm_std = j.at("normalization").at("std").get<double>();
  for (Split s : kSplits) {
    const auto i = static_cast<std::size_t>(s);
    const json& sj = j.at("splits").at(split_name(s));
    m.speakers[i] = sj.at("speakers").get<std::vector<std::string>>();
    m.irs[i] = sj.at("irs").get<std::vector<std::string>>();
  }
  const auto values = [](const json& a) {
    std::vector<double> v;
    for (const auto& x : a) v.push_back(x.is_null() ? std::numeric_limits<double>::quiet_NaN() : x.get<double>());
    return v;
  };
  for (const auto& e : j.at("examples")) {
    ManifestEntry me;
    me.id = e.at("id").get<std::string>();
    me.features_path = e.at("features_path").get<std::string>();
    me.tensor_shape = e.at("tensor_shape").get<std::vector<std::size_t>>();
    me.t60_labels = values(e.at("t60_labels"));
    me.eq_labels = values(e.at("eq_labels"));
    me.t60_valid = e.at("validity_masks").at("t60").get<std::vector<bool>>();
    me.eq_valid = e.at("validity_masks").at("eq").get<std::vector<bool>>();
    me.split = split_from_name(e.at("split").get<std::string>());
    me.speaker_id = e.at("speaker_id").get<std::string>();
    me.ir_id = e.at("ir_id").get<std::string>();
    me.snr_db = e.at("snr_db").is_null() ? std::numeric_limits<double>::infinity() : e.at("snr_db").get<double>();
    me.window_start = e.value("window_start", std::size_t{0});
    m.examples.push_back(std::move(me));
  }
  return m;
}

std::vector<std::string> check_manifest(const DatasetManifest& manifest) {
  std::vector<std::string> problems;
  std::map<std::string, std::set<Split>> speaker_splits, ir_splits;
  for (std::size_t k = 0; k < kSplits.size(); ++k) {
    for (const auto& id : manifest.speakers[k]) speaker_splits[id].insert(kSplits[k]);
    for (const auto& id : manifest.irs[k]) ir_splits[id].insert(kSplits[k]);
  }
  for (const auto& e : manifest.examples) {
    speaker_splits[e.speaker_id].insert(e.split);
    ir_splits[e.ir_id].insert(e.split);
    if (e.tensor_shape != manifest.tensor_shape) {
      problems.push_back(fmt::format("example {} has a tensor shape different from the manifest", e.id));
    }
  }
  for (const auto& [id, splits] : speaker_splits) {
    if (splits.size() > 1) problems.push_back(fmt::format("speaker {} appears in {} splits", id, splits.size()));
  }
  for (const auto& [id, splits] : ir_splits) {
    if (splits.size() > 1) problems.push_back(fmt::format("IR {} appears in {} splits", id, splits.size()));
  }
  return problems;
}

std::array<std::vector<std::string>, 3> partition_ids(std::vector<std::string> ids, const SplitRules& rules,
                                                      std::uint64_t seed, const std::string& what) {
  if (!(rules.train > 0.0 && rules.val > 0.0 && rules.test > 0.0)) {
    throw std::invalid_argument("partition: split fractions must be positive");
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const double total = rules.train + rules.val + rules.test;
  const std::size_t n = ids.size();
  const auto n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n * rules.val / total)));
  const auto n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(n * rules.test / total)));
  if (n < n_val + n_test + 1) {
    throw std::invalid_argument(fmt::format(
        "infeasible split: {} distinct {} cannot be divided into non-empty disjoint train/val/test sets", n, what));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  std::array<std::vector<std::string>, 3> out;
  out[1].assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_val));
  out[2].assign(ids.begin() + static_cast<std::ptrdiff_t>(n_val), ids.begin() + static_cast<std::ptrdiff_t>(n_val + n_test));
  out[0].assign(ids.begin() + static_cast<std::ptrdiff_t>(n_val + n_test), ids.end());
  for (auto& v : out) std::sort(v.begin(), v.end());
  return out;
}

DatasetManifest build_dataset(const std::vector<SpeechSource>& speech, const std::vector<IrSource>& irs,
                              const std::vector<NoiseSource>& noise, const DatasetOptions& options,
                              const fs::path& out_dir) {
  if (!options.noiseless && !(options.snr_lo_db <= options.snr_hi_db && std::isfinite(options.snr_lo_db) &&
                              std::isfinite(options.snr_hi_db))) {
    throw std::invalid_argument("build_dataset: SNR range must be finite with lo <= hi");
  }
  const auto clip = static_cast<std::size_t>(std::lround(options.example.clip_s * kFeatureRate));

  // Usable speech per speaker.
  std::map<std::string, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < speech.size(); ++i) {
    const double seconds = speech[i].audio.duration_seconds();
    if (static_cast<std::size_t>(std::floor(seconds * kFeatureRate)) < clip) {
      spdlog::warn("dataset: skipping {} ({:.2f} s is shorter than one clip)", speech[i].name, seconds);
      continue;
    }
    by_speaker[speech[i].speaker_id].push_back(i);
  }
  std::vector<std::string> speaker_ids;
  for (const auto& kv : by_speaker) speaker_ids.push_back(kv.first);

  // IRs at the feature rate with labels measured once.
  std::vector<analysis::ImpulseResponse> irs16;
  std::vector<IrLabels> labels;
  std::map<std::string, std::size_t> ir_index;
  for (const auto& src : irs) {
    if (ir_index.count(src.ir_id)) throw std::invalid_argument(fmt::format("build_dataset: duplicate IR id {}", src.ir_id));
    analysis::ImpulseResponse ir = to_feature_rate(src.ir);
    IrLabels l = measure_labels(ir);
    if (!l.t60.any_valid()) {
      spdlog::warn("dataset: skipping IR {} (no band yields a T60)", src.ir_id);
      continue;
    }
    ir_index[src.ir_id] = irs16.size();
    irs16.push_back(std::move(ir));
    labels.push_back(std::move(l));
  }
  std::vector<std::string> ir_ids;
  for (const auto& kv : ir_index) ir_ids.push_back(kv.first);

  DatasetManifest m;
  m.seed = options.seed;
  m.speakers = partition_ids(speaker_ids, options.rules, options.seed, "speakers");
  m.irs = partition_ids(ir_ids, options.rules, options.seed ^ 0x9e3779b97f4a7c15ULL, "IRs");

  struct Job {
    Split split;
    std::size_t index;
  };
  std::vector<Job> jobs;
  for (Split s : kSplits) {
    for (std::size_t i = 0; i < options.counts[static_cast<std::size_t>(s)]; ++i) jobs.push_back({s, i});
  }
  fs::create_directories(out_dir / "features");
  std::vector<ManifestEntry> entries(jobs.size());
  std::vector<Stats> stats(jobs.size());
  tbb::parallel_for(std::size_t{0}, jobs.size(), [&](std::size_t j) {
    const Job& job = jobs[j];
    const auto si = static_cast<std::size_t>(job.split);
    std::mt19937_64 rng = example_rng(options.seed, si, job.index);
    const auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
    const std::string& speaker = m.speakers[si][pick(m.speakers[si].size())];
    const std::vector<std::size_t>& clips = by_speaker.at(speaker);
    const SpeechSource& sp = speech[clips[pick(clips.size())]];
    const std::string& ir_id = m.irs[si][pick(m.irs[si].size())];
    const std::size_t k = ir_index.at(ir_id);
    const dsp::AudioBuffer* nz = noise.empty() ? nullptr : &noise[pick(noise.size())].audio;
    const double snr = options.noiseless ? std::numeric_limits<double>::infinity()
                                         : std::uniform_real_distribution<double>(options.snr_lo_db, options.snr_hi_db)(rng);
    const Example ex = make_example(sp.audio, irs16[k], labels[k], nz, snr, rng, options.example);

    ManifestEntry& e = entries[j];
    e.id = fmt::format("{}_{:06}", split_name(job.split), job.index);
    e.features_path = fmt::format("features/{}.ft", e.id);
    write_tensor(out_dir / e.features_path, ex.features);
    e.tensor_shape = ex.features.shape;
    for (std::size_t b = 0; b < ex.labels.t60.size(); ++b) {
      e.t60_labels.push_back(ex.labels.t60.valid(b) ? ex.labels.t60.value(b) : std::numeric_limits<double>::quiet_NaN());
      e.t60_valid.push_back(ex.labels.t60.valid(b));
    }
    for (std::size_t b = 0; b < ex.labels.eq.size(); ++b) {
      e.eq_labels.push_back(ex.labels.eq.valid(b) ? ex.labels.eq.value(b) : std::numeric_limits<double>::quiet_NaN());
      e.eq_valid.push_back(ex.labels.eq.valid(b));
    }
    e.split = job.split;
    e.speaker_id = speaker;
    e.ir_id = ir_id;
    e.snr_db = snr;
    e.window_start = ex.window_start;
    if (job.split == Split::kTrain) {
      for (float v : ex.features.data) {
        stats[j].sum += v;
        stats[j].sum_sq += static_cast<double>(v) * v;
      }
      stats[j].n = ex.features.data.size();
    }
  });

  // Fixed-order reduction keeps the statistics independent of scheduling.
  Stats total;
  for (const Stats& s : stats) {
    total.sum += s.sum;
    total.sum_sq += s.sum_sq;
    total.n += s.n;
  }
  if (total.n > 0) {
    m.norm_mean = total.sum / static_cast<double>(total.n);
    m.norm_std = std::sqrt(std::max(0.0, total.sum_sq / static_cast<double>(total.n) - m.norm_mean * m.norm_mean));
  }
  m.examples = std::move(entries);
  m.tensor_shape = m.examples.empty() ? std::vector<std::size_t>{} : m.examples.front().tensor_shape;
  write_manifest(out_dir / "manifest.json", m);
  return m;
}

void write_manifest(const fs::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
  out << manifest.to_json().dump(2) << '\n';
}

DatasetManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open {}", path.string()));
  try {
    return DatasetManifest::from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw std::runtime_error(fmt::format("malformed manifest {}: {}", path.string(), e.what()));
  }
}

std::vector<SpeechSource> load_speech_corpus(const fs::path& dir) {
  std::vector<SpeechSource> out;
  for (const fs::path& p : wav_files(dir)) {
    fs::path rel = fs::relative(p, dir);
    std::string speaker;
    if (rel.has_parent_path()) {
      speaker = rel.begin()->string();
    } else {
      const std::string stem = p.stem().string();
      speaker = stem.substr(0, stem.find('_'));
    }
    out.push_back({speaker, rel.replace_extension().generic_string(), dsp::read_wav(p)});
  }
  return out;
}

std::vector<IrSource> load_ir_corpus(const fs::path& dir) {
  std::vector<IrSource> out;
  for (const fs::path& p : wav_files(dir)) {
    out.push_back({fs::relative(p, dir).replace_extension().generic_string(), analysis::ImpulseResponse(dsp::read_wav(p))});
  }
  return out;
}

std::vector<NoiseSource> load_noise_corpus(const fs::path& dir) {
  std::vector<NoiseSource> out;
  for (const fs::path& p : wav_files(dir)) {
    out.push_back({fs::relative(p, dir).replace_extension().generic_string(), dsp::read_wav(p)});
  }
  return out;
}

}  // namespace roomrelight::dataset
