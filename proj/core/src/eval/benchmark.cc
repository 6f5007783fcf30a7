// Copyright 2026 The latentsynth Authors.
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

#include "latentsynth/eval/benchmark.h"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>

#include "latentsynth/models/bundle.h"
#include "latentsynth/parallel.h"
#include "latentsynth/pca/pca.h"

namespace latentsynth::eval {
namespace {

std::uint64_t Fnv1a(const std::string& s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string CsvNumber(double v) {
  std::ostringstream out;
  out << std::setprecision(10) << v;
  return out.str();
}

std::string CsvText(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c == '\n' ? ' ' : c;
  }
  return quoted + "\"";
}

struct CellJob {
  std::size_t model;
  int enc;
  int fold;
};

}  // namespace

models::ModelBundle TrainModel(const models::ArchSpec& arch, const std::vector<Matrix>& train,
                               const models::TrainConfig& cfg, const dsp::PreprocConfig& preproc,
                               models::TrainHistory* history) {
  arch.Validate();
  cfg.Validate();
  models::TrainingMetadata meta;
  meta.seed = cfg.seed;
  meta.beta = cfg.beta;
  if (arch.kind == models::ModelKind::kPca) {
    Eigen::Index rows = 0;
    for (const auto& s : train) rows += s.rows();
    Matrix x(rows, arch.input_dim());
    Eigen::Index r = 0;
    for (const auto& s : train) {
      if (s.cols() != arch.input_dim()) throw InvalidArgument("frame width does not match arch");
      x.middleRows(r, s.rows()) = s;
      r += s.rows();
    }
    models::Model model = models::Model::Create(arch, cfg.seed);
    model.set_pca(pca::Fit(x, arch.enc()));
    meta.epochs_run = 1;
    meta.final_train_loss = model.pca().TrainingMse();
    meta.final_validation_loss = meta.final_train_loss;
    if (history) {
      *history = {};
      models::EpochRecord rec;
      rec.epoch = 1;
      rec.train.recon = rec.train.total = meta.final_train_loss;
      rec.validation = rec.train;
      history->epochs.push_back(rec);
      history->best_epoch = 1;
      history->best_validation = meta.final_train_loss;
    }
    return models::ModelBundle{std::move(model), preproc, meta};
  }
  models::TrainHistory h;
  std::optional<models::Model> model;
  if (cfg.layerwise && arch.kind == models::ModelKind::kDae) {
    std::vector<Matrix> fit, validation;
    models::SplitHoldout(train, cfg.validation_fraction, cfg.seed, &fit, &validation);
    std::vector<models::TrainHistory> stages;
    model.emplace(models::LayerwisePretrain(arch, fit, validation, cfg, &stages));
    h = stages.back();
  } else {
    model.emplace(models::Model::Create(arch, cfg.seed));
    h = models::TrainWithHoldout(*model, train, cfg);
  }
  const auto& best = h.epochs[static_cast<std::size_t>(h.best_epoch - 1)];
  meta.epochs_run = h.epochs_run();
  meta.final_train_loss = best.train.total;
  meta.final_validation_loss = best.validation.total;
  if (history) *history = h;
  return models::ModelBundle{std::move(*model), preproc, meta};
}

models::ArchSpec ModelTemplate::ForEnc(int enc) const {
  models::ArchSpec arch;
  arch.kind = kind;
  arch.layer_sizes = layers;
  for (int& s : arch.layer_sizes) {
    if (s == 0) s = enc;
  }
  arch.hidden_activation = hidden_activation;
  arch.output_activation = output_activation;
  arch.decoder_variance = decoder_variance;
  arch.Validate();
  return arch;
}

ModelTemplate ParseModelTemplate(const std::string& text, const models::TrainConfig& train) {
  ModelTemplate t;
  t.train = train;
  std::string rest = text;
  const auto eq = rest.find('=');
  if (eq != std::string::npos) {
    t.name = rest.substr(0, eq);
    rest = rest.substr(eq + 1);
  }
  const auto colon = rest.find(':');
  t.kind = models::ParseKind(rest.substr(0, colon));
  if (t.name.empty()) t.name = models::KindName(t.kind);
  if (colon != std::string::npos) {
    t.layers.clear();
    std::stringstream in(rest.substr(colon + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item == "enc" || item == "0") {
        t.layers.push_back(0);
        continue;
      }
      try {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size() || v <= 0) throw std::invalid_argument(item);
        t.layers.push_back(v);
      } catch (const std::exception&) {
        throw InvalidArgument("bad layer size '" + item + "' in model template '" + text + "'");
      }
    }
  } else if (t.kind == models::ModelKind::kDae || t.kind == models::ModelKind::kVae) {
    t.layers = {kNumBins, 128, 0, 128, kNumBins};
  }
  const std::size_t mid = t.layers.size() / 2;
  if (t.layers.size() % 2 == 0 || t.layers[mid] != 0) {
    throw InvalidArgument("model template '" + text + "' must mark the bottleneck with 0 or enc");
  }
  return t;
}

const AggregateRow* BenchmarkReport::Find(const std::string& model, int enc) const {
  for (const auto& a : aggregates) {
    if (a.model == model && a.enc == enc) return &a;
  }
  return nullptr;
}

std::string BenchmarkReport::ToCsv(bool include_timing) const {
  std::ostringstream out;
  out << "row,model,arch,enc,fold,rmse_db,lsd_proxy_db,ci95_half_db,paired_diff_vs_pca_db,"
         "paired_ci95_half_db,n_sounds,epochs";
  if (include_timing) out << ",train_seconds,cached";
  out << ",error\n";
  for (const auto& c : cells) {
    out << "cell," << CsvText(c.model) << ',' << CsvText(c.arch) << ',' << c.enc << ','
        << c.fold << ',';
    if (c.ok()) {
      out << CsvNumber(c.rmse_db) << ',' << CsvNumber(c.lsd_db) << ",,,," << c.sounds.size()
          << ',' << c.epochs;
    } else {
      out << ",,,,,,";
    }
    if (include_timing) out << ',' << CsvNumber(c.train_seconds) << ',' << (c.from_cache ? 1 : 0);
    out << ',' << CsvText(c.error) << '\n';
  }
  for (const auto& a : aggregates) {
    out << "mean," << CsvText(a.model) << ',' << CsvText(a.arch) << ',' << a.enc << ",all,"
        << CsvNumber(a.rmse_db) << ',' << CsvNumber(a.lsd_db) << ','
        << CsvNumber(a.per_sound.half_width) << ',';
    if (a.has_paired) {
      out << CsvNumber(a.paired_vs_pca.mean) << ',' << CsvNumber(a.paired_vs_pca.half_width);
    } else {
      out << ',';
    }
    out << ',' << a.per_sound.n << ',';
    if (include_timing) out << ",,";
    out << ',' << (a.folds_ok == 0 ? "all folds failed" : "") << '\n';
  }
  return out.str();
}

std::vector<int> CorpusFolds(const dataset::Corpus& corpus, int k, std::uint64_t seed) {
  const int n = static_cast<int>(corpus.sounds.size());
  bool assigned = n > 0;
  for (const auto& s : corpus.sounds) assigned = assigned && s.fold >= 0 && s.fold < k;
  if (!assigned) return dataset::KFoldSplit(n, k, seed);
  std::vector<int> folds;
  folds.reserve(static_cast<std::size_t>(n));
  for (const auto& s : corpus.sounds) folds.push_back(s.fold);
  return folds;
}

std::uint64_t CellSeed(std::uint64_t base, const std::string& model, int enc, int fold) {
  std::uint64_t h = Fnv1a(model, base * 0x9e3779b97f4a7c15ULL + 1469598103934665603ULL);
  h = Fnv1a(std::to_string(enc) + "/" + std::to_string(fold), h);
  return h & 0x7fffffffffffffffULL;
}

BenchmarkReport RunBenchmark(const dataset::Corpus& corpus, const BenchmarkSpec& spec,
                             const std::function<void(const CellResult&)>& on_cell) {
  if (spec.models.empty()) throw InvalidArgument("empty model grid");
  if (spec.encs.empty()) throw InvalidArgument("empty enc grid");
  spec.preproc.Validate();
  const std::vector<int> folds = CorpusFolds(corpus, spec.folds, spec.seed);
  if (!spec.cache_dir.empty()) std::filesystem::create_directories(spec.cache_dir);

  std::vector<CellJob> jobs;
  for (std::size_t m = 0; m < spec.models.size(); ++m) {
    for (int enc : spec.encs) {
      for (int f = 0; f < spec.folds; ++f) jobs.push_back({m, enc, f});
    }
  }

  BenchmarkReport report;
  report.cells.resize(jobs.size());
  std::mutex callback_mu;
  ParallelFor(jobs.size(), spec.jobs, [&](std::size_t j) {
    const CellJob& job = jobs[j];
    const ModelTemplate& tmpl = spec.models[job.model];
    CellResult& cell = report.cells[j];
    cell.model = tmpl.name;
    cell.enc = job.enc;
    cell.fold = job.fold;
    try {
      const models::ArchSpec arch = tmpl.ForEnc(job.enc);
      cell.arch = arch.LayersString();
      std::vector<Matrix> train;
      std::vector<const dataset::SoundFrames*> test;
      for (std::size_t i = 0; i < corpus.sounds.size(); ++i) {
        const auto& s = corpus.sounds[i];
        if (s.num_voiced() == 0) continue;
        if (folds[i] == job.fold) {
          test.push_back(&s);
        } else {
          train.push_back(s.frames);
        }
      }
      if (test.empty()) throw InvalidArgument("fold has no test sounds");
      const std::uint64_t seed = CellSeed(spec.seed, tmpl.name, job.enc, job.fold);

      std::filesystem::path cached;
      if (!spec.cache_dir.empty()) {
        cached = spec.cache_dir / (tmpl.name + "-enc" + std::to_string(job.enc) + "-fold" +
                                   std::to_string(job.fold) + ".bundle");
      }
      std::optional<models::ModelBundle> bundle;
      if (!cached.empty() && std::filesystem::exists(cached)) {
        auto loaded = models::LoadBundle(cached);
        if (loaded.model.arch() == arch && loaded.meta.seed == seed) {
          bundle.emplace(std::move(loaded));
          cell.from_cache = true;
        }
      }
      if (!bundle) {
        const auto t0 = std::chrono::steady_clock::now();
        models::TrainConfig cfg = tmpl.train;
        cfg.seed = seed;
        bundle.emplace(TrainModel(arch, train, cfg, spec.preproc));
        cell.train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!cached.empty()) models::SaveBundle(cached, *bundle);
      }
      cell.epochs = bundle->meta.epochs_run;
      double rmse = 0.0, lsd = 0.0;
      for (const auto* s : test) {
        cell.sounds.push_back(ScoreSound(bundle->model, *s, spec.preproc));
        rmse += cell.sounds.back().rmse_db;
        lsd += cell.sounds.back().lsd_db;
      }
      cell.rmse_db = rmse / static_cast<double>(test.size());
      cell.lsd_db = lsd / static_cast<double>(test.size());
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.sounds.clear();
    }
    if (on_cell) {
      std::lock_guard<std::mutex> lock(callback_mu);
      on_cell(cell);
    }
  });

  // Per-sound scores keyed by (model, enc) for paired comparisons.
  std::map<std::pair<std::string, int>, std::map<std::string, double>> per_sound;
  for (const auto& c : report.cells) {
    for (const auto& s : c.sounds) per_sound[{c.model, c.enc}][s.id] = s.rmse_db;
  }
  for (const auto& tmpl : spec.models) {
    for (int enc : spec.encs) {
      AggregateRow row;
      row.model = tmpl.name;
      row.enc = enc;
      std::vector<double> scores;
      for (const auto& c : report.cells) {
        if (c.model != tmpl.name || c.enc != enc) continue;
        if (row.arch.empty()) row.arch = c.arch;
        if (!c.ok()) continue;
        ++row.folds_ok;
        row.rmse_db += c.rmse_db;
        row.lsd_db += c.lsd_db;
        for (const auto& s : c.sounds) scores.push_back(s.rmse_db);
      }
      if (row.folds_ok > 0) {
        row.rmse_db /= row.folds_ok;
        row.lsd_db /= row.folds_ok;
      }
      row.per_sound = MeanWithCi(scores);
      const auto pca_it = std::find_if(spec.models.begin(), spec.models.end(), [](const auto& t) {
        return t.kind == models::ModelKind::kPca;
      });
      if (pca_it != spec.models.end() && pca_it->name != tmpl.name) {
        const auto& mine = per_sound[{tmpl.name, enc}];
        const auto& base = per_sound[{pca_it->name, enc}];
        std::vector<double> a, b;
        for (const auto& [id, v] : mine) {
          auto it = base.find(id);
          if (it == base.end()) continue;
          a.push_back(v);
          b.push_back(it->second);
        }
        if (!a.empty()) {
          row.has_paired = true;
          row.paired_vs_pca = PairedDifference(a, b);
        }
      }
      report.aggregates.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace latentsynth::eval
