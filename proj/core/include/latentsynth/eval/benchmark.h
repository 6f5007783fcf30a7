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

#ifndef LATENTSYNTH_EVAL_BENCHMARK_H_
#define LATENTSYNTH_EVAL_BENCHMARK_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "latentsynth/dataset/corpus.h"
#include "latentsynth/eval/metrics.h"
#include "latentsynth/models/arch.h"
#include "latentsynth/models/bundle.h"
#include "latentsynth/models/trainer.h"

namespace latentsynth::eval {

// One row of the model grid. A zero in `layers` marks the bottleneck and is
// replaced by each value of the enc grid.
struct ModelTemplate {
  std::string name;
  models::ModelKind kind = models::ModelKind::kPca;
  std::vector<int> layers = {kNumBins, 0, kNumBins};
  nn::Activation hidden_activation = nn::Activation::kTanh;
  nn::Activation output_activation = nn::Activation::kLinear;
  models::DecoderVariance decoder_variance = models::DecoderVariance::kLearned;
  models::TrainConfig train;

  models::ArchSpec ForEnc(int enc) const;
};

// Parses "name=kind:513,128,0,128,513" or "kind:513,0,513" (name
// defaults to the kind). `train` is copied into the template.
ModelTemplate ParseModelTemplate(const std::string& text, const models::TrainConfig& train);

struct BenchmarkSpec {
  std::vector<ModelTemplate> models;
  std::vector<int> encs;
  int folds = 5;
  std::uint64_t seed = 0;
  int jobs = 1;
  dsp::PreprocConfig preproc;
  // When set, trained bundles are stored here and reused on later runs.
  std::filesystem::path cache_dir;
};

struct CellResult {
  std::string model;
  std::string arch;
  int enc = 0;
  int fold = 0;
  double rmse_db = 0.0;  // mean over test sounds
  double lsd_db = 0.0;
  int epochs = 0;
  double train_seconds = 0.0;
  bool from_cache = false;
  std::vector<SoundScore> sounds;
  std::string error;  // non-empty when the cell failed

  bool ok() const { return error.empty(); }
};

struct AggregateRow {
  std::string model;
  std::string arch;
  int enc = 0;
  int folds_ok = 0;
  double rmse_db = 0.0;  // mean over folds
  double lsd_db = 0.0;
  MeanCi per_sound;      // over every test sound of every fold
  bool has_paired = false;
  MeanCi paired_vs_pca;  // per-sound rmse minus the PCA rmse at the same enc
};

struct BenchmarkReport {
  std::vector<CellResult> cells;  // model-major, then enc, then fold
  std::vector<AggregateRow> aggregates;

  const AggregateRow* Find(const std::string& model, int enc) const;
  // One row per cell plus one aggregate row per (model, enc). Timing
  // columns are optional so reruns can be compared textually.
  std::string ToCsv(bool include_timing = true) const;
};

// Cross-validated sweep: for every template, enc and fold, train on the
// other folds and score each test sound. Fold assignment comes from the
// corpus when every sound carries one, otherwise from a seeded split.
// Learned models hold out part of their training folds for early stopping;
// PCA is fitted on the whole training folds. A failing cell is recorded
// and the sweep continues. Cells run on spec.jobs threads; the report does
// not depend on the job count.
BenchmarkReport RunBenchmark(const dataset::Corpus& corpus, const BenchmarkSpec& spec,
                             const std::function<void(const CellResult&)>& on_cell = {});

// Trains one model the way a benchmark cell does: PCA is fitted on all of
// `train`; learned models hold out cfg.validation_fraction of the sounds
// for early stopping (layer-wise for a DAE when cfg.layerwise is set).
// `history` receives the end-to-end history when not null.
models::ModelBundle TrainModel(const models::ArchSpec& arch, const std::vector<Matrix>& train,
                               const models::TrainConfig& cfg, const dsp::PreprocConfig& preproc,
                               models::TrainHistory* history = nullptr);

// Test fold of every corpus sound as used by RunBenchmark.
std::vector<int> CorpusFolds(const dataset::Corpus& corpus, int k, std::uint64_t seed);

// Seed of one grid cell.
std::uint64_t CellSeed(std::uint64_t base, const std::string& model, int enc, int fold);

}  // namespace latentsynth::eval

#endif  // LATENTSYNTH_EVAL_BENCHMARK_H_
