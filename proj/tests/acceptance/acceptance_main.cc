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

// Acceptance suite: one check per numbered criterion, each printing a single
// PASS or FAIL line. Pass criterion numbers to run a subset, e.g.
// `acceptance 1 5 9`. The exit status is non-zero if any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.h"
#include "latentsynth/dataset/corpus.h"
#include "latentsynth/dataset/synth.h"
#include "latentsynth/dsp/griffin_lim.h"
#include "latentsynth/dsp/stft.h"
#include "latentsynth/eval/benchmark.h"
#include "latentsynth/eval/correlation.h"
#include "latentsynth/eval/metrics.h"
#include "latentsynth/interp/interp.h"
#include "latentsynth/models/model.h"
#include "latentsynth/models/trainer.h"
#include "latentsynth/nn/layers.h"
#include "latentsynth/pca/pca.h"
#include "oracles.h"

namespace latentsynth::acceptance {
namespace {

namespace fs = std::filesystem;
using models::ArchSpec;
using models::Model;
using models::ModelKind;
using models::SoundSet;
using nn::Activation;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  double budget_seconds;  // 0 when the criterion states no runtime bound
  std::function<Outcome()> run;
};

std::string Format(const char* fmt, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), fmt, a);
  return buf;
}

std::string Sci(double v) { return Format("%.3e", v); }

ArchSpec Arch(ModelKind kind, std::vector<int> layers, Activation hidden = Activation::kTanh,
              models::DecoderVariance dv = models::DecoderVariance::kLearned) {
  ArchSpec a;
  a.kind = kind;
  a.layer_sizes = std::move(layers);
  a.hidden_activation = hidden;
  a.output_activation = Activation::kLinear;
  a.decoder_variance = dv;
  return a;
}

// Low-rank data squashed into [-1, 1], shaped like normalized frames.
SoundSet LowRankSounds(int sounds, int frames, int dim, int rank, std::uint64_t seed,
                       double noise) {
  std::mt19937_64 rng(seed);
  const Matrix basis = oracle::RandomMatrix(rank, dim, rng, 1.0 / std::sqrt(rank));
  SoundSet out;
  for (int s = 0; s < sounds; ++s) {
    const Matrix z = oracle::RandomMatrix(frames, rank, rng);
    out.push_back((z * basis + oracle::RandomMatrix(frames, dim, rng, noise)).array().tanh().matrix());
  }
  return out;
}

// The 200-note synthetic corpus, analyzed once and shared.
const dataset::Corpus& FullCorpus() {
  static const dataset::Corpus corpus =
      dataset::BuildSynthFrames(dataset::CorpusSpecs(), dataset::AnalysisConfig{});
  return corpus;
}

Matrix Stack(const SoundSet& sounds) {
  Eigen::Index rows = 0;
  for (const auto& s : sounds) rows += s.rows();
  Matrix out(rows, sounds.front().cols());
  Eigen::Index at = 0;
  for (const auto& s : sounds) {
    out.middleRows(at, s.rows()) = s;
    at += s.rows();
  }
  return out;
}

double Mse(const Model& m, const Matrix& x) {
  return (m.Reconstruct(x) - x).squaredNorm() / double(x.size());
}

// ---------------------------------------------------------------------------

Outcome StftRoundTrip() {
  const dsp::StftConfig cfg;  // Hamming, 1024, hop 512
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(4 * kSampleRate);
    for (double& v : x) v = u(rng);
    const dsp::SpectralFrames f = dsp::Stft(x, cfg);
    const dsp::Waveform y = dsp::Istft(f);
    // Fully overlapped interior: every sample covered by two frames.
    const std::size_t begin = static_cast<std::size_t>(cfg.hop);
    const std::size_t end = static_cast<std::size_t>(f.num_frames()) * cfg.hop;
    double num = 0.0, den = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      num += (y.samples[i] - x[i]) * (y.samples[i] - x[i]);
      den += x[i] * x[i];
    }
    worst = std::max(worst, std::sqrt(num / den));
  }
  return {worst < 1e-10, "max interior relative error " + Sci(worst)};
}

Outcome Gradients() {
  double worst = 0.0;
  std::string where;
  auto record = [&](const oracle::GradCheckResult& r, const std::string& label) {
    if (r.worst >= worst) {
      worst = r.worst;
      where = label + " " + r.worst_param;
    }
  };
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SoundSet data = LowRankSounds(3, 5, 8, 2, 100 + seed, 0.05);
    nn::Rng rng(seed);

    // Dense stacks, one per hidden activation.
    for (Activation act : {Activation::kTanh, Activation::kSigmoid, Activation::kLinear}) {
      Model m = Model::Create(Arch(ModelKind::kDae, {8, 6, 3, 6, 8}, act), seed);
      models::Batch batch;
      batch.frames = data[0];
      record(oracle::CheckGradients(m.parameters(),
                                    [&](nn::Graph& g) {
                                      return models::BuildLoss(g, m, batch, 0.0, nullptr).total;
                                    }),
             std::string("dense/") + nn::ActivationName(act));
    }

    // Five-step LSTM, raw cell and the sequence autoencoder.
    {
      nn::LstmParams p = nn::MakeLstm("lstm", 4, 3, rng);
      std::mt19937_64 r(seed);
      std::vector<Matrix> xs;
      for (int t = 0; t < 5; ++t) xs.push_back(oracle::RandomMatrix(2, 4, r));
      const Matrix target = oracle::RandomMatrix(2, 3, r, 0.5);
      record(oracle::CheckGradients(p.parameters(),
                                    [&](nn::Graph& g) {
                                      std::vector<nn::Graph::Var> in;
                                      for (const auto& x : xs) in.push_back(g.Constant(x));
                                      const auto hs = nn::LstmForward(g, p, in);
                                      nn::Graph::Var acc = g.Sum(g.Square(g.Sub(hs[0], g.Constant(target))));
                                      for (std::size_t t = 1; t < hs.size(); ++t) {
                                        acc = g.Add(acc, g.Sum(g.Square(g.Sub(hs[t], g.Constant(target)))));
                                      }
                                      return acc;
                                    }),
             "lstm");
      Model m = Model::Create(Arch(ModelKind::kLstmAe, {8, 3, 8}), seed);
      models::Batch batch;
      batch.steps.assign(5, Matrix::Zero(3, 8));
      batch.mask = Matrix::Ones(3, 5);
      batch.mask(2, 4) = 0.0;
      for (int s = 0; s < 3; ++s) {
        for (int t = 0; t < 5; ++t) {
          if (batch.mask(s, t) > 0) {
            batch.steps[static_cast<std::size_t>(t)].row(s) = data[static_cast<std::size_t>(s)].row(t);
          }
        }
      }
      record(oracle::CheckGradients(m.parameters(),
                                    [&](nn::Graph& g) {
                                      return models::BuildLoss(g, m, batch, 0.0, nullptr).total;
                                    }),
             "lstm_ae");
    }

    // VAE loss with the reparameterization noise frozen.
    for (auto dv : {models::DecoderVariance::kLearned, models::DecoderVariance::kUnit}) {
      Model m = Model::Create(Arch(ModelKind::kVae, {8, 6, 3, 6, 8}, Activation::kTanh, dv), seed);
      models::Batch batch;
      batch.frames = data[1];
      const Matrix noise = models::DrawStandardNormal(batch.frames.rows(), m.enc(), rng);
      record(oracle::CheckGradients(m.parameters(),
                                    [&](nn::Graph& g) {
                                      return models::BuildLoss(g, m, batch, 0.5, &noise).total;
                                    }),
             std::string("vae/") + models::DecoderVarianceName(dv));
    }
  }
  return {worst < 1e-4, "worst relative error " + Sci(worst) + " (" + where + ")"};
}

Outcome KlOracle() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    models::GaussianCode g{Matrix(1, 4), Matrix(1, 4)};
    for (int d = 0; d < 4; ++d) {
      g.mu(0, d) = u(rng);
      g.log_var(0, d) = u(rng);
    }
    const double closed = models::KlToStandardNormal(g);
    const double mc = oracle::MonteCarloKl(g.mu.row(0).transpose(), g.log_var.row(0).transpose(),
                                           1000000, rng);
    worst = std::max(worst, std::abs(mc - closed) / closed);
  }
  return {worst < 0.01, "worst relative gap " + Sci(worst)};
}

Outcome PcaBeatsLinearAe() {
  const Matrix x = Stack(dataset::SelectFrames(FullCorpus(), [] {
    std::vector<int> all(FullCorpus().sounds.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    return all;
  }()));
  const SoundSet train = {x};
  std::ostringstream detail;
  bool pass = true;
  for (int enc : {4, 8}) {
    Model pca = Model::Create(Arch(ModelKind::kPca, {kNumBins, enc, kNumBins}), 0);
    pca.set_pca(pca::Fit(x, enc));
    Model ae = Model::Create(
        Arch(ModelKind::kAe, {kNumBins, enc, kNumBins}, Activation::kLinear), 17);
    models::TrainConfig cfg;
    cfg.max_epochs = 300;
    cfg.patience = 20;
    cfg.seed = 17;
    const auto h = models::Train(ae, train, train, cfg);
    const double pca_mse = Mse(pca, x);
    const double ae_mse = Mse(ae, x);
    pass = pass && ae_mse >= pca_mse - 1e-3;
    detail << "enc=" << enc << ": ae " << Sci(ae_mse) << " vs pca " << Sci(pca_mse) << " ("
           << h.epochs_run() << " epochs" << (h.stopped_early ? ", converged" : "") << "); ";
  }
  return {pass, detail.str()};
}

Outcome PcaMonotone() {
  std::vector<int> all(FullCorpus().sounds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  const Matrix x = Stack(dataset::SelectFrames(FullCorpus(), all));
  const pca::PcaModel full = pca::Fit(x, 100);
  const double n = double(x.rows());
  const std::vector<int> encs = {4, 8, 12, 16, 32, 64, 100};
  std::vector<double> rmse;
  double cross_check = 0.0;
  for (int enc : encs) {
    const double tail = full.total_variance - full.eigenvalues.head(enc).sum();
    rmse.push_back(std::sqrt(std::max(0.0, (n - 1) / (n * kNumBins) * tail)));
    // The tail-sum value agrees with a separate fit at this size.
    cross_check = std::max(cross_check,
                           std::abs(pca::Fit(x, enc).TrainingMse() - rmse.back() * rmse.back()));
  }
  bool pass = cross_check < 1e-10;
  std::ostringstream detail;
  detail << "rmse";
  for (std::size_t i = 0; i < rmse.size(); ++i) {
    detail << ' ' << Format("%.6f", rmse[i]);
    if (i > 0 && rmse[i] > rmse[i - 1] + 1e-10) pass = false;
  }
  detail << "; refit mismatch " << Sci(cross_check);
  return {pass, detail.str()};
}

Outcome DaeBeatsPca() {
  models::TrainConfig train;
  train.max_epochs = 60;
  train.patience = 30;
  eval::BenchmarkSpec spec;
  spec.models = {eval::ParseModelTemplate("pca", train),
                 eval::ParseModelTemplate("dae=dae:513,128,enc,128,513", train)};
  spec.encs = {8};
  spec.folds = 5;
  int wins = 0;
  std::ostringstream detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    spec.seed = seed;
    const eval::BenchmarkReport r = eval::RunBenchmark(FullCorpus(), spec);
    const auto* pca = r.Find("pca", 8);
    const auto* dae = r.Find("dae", 8);
    const bool ok = pca && dae && pca->folds_ok == 5 && dae->folds_ok == 5;
    if (ok && dae->rmse_db < pca->rmse_db) ++wins;
    detail << "seed " << seed << ": dae " << (ok ? Format("%.3f", dae->rmse_db) : "failed")
           << " vs pca " << (ok ? Format("%.3f", pca->rmse_db) : "failed") << " dB; ";
  }
  detail << wins << "/5 wins";
  return {wins >= 4, detail.str()};
}

Outcome BetaTradeOff() {
  const auto& corpus = FullCorpus();
  const std::vector<int> folds = dataset::KFoldSplit(static_cast<int>(corpus.sounds.size()), 5, 0);
  std::vector<int> train_idx, test_idx;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    (folds[i] == 0 ? test_idx : train_idx).push_back(static_cast<int>(i));
  }
  const SoundSet train = dataset::SelectFrames(corpus, train_idx);
  const SoundSet test = dataset::SelectFrames(corpus, test_idx);
  const std::vector<double> betas = {0.01, 0.1, 1.0, 10.0};
  std::vector<double> corr, rmse;
  std::ostringstream detail;
  for (double beta : betas) {
    Model m = Model::Create(Arch(ModelKind::kVae, {kNumBins, 128, 8, 128, kNumBins},
                                 Activation::kTanh, models::DecoderVariance::kUnit),
                            1);
    models::TrainConfig cfg;
    cfg.max_epochs = 30;
    cfg.patience = 29;
    cfg.seed = 1;
    cfg.beta = beta;
    models::TrainWithHoldout(m, train, cfg);
    corr.push_back(eval::LatentCorrelation(m, test).MeanOffDiagonal());
    double sum = 0.0;
    for (int i : test_idx) {
      sum += eval::ScoreSound(m, corpus.sounds[static_cast<std::size_t>(i)], {}).rmse_db;
    }
    rmse.push_back(sum / double(test_idx.size()));
    detail << "beta " << beta << ": corr " << Format("%.4f", corr.back()) << ", rmse "
           << Format("%.3f", rmse.back()) << " dB; ";
  }
  bool pass = true;
  for (std::size_t i = 1; i < betas.size(); ++i) {
    pass = pass && corr[i] < corr[i - 1] && rmse[i] > rmse[i - 1];
  }
  return {pass, detail.str()};
}

Outcome EarlyStopping() {
  const SoundSet train = LowRankSounds(1, 6, 16, 16, 7, 0.5);
  const SoundSet validation = LowRankSounds(4, 20, 16, 16, 8, 0.5);
  models::TrainConfig cfg;
  cfg.max_epochs = 5000;
  cfg.patience = 30;
  cfg.batch_size = 2;
  cfg.learning_rate = 1e-2;
  Model m = Model::Create(Arch(ModelKind::kDae, {16, 32, 8, 32, 16}), 4);
  const models::TrainHistory h = models::Train(m, train, validation, cfg);
  double min_val = INFINITY;
  for (const auto& e : h.epochs) min_val = std::min(min_val, e.validation.total);
  const double restored =
      models::EvaluateLoss(m, validation, cfg, models::ValidationNoiseSeed(cfg)).total;
  const bool pass = h.stopped_early && h.epochs_run() == h.best_epoch + cfg.patience &&
                    h.best_validation == min_val && restored == min_val;
  std::ostringstream detail;
  detail << "best epoch " << h.best_epoch << ", stopped after " << h.epochs_run()
         << ", restored loss " << Format("%.17g", restored) << " vs min "
         << Format("%.17g", min_val);
  return {pass, detail.str()};
}

Outcome GriffinLimMonotone() {
  const dsp::StftConfig cfg;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> phase(-M_PI, M_PI);
  int violations = 0;
  double largest_rise = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int frames = 20 + 5 * trial;
    Matrix mag(frames, cfg.num_bins()), init(frames, cfg.num_bins());
    for (Eigen::Index i = 0; i < mag.size(); ++i) {
      mag.data()[i] = u(rng);
      init.data()[i] = phase(rng);
    }
    const auto r = dsp::GriffinLim(mag, init, 100, cfg);
    if (r.inconsistency.size() != 100) return {false, "wrong number of iterations"};
    for (std::size_t i = 1; i < r.inconsistency.size(); ++i) {
      const double rise = r.inconsistency[i] - r.inconsistency[i - 1];
      if (rise > 0.0) {
        ++violations;
        largest_rise = std::max(largest_rise, rise / r.inconsistency[i - 1]);
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " increases over 990 steps" +
                               (violations ? ", largest relative " + Sci(largest_rise) : "")};
}

Outcome InterpolationEndpoints() {
  const auto& corpus = FullCorpus();
  // Small models fitted on a handful of notes; bit-identity does not depend
  // on model quality.
  SoundSet fit;
  for (int i = 0; i < 200; i += 25) fit.push_back(corpus.sounds[static_cast<std::size_t>(i)].frames);
  models::TrainConfig cfg;
  cfg.max_epochs = 3;
  cfg.patience = 2;
  std::vector<Model> kinds;
  for (const ArchSpec& a :
       {Arch(ModelKind::kPca, {kNumBins, 8, kNumBins}), Arch(ModelKind::kAe, {kNumBins, 8, kNumBins}),
        Arch(ModelKind::kDae, {kNumBins, 64, 8, 64, kNumBins}),
        Arch(ModelKind::kLstmAe, {kNumBins, 8, kNumBins}),
        Arch(ModelKind::kVae, {kNumBins, 64, 8, 64, kNumBins})}) {
    Model m = Model::Create(a, 5);
    models::TrainWithHoldout(m, fit, cfg);
    kinds.push_back(std::move(m));
  }
  const std::vector<std::pair<int, int>> pairs = {{0, 57}, {13, 120}, {42, 199}, {88, 150}, {101, 7}};
  interp::SynthesisConfig synth;
  int mismatches = 0, checks = 0;
  for (const Model& m : kinds) {
    for (const auto& [ia, ib] : pairs) {
      const auto& a = corpus.sounds[static_cast<std::size_t>(ia)];
      const auto& b = corpus.sounds[static_cast<std::size_t>(ib)];
      const auto ra = interp::Resynthesize(m, a, synth);
      const auto rb = interp::Resynthesize(m, b, synth);
      mismatches += interp::Hybridize(m, a, b, 1.0, synth).waveform.samples != ra.waveform.samples;
      mismatches += interp::Hybridize(m, a, b, 0.0, synth).waveform.samples != rb.waveform.samples;
      checks += 2;
    }
  }
  return {mismatches == 0, std::to_string(checks - mismatches) + "/" + std::to_string(checks) +
                               " endpoint renderings bit-identical"};
}

Outcome FoldIntegrity() {
  const fs::path dir = fs::temp_directory_path() / "latentsynth_acceptance_manifest";
  fs::remove_all(dir);
  dataset::Manifest manifest = dataset::WriteSynthCorpus(dir, dataset::CorpusSpecs());
  dataset::AssignFolds(manifest, 5, 0);
  dataset::WriteManifest(dir / "manifest.tsv", manifest);
  manifest = dataset::ReadManifest(dir / "manifest.tsv");
  const dataset::Corpus corpus = dataset::BuildFrames(manifest, dir, dataset::AnalysisConfig{});
  fs::remove_all(dir);
  if (!corpus.errors.empty() || corpus.sounds.size() != manifest.entries.size()) {
    return {false, "corpus failed to load"};
  }
  const std::vector<int> folds = eval::CorpusFolds(corpus, 5, 0);
  std::ostringstream problems;
  // Every sound in exactly one test fold.
  std::vector<int> times_tested(corpus.sounds.size(), 0);
  for (int f = 0; f < 5; ++f) {
    const auto test = manifest.TestIndices(f);
    const auto train = manifest.TrainIndices(f);
    if (test.size() + train.size() != corpus.sounds.size()) problems << "fold " << f << " size; ";
    for (int i : test) ++times_tested[static_cast<std::size_t>(i)];
    for (int i : test) {
      if (folds[static_cast<std::size_t>(i)] != f) problems << "fold mismatch " << i << "; ";
    }
    // Exhaustive frame check: no (sound, frame) pair and no identical frame
    // vector on both sides.
    std::set<std::pair<std::string, int>> train_frames;
    std::set<std::vector<double>> train_rows;
    for (int i : train) {
      const auto& s = corpus.sounds[static_cast<std::size_t>(i)];
      for (int r = 0; r < s.num_voiced(); ++r) {
        train_frames.insert({s.id, s.frame_index[static_cast<std::size_t>(r)]});
        train_rows.insert(std::vector<double>(s.frames.row(r).begin(), s.frames.row(r).end()));
      }
    }
    int leaked = 0;
    for (int i : test) {
      const auto& s = corpus.sounds[static_cast<std::size_t>(i)];
      for (int r = 0; r < s.num_voiced(); ++r) {
        leaked += train_frames.count({s.id, s.frame_index[static_cast<std::size_t>(r)]}) > 0;
        leaked += train_rows.count(std::vector<double>(s.frames.row(r).begin(), s.frames.row(r).end())) > 0;
      }
    }
    if (leaked) problems << "fold " << f << " leaks " << leaked << " frames; ";
  }
  for (std::size_t i = 0; i < times_tested.size(); ++i) {
    if (times_tested[i] != 1) problems << corpus.sounds[i].id << " tested " << times_tested[i] << "x; ";
  }
  const std::string p = problems.str();
  return {p.empty(), p.empty() ? std::to_string(corpus.sounds.size()) +
                                     " sounds, each tested once, no leaked frames"
                               : p};
}

std::vector<Criterion> AllCriteria() {
  return {
      {1, "STFT round trip", 5, StftRoundTrip},
      {2, "gradient correctness", 60, Gradients},
      {3, "KL closed form vs Monte Carlo", 30, KlOracle},
      {4, "PCA not beaten by linear AE", 600, PcaBeatsLinearAe},
      {5, "PCA RMSE non-increasing in enc", 60, PcaMonotone},
      {6, "DAE below PCA at enc=8", 1800, DaeBeatsPca},
      {7, "VAE beta trade-off", 1800, BetaTradeOff},
      {8, "early stopping contract", 0, EarlyStopping},
      {9, "Griffin-Lim monotonicity", 0, GriffinLimMonotone},
      {10, "interpolation endpoints", 0, InterpolationEndpoints},
      {11, "k-fold integrity", 0, FoldIntegrity},
  };
}

}  // namespace
}  // namespace latentsynth::acceptance

int main(int argc, char** argv) {
  using namespace latentsynth::acceptance;
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : AllCriteria()) {
    if (!selected.empty() && !selected.count(c.number)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = Format("%.1fs", seconds);
    if (c.budget_seconds > 0) {
      timing += Format(" of %.0fs budget", c.budget_seconds);
      if (seconds > c.budget_seconds) {
        o.pass = false;
        o.detail += "; over time budget";
      }
    }
    failures += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.name
              << "): " << o.detail << " [" << timing << "]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
