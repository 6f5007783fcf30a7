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

#include "cli.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "latentsynth/dataset/corpus.h"
#include "latentsynth/dsp/audio_io.h"
#include "latentsynth/eval/benchmark.h"
#include "latentsynth/eval/correlation.h"
#include "latentsynth/interp/interp.h"
#include "latentsynth/models/bundle.h"
#include "latentsynth/service/service.h"
#include "latentsynth/version.h"

namespace latentsynth::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// Raised for bad flag values found after parsing; maps to kExitUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string DefaultOutDir() {
  const char* env = std::getenv("LATENTSYNTH_OUT");
  return env && *env ? env : "out";
}

std::vector<int> ParseIntList(const std::string& text, const char* what) {
  std::vector<int> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

std::vector<double> ParseDoubleList(const std::string& text, const char* what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string("bad ") + what + " '" + item + "'");
    }
  }
  if (out.empty()) throw UsageError(std::string("empty ") + what + " list");
  return out;
}

template <typename Fn>
void Validated(Fn&& fn) {
  try {
    fn();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Every option of the subcommand as name=value, sorted; the run log hashes
// this so reruns with equal settings share a hash.
std::map<std::string, std::string> EffectiveConfig(const CLI::App& sub) {
  std::map<std::string, std::string> cfg;
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    // Output location and thread count do not change results.
    if (name.empty() || name == "help" || name == "config" || name == "out" || name == "jobs") {
      continue;
    }
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) value += (value.empty() ? "" : ",") + r;
    } else {
      value = opt->get_default_str();
    }
    cfg[name] = value;
  }
  return cfg;
}

void WriteRunLog(const fs::path& dir, const CLI::App& sub, const std::vector<std::string>& args,
                 std::uint64_t seed) {
  fs::create_directories(dir);
  const auto cfg = EffectiveConfig(sub);
  std::string canonical;
  for (const auto& [k, v] : cfg) canonical += k + "=" + v + "\n";
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  json log = {{"command", sub.get_name()},
              {"args", args},
              {"seed", seed},
              {"config", cfg},
              {"config_hash", Hex64(Fnv1a(canonical))},
              {"version", kVersion},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                            std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"compiler", __VERSION__},
              {"started_utc", stamp}};
  std::ofstream(dir / "run.json") << log.dump(2) << '\n';
}

void ApplyConfigFile(CLI::App& sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (!opt || key == "config") {
      throw UsageError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (opt->count() > 0) continue;  // the command line wins
    opt->add_result(value);
    opt->run_callback();
  }
}

// ---------------------------------------------------------------------------
// Shared option groups.

struct CorpusOptions {
  std::string data;
  bool synthetic = false;
  std::string pitches = "36,42,48,54,60,66,72,78,84,90";
  std::uint64_t synth_seed = 0;
  double duration = 4.0;
  double silence_floor_db = dsp::kDefaultSilenceFloorDb;
  int jobs = 1;
};

void AddCorpusOptions(CLI::App* sub, CorpusOptions& o) {
  sub->add_option("--data", o.data,
                  "Corpus directory of WAV files (uses its manifest.tsv when present)");
  sub->add_flag("--synthetic", o.synthetic, "Use the in-memory synthetic corpus");
  sub->add_option("--pitches", o.pitches, "Synthetic corpus pitch grid")->capture_default_str();
  sub->add_option("--synth_seed", o.synth_seed, "Synthetic corpus seed")->capture_default_str();
  sub->add_option("--duration", o.duration, "Synthetic note length in seconds")
      ->capture_default_str();
  sub->add_option("--silence_floor_db", o.silence_floor_db,
                  "Drop frames this far below the file peak")
      ->capture_default_str();
  sub->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str();
}

void AddPreprocOptions(CLI::App* sub, dsp::PreprocConfig& p) {
  sub->add_option("--threshold_db", p.threshold_db, "Log-magnitude floor relative to the frame peak")
      ->capture_default_str();
  sub->add_option("--peak_target_db", p.peak_target_db, "Level the frame peak is moved to")
      ->capture_default_str();
}

void CheckCorpusOptions(const CorpusOptions& o) {
  if (o.data.empty() == !o.synthetic) throw UsageError("pass exactly one of --data or --synthetic");
  if (o.jobs < 1) throw UsageError("--jobs must be positive");
  if (o.synthetic) {
    for (int p : ParseIntList(o.pitches, "pitch")) {
      if (p < dataset::kMinPitch || p > dataset::kMaxPitch) {
        throw UsageError("pitch " + std::to_string(p) + " outside [21, 108]");
      }
    }
    if (!(o.duration > 0.0)) throw UsageError("--duration must be positive");
  } else if (!fs::is_directory(o.data)) {
    throw UsageError("--data " + o.data + " is not a directory");
  }
}

dataset::Manifest CorpusManifest(const CorpusOptions& o) {
  const fs::path manifest = fs::path(o.data) / "manifest.tsv";
  return fs::exists(manifest) ? dataset::ReadManifest(manifest) : dataset::ScanDirectory(o.data);
}

dataset::Corpus LoadCorpus(const CorpusOptions& o, const dsp::PreprocConfig& preproc,
                           std::ostream& err) {
  dataset::AnalysisConfig cfg;
  cfg.preproc = preproc;
  cfg.silence_floor_db = o.silence_floor_db;
  dataset::Corpus corpus;
  if (o.synthetic) {
    corpus = dataset::BuildSynthFrames(
        dataset::CorpusSpecs(ParseIntList(o.pitches, "pitch"), o.synth_seed, o.duration), cfg,
        o.jobs);
  } else {
    corpus = dataset::BuildFrames(CorpusManifest(o), o.data, cfg, o.jobs);
  }
  for (const auto& e : corpus.errors) err << "warning: skipped " << e << '\n';
  if (corpus.sounds.empty()) throw Error("corpus is empty");
  return corpus;
}

struct ArchOptions {
  std::string kind = "dae";
  std::string arch = "513,128,8,128,513";
  std::string hidden_activation = "tanh";
  std::string output_activation = "linear";
  std::string decoder_variance = "learned";
};

void AddArchOptions(CLI::App* sub, ArchOptions& a) {
  sub->add_option("--kind", a.kind, "pca, ae, dae, lstm_ae or vae")->capture_default_str();
  sub->add_option("--arch", a.arch, "Palindromic layer sizes")->capture_default_str();
  sub->add_option("--hidden_activation", a.hidden_activation, "tanh, sigmoid or linear")
      ->capture_default_str();
  sub->add_option("--output_activation", a.output_activation, "linear, sigmoid or tanh")
      ->capture_default_str();
  sub->add_option("--decoder_variance", a.decoder_variance, "VAE decoder variance: learned or unit")
      ->capture_default_str();
}

models::ArchSpec BuildArch(const ArchOptions& a) {
  models::ArchSpec arch;
  Validated([&] {
    arch.kind = models::ParseKind(a.kind);
    arch.layer_sizes = models::ParseLayers(a.arch);
    arch.hidden_activation = nn::ParseActivation(a.hidden_activation);
    arch.output_activation = nn::ParseActivation(a.output_activation);
    arch.decoder_variance = models::ParseDecoderVariance(a.decoder_variance);
    arch.Validate();
  });
  return arch;
}

void AddTrainOptions(CLI::App* sub, models::TrainConfig& t) {
  sub->add_option("--max_epochs", t.max_epochs)->capture_default_str();
  sub->add_option("--patience", t.patience)->capture_default_str();
  sub->add_option("--batch_size", t.batch_size)->capture_default_str();
  sub->add_option("--learning_rate", t.learning_rate)->capture_default_str();
  sub->add_option("--beta", t.beta, "KL weight (VAE)")->capture_default_str();
  sub->add_flag("--layerwise", t.layerwise, "Layer-wise pretraining (DAE)");
  sub->add_option("--seed", t.seed)->capture_default_str();
  sub->add_option("--validation_fraction", t.validation_fraction)->capture_default_str();
}

models::ModelBundle LoadModel(const std::string& path) {
  if (path.empty()) throw UsageError("--model is required");
  if (!fs::exists(path)) throw UsageError("model file " + path + " not found");
  return models::LoadBundle(path);
}

std::string Fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void WriteSpectrogram(const fs::path& stem, const Matrix& db) {
  const double top = db.size() > 0 ? db.maxCoeff() : 0.0;
  dsp::WritePgm(stem.string() + ".pgm", db, top - 100.0, top);
  dsp::WriteCsv(stem.string() + ".csv", db);
}

// ---------------------------------------------------------------------------

int Dispatch(CLI::App& app, const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  std::string out_dir = DefaultOutDir();
  std::string config_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory (default $LATENTSYNTH_OUT or ./out)");
    sub->add_option("--config", config_path, "key = value file with flag defaults");
  };

  // synth-data
  CLI::App* synth = app.add_subcommand("synth-data", "Write the synthetic corpus as WAV files");
  std::string synth_pitches = "36,42,48,54,60,66,72,78,84,90";
  std::uint64_t synth_seed = 0;
  double synth_duration = 4.0;
  int synth_folds = 5;
  int synth_jobs = 1;
  common(synth);
  synth->add_option("--pitches", synth_pitches)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();
  synth->add_option("--duration", synth_duration)->capture_default_str();
  synth->add_option("--folds", synth_folds, "Cross-validation folds stored in the manifest")
      ->capture_default_str();
  synth->add_option("--jobs", synth_jobs)->capture_default_str();

  // preprocess
  CLI::App* prep = app.add_subcommand("preprocess", "Analyze a corpus and report its frames");
  CorpusOptions prep_corpus;
  dsp::PreprocConfig prep_cfg;
  bool export_frames = false;
  common(prep);
  AddCorpusOptions(prep, prep_corpus);
  AddPreprocOptions(prep, prep_cfg);
  prep->add_flag("--export_frames", export_frames, "Also write every normalized frame to frames.csv");

  // train
  CLI::App* train = app.add_subcommand("train", "Train one model and save its bundle");
  CorpusOptions train_corpus;
  dsp::PreprocConfig train_preproc;
  ArchOptions train_arch;
  models::TrainConfig train_cfg;
  int train_fold = -1;
  int train_folds = 5;
  common(train);
  AddCorpusOptions(train, train_corpus);
  AddPreprocOptions(train, train_preproc);
  AddArchOptions(train, train_arch);
  AddTrainOptions(train, train_cfg);
  train->add_option("--fold", train_fold, "Leave this test fold out (-1 trains on every sound)")
      ->capture_default_str();
  train->add_option("--folds", train_folds)->capture_default_str();

  // evaluate
  CLI::App* evaluate = app.add_subcommand("evaluate", "Cross-validated RMSE benchmark");
  CorpusOptions eval_corpus;
  dsp::PreprocConfig eval_preproc;
  models::TrainConfig eval_train;
  std::vector<std::string> grid = {"pca=pca:513,enc,513", "dae=dae:513,128,enc,128,513"};
  std::string encs = "4,8,12,16";
  std::string models_dir;
  int folds = 5;
  common(evaluate);
  AddCorpusOptions(evaluate, eval_corpus);
  AddPreprocOptions(evaluate, eval_preproc);
  AddTrainOptions(evaluate, eval_train);
  evaluate->add_option("--grid", grid, "Model templates name=kind:layers with enc as bottleneck")
      ->capture_default_str();
  evaluate->add_option("--encs", encs, "Latent sizes")->capture_default_str();
  evaluate->add_option("--folds", folds)->capture_default_str();
  evaluate->add_option("--models", models_dir, "Directory caching trained bundles per cell");

  // correlate
  CLI::App* correlate = app.add_subcommand("correlate", "Latent correlation matrix of a model");
  CorpusOptions corr_corpus;
  std::string corr_model;
  common(correlate);
  AddCorpusOptions(correlate, corr_corpus);
  correlate->add_option("--model", corr_model, "Model bundle");

  // interpolate
  CLI::App* interpolate = app.add_subcommand("interpolate", "Hybridize two sounds in latent space");
  std::string interp_model, interp_a, interp_b;
  std::string alphas = "0,0.25,0.5,0.75,1";
  int interp_iters = dsp::kDefaultGriffinLimIterations;
  double interp_floor = dsp::kDefaultSilenceFloorDb;
  common(interpolate);
  interpolate->add_option("--model", interp_model, "Model bundle");
  interpolate->add_option("--a", interp_a, "First sound (WAV)");
  interpolate->add_option("--b", interp_b, "Second sound (WAV)");
  interpolate->add_option("--alphas", alphas)->capture_default_str();
  interpolate->add_option("--griffin_lim_iters", interp_iters)->capture_default_str();
  interpolate->add_option("--silence_floor_db", interp_floor)->capture_default_str();

  // serve
  CLI::App* serve = app.add_subcommand("serve", "HTTP service over a model and sound library");
  CorpusOptions serve_corpus;
  std::string serve_model;
  std::string host = "127.0.0.1";
  int port = 8080;
  int serve_iters = dsp::kDefaultGriffinLimIterations;
  common(serve);
  AddCorpusOptions(serve, serve_corpus);
  serve->add_option("--model", serve_model, "Model bundle");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();
  serve->add_option("--griffin_lim_iters", serve_iters, "Default when a request omits it")
      ->capture_default_str();

  app.require_subcommand(1);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  CLI::App* sub = app.get_subcommands().front();

  // Usage checks; nothing has been written yet.
  try {
    if (!config_path.empty()) ApplyConfigFile(*sub, config_path);
  } catch (const CLI::Error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }

  const fs::path out_path = out_dir;
  if (sub == synth) {
    const auto pitches = ParseIntList(synth_pitches, "pitch");
    std::vector<dataset::NoteSpec> specs;
    Validated([&] { specs = dataset::CorpusSpecs(pitches, synth_seed, synth_duration); });
    if (synth_folds < 2 || synth_folds > static_cast<int>(specs.size())) {
      throw UsageError("--folds must lie in [2, number of notes]");
    }
    WriteRunLog(out_path, *sub, args, synth_seed);
    dataset::Manifest m = dataset::WriteSynthCorpus(out_path, specs, synth_jobs);
    dataset::AssignFolds(m, synth_folds, synth_seed);
    dataset::WriteManifest(out_path / "manifest.tsv", m);
    out << "wrote " << m.entries.size() << " notes and manifest.tsv to " << out_path.string()
        << '\n';
    return kExitOk;
  }

  if (sub == prep) {
    CheckCorpusOptions(prep_corpus);
    Validated([&] { prep_cfg.Validate(); });
    WriteRunLog(out_path, *sub, args, prep_corpus.synth_seed);
    const dataset::Corpus corpus = LoadCorpus(prep_corpus, prep_cfg, err);
    std::ofstream summary(out_path / "frames_summary.csv");
    summary << "id,fold,stft_frames,voiced_frames,peak_energy_db\n";
    for (const auto& s : corpus.sounds) {
      const double peak = s.energy_db.empty()
                              ? -std::numeric_limits<double>::infinity()
                              : *std::max_element(s.energy_db.begin(), s.energy_db.end());
      summary << s.id << ',' << s.fold << ',' << s.num_stft_frames() << ',' << s.num_voiced()
              << ',' << peak << '\n';
    }
    if (export_frames) {
      std::ofstream frames(out_path / "frames.csv");
      frames << std::setprecision(17);
      for (const auto& s : corpus.sounds) {
        for (int r = 0; r < s.num_voiced(); ++r) {
          frames << s.id << ',' << s.frame_index[r] << ',' << s.energy_db[r];
          for (Eigen::Index k = 0; k < s.frames.cols(); ++k) frames << ',' << s.frames(r, k);
          frames << '\n';
        }
      }
    }
    out << corpus.sounds.size() << " sounds, " << corpus.TotalFrames() << " voiced frames, "
        << corpus.errors.size() << " failures\n";
    return corpus.errors.empty() ? kExitOk : kExitFailure;
  }

  if (sub == train) {
    CheckCorpusOptions(train_corpus);
    const models::ArchSpec arch = BuildArch(train_arch);
    Validated([&] {
      train_cfg.Validate();
      train_preproc.Validate();
    });
    if (train_fold >= train_folds) throw UsageError("--fold must be below --folds");
    WriteRunLog(out_path, *sub, args, train_cfg.seed);
    const dataset::Corpus corpus = LoadCorpus(train_corpus, train_preproc, err);
    std::vector<Matrix> sounds;
    const std::vector<int> fold_of = train_fold >= 0
                                         ? eval::CorpusFolds(corpus, train_folds, train_cfg.seed)
                                         : std::vector<int>(corpus.sounds.size(), -1);
    for (std::size_t i = 0; i < corpus.sounds.size(); ++i) {
      if (fold_of[i] != train_fold || train_fold < 0) {
        if (corpus.sounds[i].num_voiced() > 0) sounds.push_back(corpus.sounds[i].frames);
      }
    }
    models::TrainHistory history;
    const models::ModelBundle bundle =
        eval::TrainModel(arch, sounds, train_cfg, train_preproc, &history);
    models::SaveBundle(out_path / "model.bundle", bundle);
    std::ofstream(out_path / "history.csv") << models::HistoryCsv(history);
    out << arch.Label() << ": " << history.epochs_run() << " epochs, best epoch "
        << history.best_epoch << ", validation loss " << history.best_validation << '\n';
    return kExitOk;
  }

  if (sub == evaluate) {
    CheckCorpusOptions(eval_corpus);
    eval::BenchmarkSpec spec;
    Validated([&] {
      eval_preproc.Validate();
      eval_train.Validate();
      for (const auto& g : grid) spec.models.push_back(eval::ParseModelTemplate(g, eval_train));
      spec.encs = ParseIntList(encs, "enc");
      for (const auto& t : spec.models) {
        for (int e : spec.encs) (void)t.ForEnc(e);
      }
    });
    if (folds < 2) throw UsageError("--folds must be at least 2");
    spec.folds = folds;
    spec.seed = eval_train.seed;
    spec.jobs = eval_corpus.jobs;
    spec.preproc = eval_preproc;
    spec.cache_dir = models_dir;
    WriteRunLog(out_path, *sub, args, eval_train.seed);
    const dataset::Corpus corpus = LoadCorpus(eval_corpus, eval_preproc, err);
    const auto report = eval::RunBenchmark(corpus, spec, [&](const eval::CellResult& c) {
      err << c.model << " enc=" << c.enc << " fold=" << c.fold << ": "
          << (c.ok() ? Fixed(c.rmse_db, 3) + " dB" : "FAILED " + c.error) << '\n';
    });
    std::ofstream(out_path / "report.csv") << report.ToCsv(true);
    for (const auto& a : report.aggregates) {
      out << a.model << " enc=" << a.enc << " rmse=" << Fixed(a.rmse_db, 3) << " dB (+/- "
          << Fixed(a.per_sound.half_width, 3) << ")";
      if (a.has_paired) out << " vs pca " << Fixed(a.paired_vs_pca.mean, 3);
      out << '\n';
    }
    const bool any_failed = std::any_of(report.cells.begin(), report.cells.end(),
                                        [](const auto& c) { return !c.ok(); });
    return any_failed ? kExitFailure : kExitOk;
  }

  if (sub == correlate) {
    CheckCorpusOptions(corr_corpus);
    const models::ModelBundle bundle = LoadModel(corr_model);
    if (bundle.model.enc() < 2) throw UsageError("correlation needs enc >= 2");
    WriteRunLog(out_path, *sub, args, bundle.meta.seed);
    const dataset::Corpus corpus = LoadCorpus(corr_corpus, bundle.preproc, err);
    std::vector<Matrix> sounds;
    for (const auto& s : corpus.sounds) sounds.push_back(s.frames);
    const auto corr = eval::LatentCorrelation(bundle.model, sounds);
    dsp::WriteCsv(out_path / "correlation.csv", corr.values);
    // Heatmap: 1 -> white, 0 -> black; FormatPgm maps [min, max] to [0, 255].
    dsp::WritePgm(out_path / "correlation.pgm", corr.values.transpose().colwise().reverse(), 0.0,
                  1.0);
    std::ofstream summary(out_path / "correlation_summary.txt");
    summary << "sounds " << corr.num_sounds << "\nmean_abs_offdiagonal " << corr.MeanOffDiagonal()
            << "\ndead_counts";
    for (int c : corr.dead_counts) summary << ' ' << c;
    summary << '\n';
    out << "mean |r| off-diagonal: " << Fixed(corr.MeanOffDiagonal(), 4) << " over "
        << corr.num_sounds << " sounds\n";
    return kExitOk;
  }

  if (sub == interpolate) {
    if (interp_a.empty() || interp_b.empty()) throw UsageError("--a and --b are required");
    if (interp_iters < 0) throw UsageError("--griffin_lim_iters must be >= 0");
    const auto alpha_list = ParseDoubleList(alphas, "alpha");
    for (double a : alpha_list) {
      if (!(a >= 0.0 && a <= 1.0)) throw UsageError("alphas must lie in [0, 1]");
    }
    const models::ModelBundle bundle = LoadModel(interp_model);
    WriteRunLog(out_path, *sub, args, bundle.meta.seed);
    dataset::AnalysisConfig analysis;
    analysis.preproc = bundle.preproc;
    analysis.silence_floor_db = interp_floor;
    const auto a = dataset::AnalyzeSound(fs::path(interp_a).stem().string(),
                                         dsp::ReadWav(interp_a), analysis);
    const auto b = dataset::AnalyzeSound(fs::path(interp_b).stem().string(),
                                         dsp::ReadWav(interp_b), analysis);
    interp::SynthesisConfig cfg;
    cfg.griffin_lim_iters = interp_iters;
    cfg.preproc = bundle.preproc;
    json meta = {{"a", interp_a}, {"b", interp_b}, {"outputs", json::array()}};
    for (double alpha : alpha_list) {
      const auto r = interp::Hybridize(bundle.model, a, b, alpha, cfg);
      const std::string stem = "hybrid_alpha_" + Fixed(alpha, 2);
      dsp::WriteWav(out_path / (stem + ".wav"), r.waveform);
      WriteSpectrogram(out_path / stem, r.SpectrogramDb());
      meta["outputs"].push_back({{"alpha", alpha},
                                 {"wav", stem + ".wav"},
                                 {"carrier", alpha >= 0.5 ? "a" : "b"},
                                 {"length_mismatch_frames", r.length_mismatch}});
      out << "alpha " << Fixed(alpha, 2) << " -> " << stem << ".wav\n";
    }
    std::ofstream(out_path / "interpolation.json") << meta.dump(2) << '\n';
    return kExitOk;
  }

  // serve
  CheckCorpusOptions(serve_corpus);
  if (port < 0 || port > 65535) throw UsageError("--port out of range");
  models::ModelBundle bundle = LoadModel(serve_model);
  WriteRunLog(out_path, *sub, args, bundle.meta.seed);
  dataset::Corpus library = LoadCorpus(serve_corpus, bundle.preproc, err);
  service::ServiceOptions options;
  options.default_griffin_lim_iters = serve_iters;
  service::LatentService svc(options);
  dataset::AnalysisConfig analysis;
  analysis.silence_floor_db = serve_corpus.silence_floor_db;
  const auto num_sounds = library.sounds.size();
  svc.Load(std::move(bundle), std::move(library), analysis);
  err << "serving " << num_sounds << " sounds on http://" << host << ':' << port << '\n';
  svc.Run(host, port);
  return kExitOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Latent-space spectral resynthesis toolkit", "latentsynth"};
  app.set_version_flag("--version", std::string(kVersion));
  try {
    return Dispatch(app, args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace latentsynth::cli
