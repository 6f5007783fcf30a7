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

#include "latentsynth/dataset/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <random>
#include <regex>
#include <sstream>

#include "latentsynth/dsp/audio_io.h"
#include "latentsynth/parallel.h"

namespace latentsynth::dataset {

std::optional<SoundLabels> ParseSoundName(const std::string& stem) {
  static const std::regex kPattern(R"(^([^_]+)_([^_]+)_([^-]+)-(\d{3})-(\d{3})$)");
  std::smatch m;
  if (!std::regex_match(stem, m, kPattern)) return std::nullopt;
  SoundLabels labels;
  labels.family = m[1];
  labels.source = m[2];
  labels.instrument = m[3];
  labels.pitch = std::stoi(m[4]);
  labels.velocity = std::stoi(m[5]);
  return labels;
}

std::string ManifestEntry::id() const { return std::filesystem::path(path).stem().string(); }

void Manifest::ValidateFolds() const {
  if (num_folds < 2) throw InvalidArgument("manifest has no fold assignment");
  for (const auto& e : entries) {
    if (e.fold < 0 || e.fold >= num_folds) {
      throw InvalidArgument("entry " + e.path + " has fold " + std::to_string(e.fold) +
                            " outside [0, " + std::to_string(num_folds) + ")");
    }
  }
}

std::vector<int> Manifest::TestIndices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].fold == fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> Manifest::TrainIndices(int fold) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].fold != fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> KFoldSplit(int n, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("k-fold split needs k >= 2");
  if (n < k) {
    throw InvalidArgument("cannot split " + std::to_string(n) + " items into " +
                          std::to_string(k) + " folds");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with explicit draws; std::shuffle is not portable across
  // standard libraries.
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<int> fold(static_cast<std::size_t>(n));
  for (int pos = 0; pos < n; ++pos) fold[static_cast<std::size_t>(order[pos])] = pos % k;
  return fold;
}

void AssignFolds(Manifest& manifest, int k, std::uint64_t seed) {
  const auto folds = KFoldSplit(static_cast<int>(manifest.entries.size()), k, seed);
  for (std::size_t i = 0; i < folds.size(); ++i) manifest.entries[i].fold = folds[i];
  manifest.num_folds = k;
}

Manifest ScanDirectory(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw InvalidArgument("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") {
      files.push_back(std::filesystem::relative(entry.path(), dir));
    }
  }
  std::sort(files.begin(), files.end());
  Manifest m;
  for (const auto& f : files) {
    ManifestEntry e;
    e.path = f.generic_string();
    if (auto labels = ParseSoundName(f.stem().string())) e.labels = *labels;
    m.entries.push_back(std::move(e));
  }
  return m;
}

std::string FormatManifest(const Manifest& manifest) {
  std::ostringstream out;
  out << "# path\tfamily\tsource\tinstrument\tpitch\tvelocity\tfold\n";
  out << "# folds " << manifest.num_folds << '\n';
  for (const auto& e : manifest.entries) {
    if (e.path.find('\t') != std::string::npos || e.path.find('\n') != std::string::npos) {
      throw InvalidArgument("manifest paths cannot contain tabs or newlines");
    }
    out << e.path << '\t' << e.labels.family << '\t' << e.labels.source << '\t'
        << e.labels.instrument << '\t' << e.labels.pitch << '\t' << e.labels.velocity << '\t'
        << e.fold << '\n';
  }
  return out.str();
}

Manifest ParseManifest(const std::string& text) {
  Manifest m;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      if (meta >> key && key == "folds") meta >> m.num_folds;
      continue;
    }
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 7) {
      throw InvalidArgument("manifest line " + std::to_string(line_no) + ": expected 7 fields");
    }
    ManifestEntry e;
    e.path = cols[0];
    e.labels.family = cols[1];
    e.labels.source = cols[2];
    e.labels.instrument = cols[3];
    try {
      e.labels.pitch = std::stoi(cols[4]);
      e.labels.velocity = std::stoi(cols[5]);
      e.fold = std::stoi(cols[6]);
    } catch (const std::exception&) {
      throw InvalidArgument("manifest line " + std::to_string(line_no) + ": bad number");
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

void WriteManifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << FormatManifest(manifest);
}

Manifest ReadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseManifest(buf.str());
}

Manifest WriteSynthCorpus(const std::filesystem::path& dir, const std::vector<NoteSpec>& specs,
                          int jobs) {
  std::filesystem::create_directories(dir);
  Manifest m;
  m.entries.resize(specs.size());
  ParallelFor(specs.size(), jobs, [&](std::size_t i) {
    const auto& spec = specs[i];
    const std::string name = spec.Id() + ".wav";
    dsp::WriteWav(dir / name, SynthNote(spec));
    ManifestEntry& e = m.entries[i];
    e.path = name;
    e.labels = *ParseSoundName(spec.Id());
  });
  return m;
}

SoundFrames AnalyzeSound(const std::string& id, const dsp::Waveform& w,
                         const AnalysisConfig& cfg) {
  w.Validate();
  cfg.preproc.Validate();
  const dsp::SpectralFrames spec = dsp::Stft(w, cfg.stft);
  SoundFrames out;
  out.id = id;
  out.phases = spec.phases;
  out.num_samples = static_cast<int>(w.samples.size());
  out.sample_rate = w.sample_rate;
  out.stft = cfg.stft;

  std::vector<int> voiced = dsp::VoicedFrameIndices(spec, cfg.silence_floor_db);
  // An exactly zero frame cannot be normalized even with the floor disabled.
  std::erase_if(voiced, [&](int t) { return !(spec.magnitudes.row(t).maxCoeff() > 0.0); });
  out.frames.resize(static_cast<Eigen::Index>(voiced.size()), spec.magnitudes.cols());
  for (std::size_t i = 0; i < voiced.size(); ++i) {
    const Vector mags = spec.magnitudes.row(voiced[i]).transpose();
    const dsp::NormalizedFrame nf = dsp::Preprocess(mags, cfg.preproc);
    out.frames.row(static_cast<Eigen::Index>(i)) = nf.values.transpose();
    out.energy_db.push_back(nf.energy_db);
  }
  out.frame_index = std::move(voiced);
  return out;
}

Matrix AssembleMagnitudes(const SoundFrames& sound, const Matrix& normalized,
                          std::span<const double> energy_db, const dsp::PreprocConfig& cfg) {
  if (normalized.rows() != static_cast<Eigen::Index>(sound.frame_index.size())) {
    throw InvalidArgument("expected " + std::to_string(sound.frame_index.size()) +
                          " frames, got " + std::to_string(normalized.rows()));
  }
  if (normalized.cols() != sound.phases.cols()) {
    throw InvalidArgument("frame width does not match the STFT");
  }
  const Matrix voiced = dsp::DbToMagnitude(dsp::NormalizedToDb(normalized, energy_db, cfg));
  Matrix full = Matrix::Zero(sound.phases.rows(), sound.phases.cols());
  for (std::size_t i = 0; i < sound.frame_index.size(); ++i) {
    full.row(sound.frame_index[i]) = voiced.row(static_cast<Eigen::Index>(i));
  }
  return full;
}

std::size_t Corpus::TotalFrames() const {
  std::size_t n = 0;
  for (const auto& s : sounds) n += static_cast<std::size_t>(s.num_voiced());
  return n;
}

const SoundFrames* Corpus::Find(const std::string& id) const {
  for (const auto& s : sounds) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

namespace {

template <typename Load>
Corpus Collect(std::size_t n, int jobs, Load&& load) {
  std::vector<std::optional<SoundFrames>> slots(n);
  std::vector<std::string> failures(n);
  ParallelFor(n, jobs, [&](std::size_t i) {
    try {
      slots[i] = load(i);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  Corpus corpus;
  for (std::size_t i = 0; i < n; ++i) {
    if (slots[i]) {
      corpus.sounds.push_back(std::move(*slots[i]));
    } else {
      corpus.errors.push_back(failures[i]);
    }
  }
  return corpus;
}

}  // namespace

Corpus BuildFrames(const Manifest& manifest, const std::filesystem::path& root,
                   const AnalysisConfig& cfg, int jobs) {
  return Collect(manifest.entries.size(), jobs, [&](std::size_t i) {
    const ManifestEntry& e = manifest.entries[i];
    std::filesystem::path p(e.path);
    if (p.is_relative()) p = root / p;
    try {
      SoundFrames s = AnalyzeSound(e.id(), dsp::ReadWav(p), cfg);
      s.fold = e.fold;
      return s;
    } catch (const std::exception& ex) {
      throw Error(e.path + ": " + ex.what());
    }
  });
}

Corpus BuildSynthFrames(const std::vector<NoteSpec>& specs, const AnalysisConfig& cfg,
                        int jobs) {
  return Collect(specs.size(), jobs, [&](std::size_t i) {
    return AnalyzeSound(specs[i].Id(), SynthNote(specs[i]), cfg);
  });
}

std::vector<Matrix> SelectFrames(const Corpus& corpus, const std::vector<int>& indices) {
  std::vector<Matrix> out;
  out.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= static_cast<int>(corpus.sounds.size())) {
      throw InvalidArgument("sound index out of range");
    }
    out.push_back(corpus.sounds[static_cast<std::size_t>(i)].frames);
  }
  return out;
}

}  // namespace latentsynth::dataset
