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

#ifndef LATENTSYNTH_DATASET_CORPUS_H_
#define LATENTSYNTH_DATASET_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/dataset/synth.h"
#include "latentsynth/dsp/spectral_norm.h"
#include "latentsynth/dsp/stft.h"

namespace latentsynth::dataset {

// Labels carried by an NSynth-style file name
// "<family>_<source>_<instrument>-<pitch>-<velocity>.wav".
struct SoundLabels {
  std::string family;
  std::string source;
  std::string instrument;
  int pitch = 0;
  int velocity = 0;
};

// Returns nullopt when the stem does not follow the naming scheme.
std::optional<SoundLabels> ParseSoundName(const std::string& stem);

struct ManifestEntry {
  std::string path;  // relative to the manifest directory, or absolute
  SoundLabels labels;
  int fold = -1;  // test fold, -1 before assignment

  // File stem; stable sound id.
  std::string id() const;
};

struct Manifest {
  std::vector<ManifestEntry> entries;
  int num_folds = 0;

  // Throws unless every entry has a fold in [0, num_folds).
  void ValidateFolds() const;
  std::vector<int> TestIndices(int fold) const;
  std::vector<int> TrainIndices(int fold) const;
};

// Test-fold index per item: a seeded shuffle dealt round-robin into k folds,
// so fold sizes differ by at most one. Throws if n < k or k < 2.
std::vector<int> KFoldSplit(int n, int k, std::uint64_t seed);
void AssignFolds(Manifest& manifest, int k, std::uint64_t seed);

// Every *.wav under dir (sorted by name). Files with names outside the
// scheme are kept with empty labels.
Manifest ScanDirectory(const std::filesystem::path& dir);

// Tab-separated lines: path, family, source, instrument, pitch, velocity,
// fold. Lines starting with '#' are comments.
std::string FormatManifest(const Manifest& manifest);
Manifest ParseManifest(const std::string& text);
void WriteManifest(const std::filesystem::path& path, const Manifest& manifest);
Manifest ReadManifest(const std::filesystem::path& path);

// Writes one WAV per spec into dir and returns the matching manifest
// (paths relative to dir, folds unassigned).
Manifest WriteSynthCorpus(const std::filesystem::path& dir, const std::vector<NoteSpec>& specs,
                          int jobs = 1);

struct AnalysisConfig {
  dsp::StftConfig stft;
  dsp::PreprocConfig preproc;
  double silence_floor_db = dsp::kDefaultSilenceFloorDb;
};

// Model-ready frames of one sound plus the side information needed to put
// it back together.
struct SoundFrames {
  std::string id;
  int fold = -1;                 // copied from the manifest when known
  Matrix frames;                 // voiced frames x bins, normalized to [-1, 1]
  std::vector<int> frame_index;  // STFT frame of each row
  std::vector<double> energy_db; // per row
  Matrix phases;                 // all STFT frames x bins
  int num_samples = 0;
  int sample_rate = kSampleRate;
  dsp::StftConfig stft;

  int num_voiced() const { return static_cast<int>(frames.rows()); }
  int num_stft_frames() const { return static_cast<int>(phases.rows()); }
};

// STFT, silence removal, per-frame normalization. May return zero voiced
// frames for a silent input.
SoundFrames AnalyzeSound(const std::string& id, const dsp::Waveform& w,
                         const AnalysisConfig& cfg);

// Linear magnitudes for every STFT frame of `sound`, taking the voiced rows
// from `normalized` (same row layout as sound.frames) with the given
// per-row energies. Frames removed as silence stay zero.
Matrix AssembleMagnitudes(const SoundFrames& sound, const Matrix& normalized,
                          std::span<const double> energy_db, const dsp::PreprocConfig& cfg);

struct Corpus {
  std::vector<SoundFrames> sounds;
  // Per-file failures as "path: reason"; the rest of the corpus still loads.
  std::vector<std::string> errors;

  std::size_t TotalFrames() const;
  const SoundFrames* Find(const std::string& id) const;
};

// Loads and analyzes every manifest entry, in manifest order. Entries that
// fail are reported in errors and skipped.
Corpus BuildFrames(const Manifest& manifest, const std::filesystem::path& root,
                   const AnalysisConfig& cfg, int jobs = 1);

// Same, synthesizing in memory instead of reading files.
Corpus BuildSynthFrames(const std::vector<NoteSpec>& specs, const AnalysisConfig& cfg,
                        int jobs = 1);

// Frame matrices of the selected sounds, in order.
std::vector<Matrix> SelectFrames(const Corpus& corpus, const std::vector<int>& indices);

}  // namespace latentsynth::dataset

#endif  // LATENTSYNTH_DATASET_CORPUS_H_
