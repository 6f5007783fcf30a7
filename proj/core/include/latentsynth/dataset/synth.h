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

#ifndef LATENTSYNTH_DATASET_SYNTH_H_
#define LATENTSYNTH_DATASET_SYNTH_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "latentsynth/dsp/stft.h"

namespace latentsynth::dataset {

enum class Family { kPluck, kBrass, kPad, kBell };

inline constexpr std::array<Family, 4> kAllFamilies = {Family::kPluck, Family::kBrass,
                                                       Family::kPad, Family::kBell};
inline constexpr std::array<int, 5> kVelocities = {25, 50, 75, 100, 127};
inline constexpr int kMinPitch = 21;
inline constexpr int kMaxPitch = 108;

std::string FamilyName(Family f);
Family ParseFamily(const std::string& name);

struct NoteSpec {
  Family family = Family::kPluck;
  int pitch = 60;  // MIDI
  int velocity = 100;
  double duration = 4.0;  // seconds
  std::uint64_t seed = 0;
  int sample_rate = kSampleRate;

  void Validate() const;
  // NSynth-style name, e.g. "pluck_synthetic_000-060-100".
  std::string Id() const;
};

double MidiToHz(int pitch);

// Additive note: a harmonic (or, for bells, inharmonic) partial stack with a
// family-specific spectral tilt and amplitude envelope. Velocity raises both
// loudness and brightness. Peak amplitude stays below 0.9. Bit-identical
// for equal specs.
dsp::Waveform SynthNote(const NoteSpec& spec);

// Ten pitches from 36 to 90 in steps of six semitones.
std::vector<int> DefaultPitchGrid();

// Every family x pitch x velocity combination, family-major. 200 notes with
// the defaults.
std::vector<NoteSpec> CorpusSpecs(const std::vector<int>& pitches = DefaultPitchGrid(),
                                  std::uint64_t seed = 0, double duration = 4.0);

}  // namespace latentsynth::dataset

#endif  // LATENTSYNTH_DATASET_SYNTH_H_
