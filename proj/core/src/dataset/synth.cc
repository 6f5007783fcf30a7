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

#include "latentsynth/dataset/synth.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <random>

namespace latentsynth::dataset {
namespace {

constexpr int kMaxPartials = 40;

struct Partial {
  double ratio;  // of the fundamental
  double amplitude;
  double decay;  // 1/s, exponential
};

struct Envelope {
  double attack;   // s, linear ramp
  double release;  // s, linear ramp down at the end; 0 for none
};

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Envelope FamilyEnvelope(Family f) {
  switch (f) {
    case Family::kPluck: return {0.004, 0.0};
    case Family::kBrass: return {0.06, 0.25};
    case Family::kPad: return {0.6, 0.8};
    case Family::kBell: return {0.002, 0.0};
  }
  return {0.01, 0.0};
}

// Partials before loudness normalization. `brightness` is velocity / 127.
std::vector<Partial> FamilyPartials(Family f, double f0, double brightness, double nyquist) {
  std::vector<Partial> out;
  auto keep = [&](double ratio) { return ratio * f0 < 0.9 * nyquist; };
  switch (f) {
    case Family::kPluck: {
      const double tilt = 2.2 - 1.2 * brightness;
      const double pitch_scale = std::pow(f0 / 440.0, 0.3);
      for (int k = 1; k <= kMaxPartials && keep(k); ++k) {
        out.push_back({double(k), std::pow(k, -tilt), (1.2 + 0.5 * k) * pitch_scale});
      }
      break;
    }
    case Family::kBrass: {
      const double tilt = 2.6 - 1.6 * brightness;
      for (int k = 1; k <= kMaxPartials && keep(k); ++k) {
        const double fk = k * f0;
        const double formant = 1.0 + 1.5 * std::exp(-std::pow((fk - 1200.0) / 600.0, 2));
        out.push_back({double(k), std::pow(k, -tilt) * formant, 0.05});
      }
      break;
    }
    case Family::kPad: {
      const double rolloff = 0.35 - 0.25 * brightness;
      for (int k = 1; k <= kMaxPartials && keep(k); ++k) {
        const double shape = (k % 2 == 1) ? 1.0 / k : 0.25 / std::pow(k, 1.5);
        out.push_back({double(k), shape * std::exp(-rolloff * (k - 1)), 0.15});
      }
      break;
    }
    case Family::kBell: {
      // Inharmonic ratios with per-partial lifetimes.
      static constexpr double kRatios[] = {0.56, 0.92, 1.19, 1.71, 2.0, 2.74, 3.0, 3.76, 4.07};
      static constexpr double kAmps[] = {1.0, 0.67, 1.0, 1.8, 2.67, 1.67, 1.46, 1.33, 1.33};
      static constexpr double kLife[] = {1.0, 0.9, 0.65, 0.55, 0.325, 0.35, 0.25, 0.2, 0.15};
      for (int k = 0; k < 9 && keep(kRatios[k]); ++k) {
        const double tilt = std::pow(brightness, 0.15 * k);
        out.push_back({kRatios[k], kAmps[k] * tilt, 4.6 / (3.0 * kLife[k])});
      }
      break;
    }
  }
  return out;
}

// Scales amplitudes to unit energy and returns the resulting amplitude sum.
double NormalizeEnergy(std::vector<Partial>& partials) {
  double energy = 0.0;
  for (const auto& p : partials) energy += p.amplitude * p.amplitude;
  const double scale = 1.0 / std::sqrt(energy);
  double sum = 0.0;
  for (auto& p : partials) {
    p.amplitude *= scale;
    sum += p.amplitude;
  }
  return sum;
}

}  // namespace

std::string FamilyName(Family f) {
  switch (f) {
    case Family::kPluck: return "pluck";
    case Family::kBrass: return "brass";
    case Family::kPad: return "pad";
    case Family::kBell: return "bell";
  }
  return "unknown";
}

Family ParseFamily(const std::string& name) {
  for (Family f : kAllFamilies) {
    if (FamilyName(f) == name) return f;
  }
  throw InvalidArgument("unknown instrument family '" + name + "'");
}

void NoteSpec::Validate() const {
  if (pitch < kMinPitch || pitch > kMaxPitch) {
    throw InvalidArgument("pitch " + std::to_string(pitch) + " outside [21, 108]");
  }
  if (velocity < 1 || velocity > 127) {
    throw InvalidArgument("velocity " + std::to_string(velocity) + " outside [1, 127]");
  }
  if (!(duration > 0.0)) throw InvalidArgument("duration must be positive");
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
}

std::string NoteSpec::Id() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_synthetic_%03d-%03d-%03d", FamilyName(family).c_str(),
                static_cast<int>(seed % 1000), pitch, velocity);
  return buf;
}

double MidiToHz(int pitch) { return 440.0 * std::pow(2.0, (pitch - 69) / 12.0); }

dsp::Waveform SynthNote(const NoteSpec& spec) {
  spec.Validate();
  const double sr = spec.sample_rate;
  const double f0 = MidiToHz(spec.pitch);
  const double nyquist = 0.5 * sr;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * sr));

  auto partials = FamilyPartials(spec.family, f0, spec.velocity / 127.0, nyquist);
  if (partials.empty()) partials.push_back({1.0, 1.0, 0.5});
  const double amp_sum = NormalizeEnergy(partials);
  // Worst-case peak across velocities, so loudness scales linearly with
  // velocity while no velocity can clip.
  double bound = amp_sum;
  for (int v : kVelocities) {
    auto other = FamilyPartials(spec.family, f0, v / 127.0, nyquist);
    if (!other.empty()) bound = std::max(bound, NormalizeEnergy(other));
  }
  const double gain = 0.89 * (spec.velocity / 127.0) / bound;

  std::mt19937_64 rng(Mix(spec.seed ^ Mix(static_cast<std::uint64_t>(spec.family) * 1000003ULL +
                                          spec.pitch * 1009ULL + spec.velocity)));
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<double> tone(n, 0.0);
  for (const auto& p : partials) {
    const double w = 2.0 * std::numbers::pi * p.ratio * f0 / sr;
    const std::complex<double> step = std::polar(1.0, w);
    std::complex<double> osc = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
    const double fall = std::exp(-p.decay / sr);
    double amp = p.amplitude;
    for (std::size_t i = 0; i < n; ++i) {
      tone[i] += amp * osc.imag();
      osc *= step;
      amp *= fall;
      if ((i & 1023) == 1023) osc /= std::abs(osc);
    }
  }

  const Envelope env = FamilyEnvelope(spec.family);
  const double attack = env.attack * sr;
  const double release = env.release * sr;
  const double noise = 1e-4 * gain;
  dsp::Waveform w;
  w.sample_rate = spec.sample_rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double e = 1.0;
    if (i < attack) e = i / attack;
    const double remaining = static_cast<double>(n - 1 - i);
    if (release > 0.0 && remaining < release) e = std::min(e, remaining / release);
    w.samples[i] = gain * e * tone[i] + noise * (2.0 * unit(rng) - 1.0);
  }
  return w;
}

std::vector<int> DefaultPitchGrid() {
  std::vector<int> pitches;
  for (int p = 36; p <= 90; p += 6) pitches.push_back(p);
  return pitches;
}

std::vector<NoteSpec> CorpusSpecs(const std::vector<int>& pitches, std::uint64_t seed,
                                  double duration) {
  std::vector<NoteSpec> specs;
  for (Family f : kAllFamilies) {
    for (int p : pitches) {
      for (int v : kVelocities) {
        NoteSpec s;
        s.family = f;
        s.pitch = p;
        s.velocity = v;
        s.duration = duration;
        s.seed = seed;
        s.Validate();
        specs.push_back(s);
      }
    }
  }
  return specs;
}

}  // namespace latentsynth::dataset
