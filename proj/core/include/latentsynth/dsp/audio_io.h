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

#ifndef LATENTSYNTH_DSP_AUDIO_IO_H_
#define LATENTSYNTH_DSP_AUDIO_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "latentsynth/common.h"
#include "latentsynth/dsp/stft.h"

namespace latentsynth::dsp {

// WAV files are 16-bit signed little-endian PCM, mono, 16 kHz. Anything
// else is rejected with an Error naming the offending field.
Waveform DecodeWav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> EncodeWav(const Waveform& w);

Waveform ReadWav(const std::filesystem::path& path);
void WriteWav(const std::filesystem::path& path, const Waveform& w);

// Magnitude spectrogram (frames x bins) -> dB with the log floor guard.
Matrix MagnitudeToDb(const Matrix& magnitudes);

// Plain-text graymap (P2). Time runs left to right, frequency bottom to top;
// dB values are mapped linearly from [min_db, max_db] to [0, 255].
std::string FormatPgm(const Matrix& db, double min_db, double max_db);
void WritePgm(const std::filesystem::path& path, const Matrix& db, double min_db,
              double max_db);

// One row per frame, one column per bin.
void WriteCsv(const std::filesystem::path& path, const Matrix& values);

}  // namespace latentsynth::dsp

#endif  // LATENTSYNTH_DSP_AUDIO_IO_H_
