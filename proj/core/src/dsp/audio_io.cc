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

#include "latentsynth/dsp/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "latentsynth/dsp/spectral_norm.h"

namespace latentsynth::dsp {
namespace {

std::uint32_t ReadU32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t ReadU16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutTag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

Waveform DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw Error("not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = ReadU32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size() && std::memcmp(chunk, "data", 4) != 0) {
      throw Error("truncated WAV chunk");
    }
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw Error("malformed fmt chunk");
      const std::uint8_t* f = bytes.data() + body;
      const std::uint16_t format = ReadU16(f);
      const std::uint16_t channels = ReadU16(f + 2);
      const std::uint32_t rate = ReadU32(f + 4);
      const std::uint16_t bits = ReadU16(f + 14);
      if (format != 1) throw Error("unsupported WAV encoding (only PCM is accepted)");
      if (channels != 1) {
        throw Error("unsupported channel count " + std::to_string(channels) +
                    " (mono required)");
      }
      if (rate != static_cast<std::uint32_t>(kSampleRate)) {
        throw Error("unsupported sample rate " + std::to_string(rate) + " Hz (16000 required)");
      }
      if (bits != 16) {
        throw Error("unsupported bit depth " + std::to_string(bits) + " (16 required)");
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt) throw Error("WAV data chunk precedes fmt chunk");
      // Tolerate a data size that overruns the buffer (streamed writers).
      const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
      Waveform w;
      w.sample_rate = kSampleRate;
      w.samples.resize(avail / 2);
      for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(ReadU16(bytes.data() + body + 2 * i));
        w.samples[i] = raw / 32768.0;
      }
      return w;
    }
    pos = body + size + (size & 1u);
  }
  throw Error("WAV file has no data chunk");
}

std::vector<std::uint8_t> EncodeWav(const Waveform& w) {
  if (w.sample_rate != kSampleRate) {
    throw InvalidArgument("only 16 kHz audio can be written");
  }
  const auto data_bytes = static_cast<std::uint32_t>(w.samples.size() * 2);
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_bytes);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, 1);
  PutU16(out, 1);
  PutU32(out, kSampleRate);
  PutU32(out, kSampleRate * 2);
  PutU16(out, 2);
  PutU16(out, 16);
  PutTag(out, "data");
  PutU32(out, data_bytes);
  for (double s : w.samples) {
    // Same scale as DecodeWav so decoded audio re-encodes unchanged.
    const double scaled = std::isfinite(s) ? std::round(s * 32768.0) : 0.0;
    const auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
    PutU16(out, static_cast<std::uint16_t>(q));
  }
  return out;
}

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void WriteWav(const std::filesystem::path& path, const Waveform& w) {
  const std::vector<std::uint8_t> bytes = EncodeWav(w);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Matrix MagnitudeToDb(const Matrix& magnitudes) {
  return magnitudes.unaryExpr(
      [](double m) { return 20.0 * std::log10(std::max(m, 0.0) + kLogFloorGuard); });
}

std::string FormatPgm(const Matrix& db, double min_db, double max_db) {
  if (!(max_db > min_db)) throw InvalidArgument("pgm: max_db must exceed min_db");
  const Eigen::Index frames = db.rows();
  const Eigen::Index bins = db.cols();
  std::ostringstream out;
  out << "P2\n" << frames << ' ' << bins << "\n255\n";
  for (Eigen::Index k = bins - 1; k >= 0; --k) {
    for (Eigen::Index t = 0; t < frames; ++t) {
      const double u = std::clamp((db(t, k) - min_db) / (max_db - min_db), 0.0, 1.0);
      out << std::lround(u * 255.0) << (t + 1 == frames ? '\n' : ' ');
    }
  }
  return out.str();
}

void WritePgm(const std::filesystem::path& path, const Matrix& db, double min_db,
              double max_db) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << FormatPgm(db, min_db, max_db);
}

void WriteCsv(const std::filesystem::path& path, const Matrix& values) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out.precision(10);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      if (c) out << ',';
      out << values(r, c);
    }
    out << '\n';
  }
}

}  // namespace latentsynth::dsp
