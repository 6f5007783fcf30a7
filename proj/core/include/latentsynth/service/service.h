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

#ifndef LATENTSYNTH_SERVICE_SERVICE_H_
#define LATENTSYNTH_SERVICE_SERVICE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "latentsynth/dataset/corpus.h"
#include "latentsynth/dsp/griffin_lim.h"
#include "latentsynth/models/bundle.h"

namespace latentsynth::service {

struct ServiceOptions {
  int default_griffin_lim_iters = dsp::kDefaultGriffinLimIterations;
  int max_griffin_lim_iters = 1000;
  std::string cors_origin = "*";
};

// Transport-independent request and response.
struct Request {
  std::string method;
  std::string path;
  std::string body;
  std::string content_type;
  std::string accept;
  std::map<std::string, std::string> query;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// JSON facade over one loaded model and an encoded sound library.
//
//   GET  /model        kind, enc, arch, preproc, per-dimension code statistics
//   GET  /sounds       ids of the encoded library
//   POST /encode       {"sound_id": id} or a raw audio/wav body
//   POST /decode       {"codes", "energy_db", "griffin_lim_iters",
//                       "phases_from"?, "frame_index"?, "n_frames"?}
//   POST /interpolate  {"id_a", "id_b", "alpha", "griffin_lim_iters"?}
//
// /decode and /interpolate answer with JSON carrying a base64 WAV and the
// dB spectrogram, or with the raw audio/wav bytes when the request sends
// "Accept: audio/wav" or "?format=wav". The model and library are fixed
// once loaded; every response is a pure function of the request.
class LatentService {
 public:
  explicit LatentService(ServiceOptions options = {});
  ~LatentService();

  LatentService(const LatentService&) = delete;
  LatentService& operator=(const LatentService&) = delete;

  // Replaces the model and encodes every sound of `library` with it.
  void Load(models::ModelBundle bundle, dataset::Corpus library,
            dataset::AnalysisConfig analysis = {});
  bool loaded() const;

  Response Handle(const Request& request) const;

  // Binds to host:port (port 0 picks a free one) and serves on a background
  // thread. Returns the bound port.
  int Start(const std::string& host, int port);
  // Serves on the calling thread until Stop().
  void Run(const std::string& host, int port);
  void Stop();

 private:
  struct State;
  struct Server;

  std::shared_ptr<const State> state() const;

  ServiceOptions options_;
  mutable std::mutex mu_;
  std::shared_ptr<const State> state_;
  std::unique_ptr<Server> server_;
};

std::string Base64Encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> Base64Decode(const std::string& text);

}  // namespace latentsynth::service

#endif  // LATENTSYNTH_SERVICE_SERVICE_H_
