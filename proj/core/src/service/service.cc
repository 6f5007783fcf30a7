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

#include "latentsynth/service/service.h"

#include <algorithm>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "latentsynth/dsp/audio_io.h"
#include "latentsynth/interp/interp.h"

namespace latentsynth::service {
namespace {

using nlohmann::json;

// Error carrying an HTTP status.
class HttpError : public Error {
 public:
  HttpError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

Response JsonResponse(int status, const json& body) {
  Response r;
  r.status = status;
  r.body = body.dump();
  return r;
}

Response ErrorResponse(int status, const std::string& message) {
  return JsonResponse(status, json{{"error", message}});
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

// Spectrograms are for display; single precision keeps the payload small.
json SpectrogramToJson(const Matrix& db) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < db.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < db.cols(); ++c) row.push_back(static_cast<float>(db(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorToJson(std::span<const double> v) { return json(std::vector<double>(v.begin(), v.end())); }

Matrix ParseCodes(const json& j, int enc) {
  if (!j.is_array()) throw HttpError(400, "'codes' must be an array of rows");
  Matrix m(static_cast<Eigen::Index>(j.size()), enc);
  for (std::size_t r = 0; r < j.size(); ++r) {
    const json& row = j[r];
    if (!row.is_array()) throw HttpError(400, "'codes' must be an array of rows");
    if (row.size() != static_cast<std::size_t>(enc)) {
      throw HttpError(400, "dimension mismatch: code row " + std::to_string(r) + " has " +
                               std::to_string(row.size()) + " entries, model expects " +
                               std::to_string(enc));
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_number()) throw HttpError(400, "codes must be numbers");
      const double v = row[c].get<double>();
      if (!std::isfinite(v)) throw HttpError(400, "codes must be finite");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
    }
  }
  return m;
}

std::vector<double> ParseNumbers(const json& j, const char* name) {
  if (!j.is_array()) throw HttpError(400, std::string("'") + name + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw HttpError(400, std::string("'") + name + "' must hold numbers");
    out.push_back(v.get<double>());
    if (!std::isfinite(out.back())) throw HttpError(400, std::string("'") + name + "' must be finite");
  }
  return out;
}

const json& Require(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end()) throw HttpError(400, std::string("missing field '") + key + "'");
  return *it;
}

json ParseJsonBody(const Request& req) {
  try {
    json body = json::parse(req.body);
    if (!body.is_object()) throw HttpError(400, "request body must be a JSON object");
    return body;
  } catch (const json::exception& e) {
    throw HttpError(400, std::string("malformed JSON: ") + e.what());
  }
}

bool LooksLikeJson(const Request& req) {
  if (req.content_type.find("json") != std::string::npos) return true;
  const auto first = req.body.find_first_not_of(" \t\r\n");
  return req.content_type.empty() && first != std::string::npos && req.body[first] == '{';
}

bool WantsWav(const Request& req) {
  auto it = req.query.find("format");
  if (it != req.query.end()) return it->second == "wav";
  return req.accept.find("audio/wav") != std::string::npos ||
         req.accept.find("audio/x-wav") != std::string::npos;
}

}  // namespace

struct LatentService::State {
  models::ModelBundle bundle;
  dataset::AnalysisConfig analysis;
  std::vector<dataset::SoundFrames> sounds;
  std::vector<Matrix> codes;
  std::unordered_map<std::string, std::size_t> index;
  Vector code_mean;
  Vector code_std;

  const dataset::SoundFrames& Sound(const std::string& id, std::size_t* slot = nullptr) const {
    auto it = index.find(id);
    if (it == index.end()) throw HttpError(404, "unknown sound id '" + id + "'");
    if (slot) *slot = it->second;
    return sounds[it->second];
  }
};

struct LatentService::Server {
  httplib::Server http;
  std::thread thread;
};

LatentService::LatentService(ServiceOptions options) : options_(std::move(options)) {}

LatentService::~LatentService() { Stop(); }

void LatentService::Load(models::ModelBundle bundle, dataset::Corpus library,
                         dataset::AnalysisConfig analysis) {
  analysis.preproc = bundle.preproc;
  auto state = std::make_shared<State>(State{std::move(bundle), analysis, {}, {}, {}, {}, {}});
  const models::Model& model = state->bundle.model;
  const int enc = model.enc();
  Vector sum = Vector::Zero(enc);
  Vector sum_sq = Vector::Zero(enc);
  double count = 0.0;
  for (auto& s : library.sounds) {
    if (s.num_voiced() == 0) continue;
    if (s.frames.cols() != model.input_dim()) {
      throw InvalidArgument("sound " + s.id + " does not match the model input size");
    }
    if (state->index.count(s.id)) throw InvalidArgument("duplicate sound id " + s.id);
    Matrix z = model.Encode(s.frames);
    sum += z.colwise().sum().transpose();
    sum_sq += z.array().square().colwise().sum().matrix().transpose();
    count += static_cast<double>(z.rows());
    state->index.emplace(s.id, state->sounds.size());
    state->sounds.push_back(std::move(s));
    state->codes.push_back(std::move(z));
  }
  state->code_mean = count > 0 ? Vector(sum / count) : Vector(Vector::Zero(enc));
  state->code_std = Vector::Zero(enc);
  if (count > 1) {
    const Vector var = (sum_sq - count * state->code_mean.cwiseAbs2()) / (count - 1);
    state->code_std = var.cwiseMax(0.0).cwiseSqrt();
  }
  std::lock_guard<std::mutex> lock(mu_);
  state_ = std::move(state);
}

bool LatentService::loaded() const { return state() != nullptr; }

std::shared_ptr<const LatentService::State> LatentService::state() const {
  std::lock_guard<std::mutex> lock(mu_);
  return state_;
}

Response LatentService::Handle(const Request& req) const {
  const auto st = state();
  auto rendered = [&](const interp::Rendering& r, const Request& request) {
    const auto wav = dsp::EncodeWav(r.waveform);
    if (WantsWav(request)) {
      Response resp;
      resp.content_type = "audio/wav";
      resp.body.assign(wav.begin(), wav.end());
      return resp;
    }
    json body = {{"sample_rate", r.waveform.sample_rate},
                 {"num_samples", r.waveform.samples.size()},
                 {"n_frames", r.magnitudes.rows()},
                 {"wav_base64", Base64Encode(wav)},
                 {"spectrogram_db", SpectrogramToJson(r.SpectrogramDb())}};
    if (r.length_mismatch != 0) body["length_mismatch_frames"] = r.length_mismatch;
    return JsonResponse(200, body);
  };
  auto iterations = [&](const json& body) {
    int iters = options_.default_griffin_lim_iters;
    if (auto it = body.find("griffin_lim_iters"); it != body.end()) {
      if (!it->is_number_integer()) throw HttpError(400, "'griffin_lim_iters' must be an integer");
      iters = it->get<int>();
    }
    if (iters < 0 || iters > options_.max_griffin_lim_iters) {
      throw HttpError(400, "'griffin_lim_iters' must lie in [0, " +
                               std::to_string(options_.max_griffin_lim_iters) + "]");
    }
    return iters;
  };

  try {
    if (req.method == "OPTIONS") {
      Response r;
      r.status = 204;
      r.content_type.clear();
      return r;
    }
    const bool known = req.path == "/model" || req.path == "/sounds" || req.path == "/encode" ||
                       req.path == "/decode" || req.path == "/interpolate";
    if (!known) return ErrorResponse(404, "no such endpoint " + req.path);
    const bool is_get = req.path == "/model" || req.path == "/sounds";
    if (req.method != (is_get ? "GET" : "POST")) {
      return ErrorResponse(405, "method " + req.method + " not allowed on " + req.path);
    }
    if (!st) return ErrorResponse(503, "no model loaded");
    const models::Model& model = st->bundle.model;
    const models::ArchSpec& arch = model.arch();

    if (req.path == "/model") {
      return JsonResponse(
          200, {{"kind", models::KindName(arch.kind)},
                {"enc", arch.enc()},
                {"arch",
                 {{"layers", arch.layer_sizes},
                  {"hidden_activation", nn::ActivationName(arch.hidden_activation)},
                  {"output_activation", nn::ActivationName(arch.output_activation)},
                  {"decoder_variance", models::DecoderVarianceName(arch.decoder_variance)}}},
                {"preproc",
                 {{"threshold_db", st->bundle.preproc.threshold_db},
                  {"peak_target_db", st->bundle.preproc.peak_target_db}}},
                {"stft", {{"fft_size", st->analysis.stft.fft_size}, {"hop", st->analysis.stft.hop}}},
                {"silence_floor_db", st->analysis.silence_floor_db},
                {"code_stats",
                 {{"mean", VectorToJson({st->code_mean.data(), std::size_t(st->code_mean.size())})},
                  {"std", VectorToJson({st->code_std.data(), std::size_t(st->code_std.size())})}}},
                {"num_sounds", st->sounds.size()},
                {"training",
                 {{"seed", st->bundle.meta.seed},
                  {"epochs_run", st->bundle.meta.epochs_run},
                  {"beta", st->bundle.meta.beta}}}});
    }

    if (req.path == "/sounds") {
      json list = json::array();
      for (const auto& s : st->sounds) {
        list.push_back({{"id", s.id}, {"n_voiced", s.num_voiced()}, {"n_frames", s.num_stft_frames()}});
      }
      return JsonResponse(200, {{"sounds", list}});
    }

    if (req.path == "/encode") {
      dataset::SoundFrames uploaded;
      const dataset::SoundFrames* sound = nullptr;
      Matrix codes;
      json body_out;
      if (LooksLikeJson(req)) {
        const json body = ParseJsonBody(req);
        const json& id = Require(body, "sound_id");
        if (!id.is_string()) throw HttpError(400, "'sound_id' must be a string");
        std::size_t slot = 0;
        sound = &st->Sound(id.get<std::string>(), &slot);
        codes = st->codes[slot];
        body_out["sound_id"] = sound->id;
      } else {
        dsp::Waveform w;
        try {
          const auto* data = reinterpret_cast<const std::uint8_t*>(req.body.data());
          w = dsp::DecodeWav({data, req.body.size()});
          if (static_cast<int>(w.samples.size()) < st->analysis.stft.fft_size) {
            throw InvalidArgument("input too short");
          }
        } catch (const Error& e) {
          throw HttpError(400, std::string("malformed audio: ") + e.what());
        }
        uploaded = dataset::AnalyzeSound("upload", w, st->analysis);
        if (uploaded.num_voiced() == 0) throw HttpError(422, "no voiced frames");
        sound = &uploaded;
        codes = model.Encode(uploaded.frames);
      }
      body_out["codes"] = MatrixToJson(codes);
      body_out["energy_db"] = VectorToJson(sound->energy_db);
      body_out["frame_index"] = sound->frame_index;
      body_out["n_frames"] = sound->num_stft_frames();
      body_out["num_samples"] = sound->num_samples;
      return JsonResponse(200, body_out);
    }

    if (req.path == "/decode") {
      const json body = ParseJsonBody(req);
      const Matrix codes = ParseCodes(Require(body, "codes"), model.enc());
      const std::vector<double> energy = ParseNumbers(Require(body, "energy_db"), "energy_db");
      if (static_cast<Eigen::Index>(energy.size()) != codes.rows()) {
        throw HttpError(400, "'energy_db' needs one value per code row");
      }
      interp::SynthesisConfig cfg;
      cfg.preproc = st->bundle.preproc;
      cfg.griffin_lim_iters = iterations(body);

      dataset::SoundFrames blank;
      const dataset::SoundFrames* carrier = nullptr;
      if (auto it = body.find("phases_from"); it != body.end() && !it->is_null()) {
        if (!it->is_string()) throw HttpError(400, "'phases_from' must be a sound id");
        carrier = &st->Sound(it->get<std::string>());
        if (carrier->num_voiced() != codes.rows()) {
          throw HttpError(400, "sound " + carrier->id + " has " +
                                   std::to_string(carrier->num_voiced()) + " voiced frames, got " +
                                   std::to_string(codes.rows()) + " code rows");
        }
      } else {
        std::vector<int> frame_index;
        if (auto fi = body.find("frame_index"); fi != body.end()) {
          for (double v : ParseNumbers(*fi, "frame_index")) {
            if (v < 0 || v != std::floor(v)) throw HttpError(400, "bad frame index");
            frame_index.push_back(static_cast<int>(v));
          }
          if (frame_index.size() != static_cast<std::size_t>(codes.rows())) {
            throw HttpError(400, "'frame_index' needs one entry per code row");
          }
          if (!std::is_sorted(frame_index.begin(), frame_index.end(), std::less_equal<>())) {
            throw HttpError(400, "'frame_index' must be strictly increasing");
          }
        } else {
          for (int i = 0; i < codes.rows(); ++i) frame_index.push_back(i);
        }
        int n_frames = frame_index.empty() ? 0 : frame_index.back() + 1;
        if (auto nf = body.find("n_frames"); nf != body.end()) {
          if (!nf->is_number_integer()) throw HttpError(400, "'n_frames' must be an integer");
          n_frames = nf->get<int>();
        }
        if (n_frames < 1 || (!frame_index.empty() && n_frames <= frame_index.back())) {
          throw HttpError(400, "'n_frames' must cover every frame index");
        }
        if (n_frames > 100000) throw HttpError(400, "'n_frames' too large");
        blank.id = "decode";
        blank.frame_index = std::move(frame_index);
        blank.stft = st->analysis.stft;
        blank.phases = Matrix::Zero(n_frames, blank.stft.num_bins());
        blank.num_samples = dsp::SynthesisLength(n_frames, blank.stft);
        carrier = &blank;
      }
      return rendered(interp::DecodeOnto(model, codes, energy, *carrier, cfg), req);
    }

    // /interpolate
    const json body = ParseJsonBody(req);
    const json& id_a = Require(body, "id_a");
    const json& id_b = Require(body, "id_b");
    const json& alpha = Require(body, "alpha");
    if (!id_a.is_string() || !id_b.is_string()) throw HttpError(400, "ids must be strings");
    if (!alpha.is_number()) throw HttpError(400, "'alpha' must be a number");
    const double a = alpha.get<double>();
    if (!(a >= 0.0 && a <= 1.0)) throw HttpError(400, "'alpha' must lie in [0, 1]");
    interp::SynthesisConfig cfg;
    cfg.preproc = st->bundle.preproc;
    cfg.griffin_lim_iters = iterations(body);
    const auto& sa = st->Sound(id_a.get<std::string>());
    const auto& sb = st->Sound(id_b.get<std::string>());
    return rendered(interp::Hybridize(model, sa, sb, a, cfg), req);
  } catch (const HttpError& e) {
    return ErrorResponse(e.status(), e.what());
  } catch (const InvalidArgument& e) {
    return ErrorResponse(400, e.what());
  } catch (const std::exception& e) {
    return ErrorResponse(500, e.what());
  }
}

int LatentService::Start(const std::string& host, int port) {
  if (server_) throw Error("service already running");
  auto server = std::make_unique<Server>();
  httplib::Server& http = server->http;
  http.set_default_headers({{"Access-Control-Allow-Origin", options_.cors_origin},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type, Accept"}});
  auto handler = [this](const httplib::Request& hreq, httplib::Response& hres) {
    Request req;
    req.method = hreq.method;
    req.path = hreq.path;
    req.body = hreq.body;
    req.content_type = hreq.get_header_value("Content-Type");
    req.accept = hreq.get_header_value("Accept");
    for (const auto& [k, v] : hreq.params) req.query[k] = v;
    const Response res = Handle(req);
    hres.status = res.status;
    if (!res.content_type.empty()) hres.set_content(res.body, res.content_type);
  };
  http.Get(".*", handler);
  http.Post(".*", handler);
  http.Options(".*", handler);
  http.Put(".*", handler);
  http.Delete(".*", handler);

  const int bound = port == 0 ? http.bind_to_any_port(host) : (http.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  server->thread = std::thread([&http] { http.listen_after_bind(); });
  http.wait_until_ready();
  server_ = std::move(server);
  return bound;
}

void LatentService::Run(const std::string& host, int port) {
  Start(host, port);
  server_->thread.join();
}

void LatentService::Stop() {
  if (!server_) return;
  server_->http.stop();
  if (server_->thread.joinable()) server_->thread.join();
  server_.reset();
}

std::string Base64Encode(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kAlphabet[] =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 2 < bytes.size(); i += 3) {
    const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  if (i < bytes.size()) {
    std::uint32_t v = bytes[i] << 16;
    if (i + 1 < bytes.size()) v |= bytes[i + 1] << 8;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += i + 1 < bytes.size() ? kAlphabet[(v >> 6) & 63] : '=';
    out += '=';
  }
  return out;
}

std::vector<std::uint8_t> Base64Decode(const std::string& text) {
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  if (text.size() % 4 != 0) throw InvalidArgument("base64 length must be a multiple of 4");
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = text[i + k];
      if (c == '=' && i + 4 == text.size() && k >= 2) {
        v[k] = 0;
        ++pad;
      } else {
        v[k] = value(c);
        if (v[k] < 0 || pad > 0) throw InvalidArgument("invalid base64 input");
      }
    }
    const std::uint32_t n = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out.push_back(static_cast<std::uint8_t>(n >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(n >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(n));
  }
  return out;
}

}  // namespace latentsynth::service
