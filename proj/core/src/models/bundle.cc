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

#include "latentsynth/models/bundle.h"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace latentsynth::models {
namespace {

constexpr const char* kMagic = "latentsynth-bundle";
constexpr int kVersion = 1;

std::string Hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%a", v);
  return buf;
}

double ParseDouble(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw Error("bundle: bad number '" + token + "'");
  return v;
}

void WriteTensor(std::ostream& out, const std::string& name, const Matrix& m) {
  out << "tensor " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  int on_line = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out << Hex(m(r, c));
      if (++on_line == 8) {
        out << '\n';
        on_line = 0;
      } else {
        out << ' ';
      }
    }
  }
  if (on_line != 0) out << '\n';
}

std::vector<std::pair<std::string, Matrix>> PcaTensors(const pca::PcaModel& p) {
  Matrix stats(1, 2);
  stats << p.total_variance, static_cast<double>(p.num_observations);
  return {{"pca.mean", p.mean},
          {"pca.components", p.components},
          {"pca.eigenvalues", p.eigenvalues},
          {"pca.stats", stats}};
}

}  // namespace

std::string SerializeBundle(const ModelBundle& bundle) {
  const Model& model = bundle.model;
  const ArchSpec& arch = model.arch();
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "kind " << KindName(arch.kind) << '\n';
  out << "layers " << arch.LayersString() << '\n';
  out << "hidden_activation " << nn::ActivationName(arch.hidden_activation) << '\n';
  out << "output_activation " << nn::ActivationName(arch.output_activation) << '\n';
  out << "decoder_variance " << DecoderVarianceName(arch.decoder_variance) << '\n';
  out << "threshold_db " << Hex(bundle.preproc.threshold_db) << '\n';
  out << "peak_target_db " << Hex(bundle.preproc.peak_target_db) << '\n';
  out << "seed " << bundle.meta.seed << '\n';
  out << "epochs_run " << bundle.meta.epochs_run << '\n';
  out << "beta " << Hex(bundle.meta.beta) << '\n';
  out << "final_train_loss " << Hex(bundle.meta.final_train_loss) << '\n';
  out << "final_validation_loss " << Hex(bundle.meta.final_validation_loss) << '\n';
  if (arch.kind == ModelKind::kPca) {
    if (model.pca().dim() != arch.input_dim()) throw Error("cannot save an unfitted PCA model");
    const auto tensors = PcaTensors(model.pca());
    out << "tensors " << tensors.size() << '\n';
    for (const auto& [name, m] : tensors) WriteTensor(out, name, m);
  } else {
    const auto params = model.parameters();
    out << "tensors " << params.size() << '\n';
    for (const nn::Parameter* p : params) WriteTensor(out, p->name, p->value);
  }
  out << "end\n";
  return out.str();
}

ModelBundle ParseBundle(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != kMagic) throw Error("not a model bundle");
  if (version != kVersion) throw Error("unsupported bundle version " + std::to_string(version));

  std::map<std::string, std::string> header;
  std::string key;
  std::size_t num_tensors = 0;
  while (in >> key) {
    if (key == "tensors") {
      in >> num_tensors;
      break;
    }
    std::string value;
    if (!(in >> value)) throw Error("bundle: missing value for " + key);
    header[key] = value;
  }
  auto field = [&header](const std::string& k) -> const std::string& {
    auto it = header.find(k);
    if (it == header.end()) throw Error("bundle: missing field '" + k + "'");
    return it->second;
  };

  ArchSpec arch;
  arch.kind = ParseKind(field("kind"));
  arch.layer_sizes = ParseLayers(field("layers"));
  arch.hidden_activation = nn::ParseActivation(field("hidden_activation"));
  arch.output_activation = nn::ParseActivation(field("output_activation"));
  arch.decoder_variance = ParseDecoderVariance(field("decoder_variance"));
  arch.Validate();

  dsp::PreprocConfig preproc;
  preproc.threshold_db = ParseDouble(field("threshold_db"));
  preproc.peak_target_db = ParseDouble(field("peak_target_db"));
  preproc.Validate();

  TrainingMetadata meta;
  meta.seed = std::strtoull(field("seed").c_str(), nullptr, 10);
  meta.epochs_run = std::stoi(field("epochs_run"));
  meta.beta = ParseDouble(field("beta"));
  meta.final_train_loss = ParseDouble(field("final_train_loss"));
  meta.final_validation_loss = ParseDouble(field("final_validation_loss"));

  std::map<std::string, Matrix> tensors;
  for (std::size_t i = 0; i < num_tensors; ++i) {
    std::string tag, name;
    Eigen::Index rows = 0, cols = 0;
    if (!(in >> tag >> name >> rows >> cols) || tag != "tensor" || rows < 0 || cols < 0) {
      throw Error("bundle: malformed tensor header");
    }
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        std::string token;
        if (!(in >> token)) throw Error("bundle: truncated tensor " + name);
        m(r, c) = ParseDouble(token);
      }
    }
    if (!tensors.emplace(name, std::move(m)).second) {
      throw Error("bundle: duplicate tensor " + name);
    }
  }
  std::string end;
  if (!(in >> end) || end != "end") throw Error("bundle: missing end marker");

  auto take = [&tensors](const std::string& name, Eigen::Index rows,
                         Eigen::Index cols) -> Matrix {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw Error("bundle: missing tensor " + name);
    if (it->second.rows() != rows || it->second.cols() != cols) {
      throw Error("bundle: tensor " + name + " has shape " + std::to_string(it->second.rows()) +
                  "x" + std::to_string(it->second.cols()) + ", expected " +
                  std::to_string(rows) + "x" + std::to_string(cols));
    }
    Matrix out = std::move(it->second);
    tensors.erase(it);
    return out;
  };

  Model model = Model::CreateZero(arch);
  if (arch.kind == ModelKind::kPca) {
    pca::PcaModel p;
    p.mean = take("pca.mean", arch.input_dim(), 1);
    p.components = take("pca.components", arch.enc(), arch.input_dim());
    p.eigenvalues = take("pca.eigenvalues", arch.enc(), 1);
    const Matrix stats = take("pca.stats", 1, 2);
    p.total_variance = stats(0, 0);
    p.num_observations = static_cast<int>(stats(0, 1));
    model.set_pca(std::move(p));
  } else {
    for (nn::Parameter* param : model.parameters()) {
      param->value = take(param->name, param->value.rows(), param->value.cols());
      param->ZeroGrad();
    }
  }
  if (!tensors.empty()) throw Error("bundle: unexpected tensor " + tensors.begin()->first);
  return ModelBundle{std::move(model), preproc, meta};
}

void SaveBundle(const std::filesystem::path& path, const ModelBundle& bundle) {
  const std::string text = SerializeBundle(bundle);
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

ModelBundle LoadBundle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseBundle(buf.str());
}

}  // namespace latentsynth::models
