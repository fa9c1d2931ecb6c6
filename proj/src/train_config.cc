// Copyright 2026 The Hiertype Authors.
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

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "hiertype/errors.h"
#include "hiertype/training.h"
#include "text_util.h"

namespace hiertype {

namespace {

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw std::invalid_argument(fmt::format("bad value '{}' for {}", value, key));
  }
  return out;
}

bool ParseBool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument(fmt::format("bad value '{}' for {}", value, key));
}

ScoreFunction ParseScore(std::string_view key, std::string_view value) {
  auto f = ParseScoreFunction(value);
  if (!f) throw std::invalid_argument(fmt::format("bad score kind '{}' for {}", value, key));
  return *f;
}

}  // namespace

void SetConfigValue(TrainConfig &c, std::string_view key, std::string_view value) {
  if (key == "batch_size_typing") {
    c.batch_size_typing = ParseNumber<size_t>(key, value);
  } else if (key == "batch_size_structure") {
    c.batch_size_structure = ParseNumber<size_t>(key, value);
  } else if (key == "structure_weight") {
    c.structure_weight = ParseNumber<double>(key, value);
  } else if (key == "learning_rate") {
    c.learning_rate = ParseNumber<double>(key, value);
  } else if (key == "adam_beta1") {
    c.adam_beta1 = ParseNumber<double>(key, value);
  } else if (key == "adam_beta2") {
    c.adam_beta2 = ParseNumber<double>(key, value);
  } else if (key == "adam_eps") {
    c.adam_eps = ParseNumber<double>(key, value);
  } else if (key == "dropout_p") {
    c.dropout_p = ParseNumber<double>(key, value);
  } else if (key == "margin") {
    c.margin = ParseNumber<double>(key, value);
  } else if (key == "max_epochs") {
    c.max_epochs = ParseNumber<int>(key, value);
  } else if (key == "patience") {
    c.patience = ParseNumber<int>(key, value);
  } else if (key == "seed") {
    c.seed = ParseNumber<uint64_t>(key, value);
  } else if (key == "mention_score_kind") {
    c.mention_score_kind = ParseScore(key, value);
  } else if (key == "structure_score_kind") {
    if (value == "none") {
      c.structure_score_kind.reset();
    } else {
      c.structure_score_kind = ParseScore(key, value);
    }
  } else if (key == "dim") {
    c.dim = ParseNumber<size_t>(key, value);
  } else if (key == "filter_width") {
    c.filter_width = ParseNumber<size_t>(key, value);
  } else if (key == "encoder_mode") {
    auto mode = ParseEncoderMode(value);
    if (!mode) throw std::invalid_argument(fmt::format("bad encoder_mode '{}'", value));
    c.encoder_mode = *mode;
  } else if (key == "share_bilinear") {
    c.share_bilinear = ParseBool(key, value);
  } else if (key == "embeddings") {
    c.embeddings = std::string(value);
  } else {
    throw std::invalid_argument(fmt::format("unknown config key '{}'", key));
  }
}

TrainConfig ParseTrainConfig(std::istream &in, const std::string &source) {
  TrainConfig config;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    const auto trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) throw ParseError(source, line_no, "expected key=value");
    try {
      SetConfigValue(config, Trim(trimmed.substr(0, eq)), Trim(trimmed.substr(eq + 1)));
    } catch (const std::invalid_argument &e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return config;
}

TrainConfig LoadTrainConfig(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open config file {}", path.string()));
  return ParseTrainConfig(in, path.string());
}

void WriteTrainConfig(const TrainConfig &c, std::ostream &out) {
  out << "batch_size_typing=" << c.batch_size_typing << "\n"
      << "batch_size_structure=" << c.batch_size_structure << "\n"
      << "structure_weight=" << FormatReal(c.structure_weight) << "\n"
      << "learning_rate=" << FormatReal(c.learning_rate) << "\n"
      << "adam_beta1=" << FormatReal(c.adam_beta1) << "\n"
      << "adam_beta2=" << FormatReal(c.adam_beta2) << "\n"
      << "adam_eps=" << FormatReal(c.adam_eps) << "\n"
      << "dropout_p=" << FormatReal(c.dropout_p) << "\n"
      << "margin=" << FormatReal(c.margin) << "\n"
      << "max_epochs=" << c.max_epochs << "\n"
      << "patience=" << c.patience << "\n"
      << "seed=" << c.seed << "\n"
      << "mention_score_kind=" << ScoreFunctionName(c.mention_score_kind) << "\n"
      << "structure_score_kind="
      << (c.structure_score_kind ? ScoreFunctionName(*c.structure_score_kind) : "none")
      << "\n"
      << "dim=" << c.dim << "\n"
      << "filter_width=" << c.filter_width << "\n"
      << "encoder_mode=" << EncoderModeName(c.encoder_mode) << "\n"
      << "share_bilinear=" << (c.share_bilinear ? "true" : "false") << "\n";
  if (!c.embeddings.empty()) out << "embeddings=" << c.embeddings << "\n";
}

}  // namespace hiertype
