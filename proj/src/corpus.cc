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

#include "hiertype/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "hiertype/errors.h"
#include "hiertype/rng.h"
#include "json.hpp"
#include "text_util.h"

namespace hiertype {

EmbeddingTable::EmbeddingTable(size_t dim) : dim_(dim), oov_(dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be positive");
}

void EmbeddingTable::Add(std::string_view token, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw ShapeError(fmt::format("embedding for '{}' has {} values, expected {}",
                                 token, vector.size(), dim_));
  }
  auto [it, inserted] = index_.try_emplace(std::string(token), index_.size());
  if (inserted) values_.resize(values_.size() + dim_);
  std::copy(vector.begin(), vector.end(), values_.begin() + it->second * dim_);
}

bool EmbeddingTable::Contains(std::string_view token) const {
  return index_.contains(std::string(token));
}

std::span<const double> EmbeddingTable::Lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return oov_;
  return std::span<const double>(values_).subspan(it->second * dim_, dim_);
}

EmbeddingTable ParseEmbeddings(std::istream &in, const std::string &source,
                               size_t dim) {
  EmbeddingTable table(dim);
  std::string line;
  size_t line_no = 0;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    const auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (fields.size() - 1 != dim) {
      throw ParseError(source, line_no,
                       fmt::format("dimension mismatch: token '{}' has {} values, expected {}",
                                   fields[0], fields.size() - 1, dim));
    }
    values.assign(dim, 0.0);
    for (size_t i = 0; i < dim; ++i) {
      const auto &f = fields[i + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw ParseError(source, line_no, fmt::format("bad number '{}'", f));
      }
    }
    table.Add(fields[0], values);
  }
  if (table.size() == 0) {
    throw DataError(fmt::format("{}: embedding file is empty", source));
  }
  return table;
}

EmbeddingTable LoadEmbeddings(const std::filesystem::path &path, size_t dim) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open embedding file {}", path.string()));
  return ParseEmbeddings(in, path.string(), dim);
}

Tensor WordMatrix(const EmbeddingTable &emb, std::span<const std::string> tokens) {
  Tensor words({tokens.size(), emb.dim()});
  for (size_t i = 0; i < tokens.size(); ++i) {
    auto v = emb.Lookup(tokens[i]);
    std::copy(v.begin(), v.end(), words.row(i).begin());
  }
  return words;
}

void ValidateMention(const Mention &m) {
  if (m.tokens.empty()) {
    throw DataError(fmt::format("mention of entity '{}' has no tokens", m.entity_id));
  }
  if (m.span_first > m.span_last || m.span_last >= m.tokens.size()) {
    throw DataError(fmt::format("mention of entity '{}': span [{}, {}] outside {} tokens",
                                m.entity_id, m.span_first, m.span_last,
                                m.tokens.size()));
  }
}

std::optional<LabeledExample> DistantLabel(const TypeHierarchy &h,
                                           std::span<const std::string> entity_types,
                                           const Mention &m) {
  std::vector<TypeId> known;
  for (const auto &name : entity_types) {
    if (auto t = h.Find(name)) known.push_back(*t);
  }
  if (known.empty()) return std::nullopt;
  return LabeledExample{m, h.Closure(known)};
}

namespace {

using nlohmann::json;

Mention MentionFromJson(const std::string &line, const std::string &source,
                        size_t line_no) {
  Mention m;
  try {
    const json record = json::parse(line);
    m.tokens = record.at("tokens").get<std::vector<std::string>>();
    const auto span = record.at("span").get<std::vector<long long>>();
    if (span.size() != 2 || span[0] < 0 || span[1] < 0) {
      throw ParseError(source, line_no, "span must be two non-negative integers");
    }
    m.span_first = static_cast<size_t>(span[0]);
    m.span_last = static_cast<size_t>(span[1]);
    m.entity_id = record.at("entity_id").get<std::string>();
    if (record.contains("types")) {
      m.types = record.at("types").get<std::vector<std::string>>();
    }
  } catch (const json::exception &e) {
    throw ParseError(source, line_no, e.what());
  }
  return m;
}

size_t ParseIndex(const std::string &s, const std::string &source, size_t line_no) {
  size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(source, line_no, fmt::format("bad span index '{}'", s));
  }
  return v;
}

Mention MentionFromTsv(const std::string &line, const std::string &source,
                       size_t line_no) {
  const auto fields = SplitString(line, '\t');
  if (fields.size() != 4 && fields.size() != 5) {
    throw ParseError(source, line_no,
                     "expected entity_id<TAB>t1<TAB>t2<TAB>tokens[<TAB>types]");
  }
  Mention m;
  m.entity_id = fields[0];
  m.span_first = ParseIndex(fields[1], source, line_no);
  m.span_last = ParseIndex(fields[2], source, line_no);
  m.tokens = SplitWhitespace(fields[3]);
  if (fields.size() == 5 && !fields[4].empty()) {
    for (auto &t : SplitString(fields[4], ',')) {
      if (!t.empty()) m.types.push_back(std::move(t));
    }
  }
  return m;
}

}  // namespace

std::vector<Mention> ParseMentions(std::istream &in, const std::string &source) {
  std::vector<Mention> mentions;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    const auto trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    Mention m = trimmed[0] == '{' ? MentionFromJson(line, source, line_no)
                                  : MentionFromTsv(line, source, line_no);
    try {
      ValidateMention(m);
    } catch (const DataError &e) {
      throw ParseError(source, line_no, e.what());
    }
    mentions.push_back(std::move(m));
  }
  return mentions;
}

std::vector<Mention> LoadMentions(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open corpus file {}", path.string()));
  return ParseMentions(in, path.string());
}

namespace {

void WriteMentionRecord(const Mention &m, const std::vector<std::string> &types,
                        std::ostream &out) {
  json record;
  record["tokens"] = m.tokens;
  record["span"] = {m.span_first, m.span_last};
  record["entity_id"] = m.entity_id;
  record["types"] = types;
  out << record.dump() << "\n";
}

}  // namespace

void WriteMentions(std::span<const Mention> mentions, std::ostream &out) {
  for (const auto &m : mentions) WriteMentionRecord(m, m.types, out);
}

void WriteLabeledExamples(const TypeHierarchy &h,
                          std::span<const LabeledExample> examples,
                          std::ostream &out) {
  for (const auto &ex : examples) {
    std::vector<std::string> names;
    names.reserve(ex.gold_types.size());
    for (TypeId t : ex.gold_types) names.push_back(h.name(t));
    WriteMentionRecord(ex.mention, names, out);
  }
}

std::vector<LabeledExample> LoadLabeledExamples(const TypeHierarchy &h,
                                                const std::filesystem::path &path) {
  std::vector<LabeledExample> examples;
  const auto mentions = LoadMentions(path);
  for (size_t i = 0; i < mentions.size(); ++i) {
    auto ex = DistantLabel(h, mentions[i].types, mentions[i]);
    if (!ex) {
      throw DataError(fmt::format("{}: mention {} has no type in the hierarchy",
                                  path.string(), i));
    }
    examples.push_back(std::move(*ex));
  }
  return examples;
}

BatchIterator::BatchIterator(size_t example_count, size_t batch_size, uint64_t seed)
    : example_count_(example_count), batch_size_(batch_size), seed_(seed) {
  if (example_count == 0) throw std::invalid_argument("no examples to batch");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
}

std::vector<std::vector<size_t>> BatchIterator::Epoch(uint64_t epoch) const {
  std::vector<size_t> order(example_count_);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed_ + epoch);
  rng.Shuffle(std::span<size_t>(order));
  std::vector<std::vector<size_t>> batches;
  for (size_t start = 0; start < order.size(); start += batch_size_) {
    const size_t end = std::min(order.size(), start + batch_size_);
    batches.emplace_back(order.begin() + start, order.begin() + end);
  }
  return batches;
}

}  // namespace hiertype
