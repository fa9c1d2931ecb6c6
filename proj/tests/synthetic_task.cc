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

#include "synthetic_task.h"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "hiertype/rng.h"

namespace hiertype::synthetic {

namespace {

constexpr size_t kKinds = 3;
constexpr size_t kClasses = 6;
constexpr size_t kLeaves = 10;
// Leaf -> class; classes 0-3 have two leaves, 4 and 5 have one.
constexpr size_t kLeafClass[kLeaves] = {0, 0, 1, 1, 2, 2, 3, 3, 4, 5};
constexpr size_t kPoolSize = 3;
constexpr size_t kFillers = 40;

std::string KindName(size_t k) { return fmt::format("kind_{}", k); }
std::string ClassName(size_t c) { return fmt::format("class_{}", c); }
std::string LeafName(size_t l) { return fmt::format("leaf_{}", l); }

std::string KindWord(size_t k, size_t i) { return fmt::format("kw{}_{}", k, i); }
std::string ClassWord(size_t c, size_t i) { return fmt::format("cw{}_{}", c, i); }
std::string CueWord(size_t l) { return fmt::format("cue{}", l); }
std::string Filler(size_t i) { return fmt::format("f{}", i); }

std::vector<std::string> Vocabulary() {
  std::vector<std::string> words;
  for (size_t k = 0; k < kKinds; ++k) {
    for (size_t i = 0; i < kPoolSize; ++i) words.push_back(KindWord(k, i));
  }
  for (size_t c = 0; c < kClasses; ++c) {
    for (size_t i = 0; i < kPoolSize; ++i) words.push_back(ClassWord(c, i));
  }
  for (size_t l = 0; l < kLeaves; ++l) words.push_back(CueWord(l));
  for (size_t i = 0; i < kFillers; ++i) words.push_back(Filler(i));
  return words;
}

Mention MakeMention(size_t index, Rng &rng) {
  const size_t leaf = rng.Below(kLeaves);
  const size_t cls = kLeafClass[leaf];
  const size_t kind = cls / 2;
  const bool names_class = rng.Bernoulli(0.5);
  const size_t surface_len = 1 + rng.Below(2);
  std::vector<std::string> surface;
  for (size_t i = 0; i < surface_len; ++i) {
    surface.push_back(names_class ? ClassWord(cls, rng.Below(kPoolSize))
                                  : KindWord(kind, rng.Below(kPoolSize)));
  }
  std::vector<std::string> left, right;
  const size_t left_len = 1 + rng.Below(3), right_len = 1 + rng.Below(3);
  for (size_t i = 0; i < left_len; ++i) left.push_back(Filler(rng.Below(kFillers)));
  for (size_t i = 0; i < right_len; ++i) right.push_back(Filler(rng.Below(kFillers)));
  auto &side = rng.Bernoulli(0.5) ? left : right;
  side.insert(side.begin() + static_cast<std::ptrdiff_t>(rng.Below(side.size() + 1)),
              CueWord(leaf));

  Mention m;
  m.tokens = left;
  m.span_first = m.tokens.size();
  m.tokens.insert(m.tokens.end(), surface.begin(), surface.end());
  m.span_last = m.tokens.size() - 1;
  m.tokens.insert(m.tokens.end(), right.begin(), right.end());
  m.entity_id = fmt::format("m{}", index);
  m.types = {LeafName(leaf)};
  return m;
}

}  // namespace

Task MakeTask(uint64_t seed) {
  Task task;
  std::ostringstream links;
  for (size_t k = 0; k < kKinds; ++k) links << KindName(k) << "\tentity\tchild_of\n";
  for (size_t c = 0; c < kClasses; ++c) {
    links << ClassName(c) << '\t' << KindName(c / 2) << "\tchild_of\n";
  }
  for (size_t l = 0; l < kLeaves; ++l) {
    links << LeafName(l) << '\t' << ClassName(kLeafClass[l]) << "\tchild_of\n";
  }
  task.hierarchy_text = links.str();
  std::istringstream in(task.hierarchy_text);
  task.hierarchy = ParseHierarchy(in, "synthetic");

  Rng rng(seed);
  Vec v(kDim);
  for (const auto &word : Vocabulary()) {
    for (double &x : v) x = rng.Normal();
    task.embeddings.Add(word, v);
  }
  for (size_t i = 0; i < kMentions; ++i) {
    Mention m = MakeMention(i, rng);
    (i < kTrain ? task.train : task.dev).push_back(std::move(m));
  }
  return task;
}

std::vector<LabeledExample> Label(const Task &task, const std::vector<Mention> &mentions) {
  std::vector<LabeledExample> out;
  for (const auto &m : mentions) {
    auto ex = DistantLabel(task.hierarchy, m.types, m);
    if (!ex) throw std::logic_error("synthetic mention without a known type");
    out.push_back(std::move(*ex));
  }
  return out;
}

void WriteFiles(const Task &task, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "hierarchy.tsv") << task.hierarchy_text;
  {
    std::ofstream out(dir / "embeddings.txt");
    for (const auto &word : Vocabulary()) {
      out << word;
      for (double x : task.embeddings.Lookup(word)) out << ' ' << fmt::format("{}", x);
      out << "\n";
    }
  }
  std::ofstream train(dir / "train.jsonl");
  WriteMentions(task.train, train);
  std::ofstream dev(dir / "dev.jsonl");
  WriteMentions(task.dev, dev);
}

TrainConfig Config(EncoderMode mode) {
  TrainConfig c;
  c.dim = kDim;
  c.filter_width = 3;
  c.encoder_mode = mode;
  c.mention_score_kind = ScoreFunction::kBilinear;
  c.structure_score_kind = ScoreFunction::kBilinear;
  c.structure_weight = 0.5;
  c.batch_size_typing = 32;
  c.batch_size_structure = 16;
  c.learning_rate = 0.005;
  c.dropout_p = 0.1;
  c.max_epochs = 500;
  c.patience = 30;
  c.seed = 13;
  return c;
}

std::string ConfigText(EncoderMode mode) {
  std::ostringstream out;
  WriteTrainConfig(Config(mode), out);
  return out.str();
}

}  // namespace hiertype::synthetic
