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

// A small generated typing task whose labels follow from token patterns.
//
// Hierarchy: root "entity", 3 types below it, 6 below those and 10 leaves
// (20 types, depth 4). Every mention belongs to one leaf and is labeled
// with the leaf's ancestor closure. The sentence context holds a cue token
// unique to the leaf, so a model reading the context can recover the whole
// label set. The mention surface names only the leaf's grandparent or,
// half of the time, its parent, so a surface-only model cannot.

#ifndef HIERTYPE_TESTS_SYNTHETIC_TASK_H_
#define HIERTYPE_TESTS_SYNTHETIC_TASK_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hiertype/corpus.h"
#include "hiertype/hierarchy.h"
#include "hiertype/training.h"

namespace hiertype::synthetic {

struct Task {
  std::string hierarchy_text;  // child<TAB>parent<TAB>child_of lines
  TypeHierarchy hierarchy;
  EmbeddingTable embeddings{16};
  std::vector<Mention> train;  // types hold the leaf name
  std::vector<Mention> dev;
};

inline constexpr size_t kDim = 16;
inline constexpr size_t kMentions = 500;
inline constexpr size_t kTrain = 400;

Task MakeTask(uint64_t seed);

std::vector<LabeledExample> Label(const Task &task, const std::vector<Mention> &mentions);

// Writes hierarchy.tsv, embeddings.txt, train.jsonl and dev.jsonl.
void WriteFiles(const Task &task, const std::filesystem::path &dir);

// Training settings used for the synthetic runs.
TrainConfig Config(EncoderMode mode);

// Same settings as config lines.
std::string ConfigText(EncoderMode mode);

}  // namespace hiertype::synthetic

#endif  // HIERTYPE_TESTS_SYNTHETIC_TASK_H_
