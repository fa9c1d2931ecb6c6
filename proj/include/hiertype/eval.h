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

#ifndef HIERTYPE_EVAL_H_
#define HIERTYPE_EVAL_H_

#include <iosfwd>
#include <span>
#include <vector>

#include "hiertype/hierarchy.h"

namespace hiertype {

// Information-retrieval average precision of one ranking:
//
//   AP = (1/|gold|) * sum over 1-based ranks k holding a gold type of
//        (number of gold types in the top k) / k
//
// ranking must list every type once and contain all of gold. Throws
// std::invalid_argument for an empty gold set or a gold type missing from
// the ranking.
double AveragePrecision(std::span<const TypeId> ranking, std::span<const TypeId> gold);

struct EvalReport {
  std::vector<double> per_mention_ap;
  double map = 0.0;
  size_t mention_count = 0;
};

// Throws std::invalid_argument for an empty list.
EvalReport MeanAveragePrecision(std::vector<double> per_mention_ap);

// `map=<value>`
void WriteMapSummary(const EvalReport &report, std::ostream &out);
// `mention_index<TAB>ap` per mention.
void WritePerMentionAp(const EvalReport &report, std::ostream &out);

}  // namespace hiertype

#endif  // HIERTYPE_EVAL_H_
