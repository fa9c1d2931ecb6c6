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

#include "hiertype/eval.h"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>

#include "text_util.h"

namespace hiertype {

double AveragePrecision(std::span<const TypeId> ranking, std::span<const TypeId> gold) {
  if (gold.empty()) throw std::invalid_argument("average precision needs a gold type");
  size_t max_index = 0;
  for (TypeId t : ranking) max_index = std::max(max_index, t.index());
  std::vector<bool> is_gold(ranking.empty() ? 0 : max_index + 1, false);
  size_t gold_count = 0;
  for (TypeId t : gold) {
    if (t.index() >= is_gold.size()) {
      throw std::invalid_argument(fmt::format("gold type #{} is not ranked", t.value));
    }
    if (!is_gold[t.index()]) {
      is_gold[t.index()] = true;
      ++gold_count;
    }
  }

  size_t hits = 0;
  double sum = 0.0;
  for (size_t k = 0; k < ranking.size() && hits < gold_count; ++k) {
    if (is_gold[ranking[k].index()]) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(k + 1);
    }
  }
  if (hits != gold_count) throw std::invalid_argument("gold type missing from ranking");
  return sum / static_cast<double>(gold_count);
}

EvalReport MeanAveragePrecision(std::vector<double> per_mention_ap) {
  if (per_mention_ap.empty()) throw std::invalid_argument("no mentions to evaluate");
  EvalReport report;
  double total = 0.0;
  for (double ap : per_mention_ap) total += ap;
  report.mention_count = per_mention_ap.size();
  report.map = total / static_cast<double>(per_mention_ap.size());
  report.per_mention_ap = std::move(per_mention_ap);
  return report;
}

void WriteMapSummary(const EvalReport &report, std::ostream &out) {
  out << "map=" << FormatReal(report.map) << "\n";
}

void WritePerMentionAp(const EvalReport &report, std::ostream &out) {
  for (size_t i = 0; i < report.per_mention_ap.size(); ++i) {
    out << i << '\t' << FormatReal(report.per_mention_ap[i]) << "\n";
  }
}

}  // namespace hiertype
