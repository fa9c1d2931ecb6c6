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

#ifndef HIERTYPE_CORPUS_H_
#define HIERTYPE_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hiertype/hierarchy.h"
#include "hiertype/tensor.h"

namespace hiertype {

// Case-sensitive token -> vector table. Unknown tokens map to the zero
// vector.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(size_t dim);

  size_t dim() const { return dim_; }
  size_t size() const { return index_.size(); }

  // Later additions of an existing token overwrite it. Throws ShapeError.
  void Add(std::string_view token, std::span<const double> vector);

  bool Contains(std::string_view token) const;
  std::span<const double> Lookup(std::string_view token) const;

 private:
  size_t dim_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<double> values_;
  std::vector<double> oov_;
};

// Text file, one `token v1 ... vd` line per token. Throws ParseError on a
// dimension mismatch (naming the line) and DataError on an empty file.
EmbeddingTable ParseEmbeddings(std::istream &in, const std::string &source, size_t dim);
EmbeddingTable LoadEmbeddings(const std::filesystem::path &path, size_t dim);

// Word vectors of tokens as an n x d tensor.
Tensor WordMatrix(const EmbeddingTable &emb, std::span<const std::string> tokens);

struct Mention {
  std::vector<std::string> tokens;
  // Inclusive token range of the entity surface form.
  size_t span_first = 0;
  size_t span_last = 0;
  std::string entity_id;
  // Raw (e.g. Freebase) type names of the linked entity, if known.
  std::vector<std::string> types;
};

// Throws DataError when tokens is empty or the span is out of range.
void ValidateMention(const Mention &m);

struct LabeledExample {
  Mention mention;
  // Closed under ancestors, ascending, never empty.
  std::vector<TypeId> gold_types;
};

// Keeps the entity types present in h and closes them under ancestors.
// Returns nullopt when none of entity_types is in h; such mentions are
// skipped.
std::optional<LabeledExample> DistantLabel(const TypeHierarchy &h,
                                           std::span<const std::string> entity_types,
                                           const Mention &m);

// Mention corpus, one record per line. Either a JSON object
//   {"tokens": [...], "span": [t1, t2], "entity_id": "...", "types": [...]}
// ("types" optional) or the tab-separated form
//   entity_id<TAB>t1<TAB>t2<TAB>space-joined tokens<TAB>comma-joined types
// (last field optional). Blank lines and '#' lines are skipped.
std::vector<Mention> ParseMentions(std::istream &in, const std::string &source);
std::vector<Mention> LoadMentions(const std::filesystem::path &path);

// One JSON record per line.
void WriteMentions(std::span<const Mention> mentions, std::ostream &out);

// Writes labeled examples as mention records whose "types" field holds the
// gold type names.
void WriteLabeledExamples(const TypeHierarchy &h,
                          std::span<const LabeledExample> examples,
                          std::ostream &out);

// Reads a labeled corpus: every mention is re-labeled with DistantLabel.
// Throws DataError if any mention has no type in h.
std::vector<LabeledExample> LoadLabeledExamples(const TypeHierarchy &h,
                                                const std::filesystem::path &path);

// Deterministic minibatches over example indices. Epoch e is a shuffle
// under seed + e, cut into batches of batch_size with a final partial
// batch.
class BatchIterator {
 public:
  // Throws std::invalid_argument for zero examples or batch size.
  BatchIterator(size_t example_count, size_t batch_size, uint64_t seed);

  std::vector<std::vector<size_t>> Epoch(uint64_t epoch) const;

  size_t batches_per_epoch() const {
    return (example_count_ + batch_size_ - 1) / batch_size_;
  }

 private:
  size_t example_count_;
  size_t batch_size_;
  uint64_t seed_;
};

}  // namespace hiertype

#endif  // HIERTYPE_CORPUS_H_
