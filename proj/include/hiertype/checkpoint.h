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

// Binary model checkpoint. All integers are little-endian u64 unless noted,
// reals are little-endian IEEE-754 binary64, strings are a u64 byte length
// followed by the bytes.
//
//   magic            8 bytes "HTYPCKPT"
//   version          u32 (currently 1)
//   dim              u64
//   filter_width     u64
//   num_types        u64
//   encoder_mode     u8  (0 mention, 1 cnn)
//   mention_score    u8  (0 order, 1 bilinear, 2 dot), f64 margin
//   has_structure    u8, then structure_score u8 and f64 margin
//   share_bilinear   u8
//   embeddings       string, path of the word vector file
//   type names       num_types strings, in type index order
//   tensor_count     u64
//   per tensor       name string, rank u64, rank dims u64, values f64
//
// Tensors appear in the order conv_weight, conv_bias, hidden_weight,
// hidden_bias, output_weight, output_bias, type_embeddings, then
// mention_bilinear and structure_bilinear when present.

#ifndef HIERTYPE_CHECKPOINT_H_
#define HIERTYPE_CHECKPOINT_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hiertype/model.h"

namespace hiertype {

inline constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelSpec spec;
  std::vector<std::string> type_names;
  std::string embeddings;
  ModelParams params;
};

void WriteCheckpoint(const Checkpoint &ckpt, std::ostream &out);
void SaveCheckpoint(const Checkpoint &ckpt, const std::filesystem::path &path);

// Throws DataError on a malformed or truncated file.
Checkpoint ReadCheckpoint(std::istream &in, const std::string &source);
Checkpoint LoadCheckpoint(const std::filesystem::path &path);

}  // namespace hiertype

#endif  // HIERTYPE_CHECKPOINT_H_
