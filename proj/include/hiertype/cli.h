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

#ifndef HIERTYPE_CLI_H_
#define HIERTYPE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace hiertype {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

// Runs one subcommand. args[0] is the program name. Results go to out,
// diagnostics to err.
//
//   build-hierarchy --links F [--links F ...] --out H
//   stats           --hierarchy H [--format line|record]
//   derive-links    --entities F [--threshold 0.7] [--allow F] --out L
//   label           --hierarchy H --corpus C [--entities F] --out D
//   train           --config CFG --hierarchy H --train D --dev D2 --out CKPT
//                   [--history F] [--embeddings F] [--seed N] [--set k=v ...]
//   eval            --checkpoint CKPT --corpus D --hierarchy H
//                   [--embeddings F] [--per-mention F]
//   score           --checkpoint CKPT --text "..." --span a b [--top k]
//                   [--embeddings F]
int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace hiertype

#endif  // HIERTYPE_CLI_H_
