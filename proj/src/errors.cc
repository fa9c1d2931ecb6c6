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

#include "hiertype/errors.h"

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace hiertype {

ParseError::ParseError(std::string source, size_t line, const std::string &what)
    : DataError(fmt::format("{}:{}: {}", source, line, what)),
      source_(std::move(source)),
      line_(line) {}

CycleError::CycleError(std::vector<std::string> cycle)
    : DataError(fmt::format("cycle in type hierarchy: {}",
                            fmt::join(cycle, " -> "))),
      cycle_(std::move(cycle)) {}

}  // namespace hiertype
