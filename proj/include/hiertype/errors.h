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

#ifndef HIERTYPE_ERRORS_H_
#define HIERTYPE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace hiertype {

// Base class for every error caused by input data (as opposed to misuse of
// the command line). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed line in a text input file.
class ParseError : public DataError {
 public:
  ParseError(std::string source, size_t line, const std::string &what);

  const std::string &source() const { return source_; }
  size_t line() const { return line_; }

 private:
  std::string source_;
  size_t line_;
};

// The parent links of a hierarchy contain a cycle. cycle() lists the type
// names along one offending cycle, first name repeated at the end.
class CycleError : public DataError {
 public:
  explicit CycleError(std::vector<std::string> cycle);

  const std::vector<std::string> &cycle() const { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class UnknownTypeError : public DataError {
 public:
  explicit UnknownTypeError(const std::string &name)
      : DataError("unknown type: " + name) {}
};

// Tensor or vector sizes disagree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hiertype

#endif  // HIERTYPE_ERRORS_H_
