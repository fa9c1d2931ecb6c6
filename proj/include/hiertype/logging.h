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

#ifndef HIERTYPE_LOGGING_H_
#define HIERTYPE_LOGGING_H_

#include <spdlog/logger.h>

namespace hiertype {

// Process-wide logger writing to stderr. The level comes from the
// HIERTYPE_LOG environment variable (error, info or debug; default info).
spdlog::logger &Log();

// Re-reads HIERTYPE_LOG.
void ConfigureLogging();

}  // namespace hiertype

#endif  // HIERTYPE_LOGGING_H_
