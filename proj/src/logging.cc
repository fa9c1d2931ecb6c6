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

#include "hiertype/logging.h"

#include <cstdlib>
#include <memory>
#include <string_view>

#include <spdlog/sinks/stdout_sinks.h>

namespace hiertype {
namespace {

spdlog::level::level_enum LevelFromEnv() {
  const char *env = std::getenv("HIERTYPE_LOG");
  const std::string_view level = env ? env : "info";
  if (level == "error") return spdlog::level::err;
  if (level == "debug") return spdlog::level::debug;
  return spdlog::level::info;
}

std::shared_ptr<spdlog::logger> MakeLogger() {
  auto sink = std::make_shared<spdlog::sinks::stderr_sink_st>();
  auto logger = std::make_shared<spdlog::logger>("hiertype", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(LevelFromEnv());
  return logger;
}

}  // namespace

spdlog::logger &Log() {
  static std::shared_ptr<spdlog::logger> logger = MakeLogger();
  return *logger;
}

void ConfigureLogging() { Log().set_level(LevelFromEnv()); }

}  // namespace hiertype
