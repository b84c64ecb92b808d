// Copyright 2026 The oodkit Authors
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

#include "oodkit/log.hpp"

#include <iostream>
#include <mutex>

namespace oodkit::log {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

void default_sink(Level level, std::string_view message) {
  if (level == Level::debug) return;
  std::cerr << '[' << level_name(level) << "] " << message << '\n';
}

Sink& current_sink() {
  static Sink sink = default_sink;
  return sink;
}

}  // namespace

std::string_view level_name(Level level) {
  switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warn";
    case Level::error: return "error";
  }
  return "?";
}

Sink set_sink(Sink sink) {
  std::lock_guard lock(sink_mutex());
  Sink previous = std::move(current_sink());
  current_sink() = sink ? std::move(sink) : Sink(default_sink);
  return previous;
}

void write(Level level, std::string_view message) {
  std::lock_guard lock(sink_mutex());
  current_sink()(level, message);
}

}  // namespace oodkit::log
