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

#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace oodkit::log {

enum class Level { debug, info, warn, error };

using Sink = std::function<void(Level, std::string_view)>;

// Replaces the process-wide sink and returns the previous one. The default
// sink writes "[level] message" lines to stderr and drops debug output.
Sink set_sink(Sink sink);

void write(Level level, std::string_view message);

inline void debug(std::string_view m) { write(Level::debug, m); }
inline void info(std::string_view m) { write(Level::info, m); }
inline void warn(std::string_view m) { write(Level::warn, m); }
inline void error(std::string_view m) { write(Level::error, m); }

std::string_view level_name(Level level);

// Installs a sink for the lifetime of the object and restores the old one.
class ScopedSink {
 public:
  explicit ScopedSink(Sink sink) : previous_(set_sink(std::move(sink))) {}
  ~ScopedSink() { set_sink(std::move(previous_)); }
  ScopedSink(const ScopedSink&) = delete;
  ScopedSink& operator=(const ScopedSink&) = delete;

 private:
  Sink previous_;
};

}  // namespace oodkit::log
