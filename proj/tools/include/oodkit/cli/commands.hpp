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

#include <iosfwd>
#include <string>
#include <vector>

namespace oodkit::cli {

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = {
      "split", "lm-score", "noise-corpus", "corr-length", "train-rep", "fit-density",
      "score", "eval",     "sweep",        "project",     "serve",     "pipeline"};
  return names;
}

// Runs one subcommand. args excludes the program name. Returns the process
// exit code: 0 success (and --help), 1 usage, 2 data, 3 numeric failure.
// Every successful run writes <out_dir>/<subcommand>.manifest.json.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace oodkit::cli
