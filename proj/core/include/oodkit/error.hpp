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

#include <stdexcept>
#include <string>

namespace oodkit {

// Exception hierarchy. The command-line front end maps each family onto a
// process exit code (usage 1, data 2, numeric 3).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments, unknown options, malformed configuration.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input files and datasets.
class DataError : public Error {
 public:
  using Error::Error;
};

// Divergence, non-finite values, degenerate numerical inputs.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Transport and remote-service failures.
class ServiceError : public Error {
 public:
  using Error::Error;
};

int exit_code_for(const std::exception& e) noexcept;

}  // namespace oodkit
