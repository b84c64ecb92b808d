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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oodkit/linalg.hpp"

namespace oodkit {

// Per-item vectors keyed by record id. Values are held as doubles; the file
// format stores float32, so loading is exact and saving rounds to float.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  // Throws DataError on duplicate ids, row/id count mismatch, zero dim or a
  // non-finite component (naming the row id).
  EmbeddingSet(std::vector<std::string> ids, Matrix values);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(values_.cols()); }
  bool empty() const { return ids_.empty(); }

  const std::vector<std::string>& ids() const { return ids_; }
  const Matrix& values() const { return values_; }
  auto row(std::size_t i) const { return values_.row(static_cast<Eigen::Index>(i)); }

  std::optional<std::size_t> index_of(std::string_view id) const;

  // Rows for the given ids, in that order. Throws DataError on a missing id.
  Matrix gather(const std::vector<std::string>& ids) const;
  EmbeddingSet subset(const std::vector<std::string>& ids) const;

  bool operator==(const EmbeddingSet& other) const {
    return ids_ == other.ids_ && same_values(values_, other.values_);
  }

 private:
  std::vector<std::string> ids_;
  Matrix values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Binary layout, all integers and floats little-endian:
//   "OODEMB01" | u32 n | u32 d | n x ( u16 id_len | id bytes | d x f32 )
inline constexpr char kEmbeddingMagic[8] = {'O', 'O', 'D', 'E', 'M', 'B', '0', '1'};

EmbeddingSet read_embeddings(std::istream& in, std::string_view source = "<stream>");
EmbeddingSet load_embeddings(const std::filesystem::path& path);

void write_embeddings(std::ostream& out, const EmbeddingSet& set);
void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);

}  // namespace oodkit
