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

#include "oodkit/embeddings.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

#include "oodkit/error.hpp"

namespace oodkit {

static_assert(std::numeric_limits<float>::is_iec559, "IEEE-754 float required");

EmbeddingSet::EmbeddingSet(std::vector<std::string> ids, Matrix values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (static_cast<Eigen::Index>(ids_.size()) != values_.rows()) {
    throw DataError("embedding set: " + std::to_string(ids_.size()) + " ids for " +
                    std::to_string(values_.rows()) + " rows");
  }
  if (!ids_.empty() && values_.cols() == 0) throw DataError("embedding set: zero dimension");
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw DataError("embedding set: duplicate id \"" + ids_[i] + "\"");
    }
    if (!values_.row(static_cast<Eigen::Index>(i)).allFinite()) {
      throw DataError("embedding set: non-finite value in row \"" + ids_[i] + "\"");
    }
  }
}

std::optional<std::size_t> EmbeddingSet::index_of(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Matrix EmbeddingSet::gather(const std::vector<std::string>& ids) const {
  Matrix out(static_cast<Eigen::Index>(ids.size()), values_.cols());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto idx = index_of(ids[i]);
    if (!idx) throw DataError("no embedding for id \"" + ids[i] + "\"");
    out.row(static_cast<Eigen::Index>(i)) = values_.row(static_cast<Eigen::Index>(*idx));
  }
  return out;
}

EmbeddingSet EmbeddingSet::subset(const std::vector<std::string>& ids) const {
  return EmbeddingSet(ids, gather(ids));
}

namespace {

template <class UInt>
UInt decode_le(const unsigned char* p) {
  UInt v = 0;
  for (std::size_t i = 0; i < sizeof(UInt); ++i) v |= static_cast<UInt>(p[i]) << (8 * i);
  return v;
}

template <class UInt>
void encode_le(std::ostream& out, UInt v) {
  std::array<char, sizeof(UInt)> buf{};
  for (std::size_t i = 0; i < sizeof(UInt); ++i) {
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  }
  out.write(buf.data(), buf.size());
}

class Reader {
 public:
  Reader(std::istream& in, std::string_view source) : in_(in), source_(source) {}

  void read(void* dst, std::size_t n, const char* what) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw DataError(source_ + ": truncated embedding file while reading " + what);
    }
  }
  template <class UInt>
  UInt read_uint(const char* what) {
    std::array<unsigned char, sizeof(UInt)> buf{};
    read(buf.data(), buf.size(), what);
    return decode_le<UInt>(buf.data());
  }

  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
};

}  // namespace

EmbeddingSet read_embeddings(std::istream& in, std::string_view source) {
  Reader reader(in, source);
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 8 || std::memcmp(magic.data(), kEmbeddingMagic, 8) != 0) {
    throw DataError(reader.source() + ": bad magic (expected OODEMB01)");
  }
  const auto n = reader.read_uint<std::uint32_t>("header");
  const auto d = reader.read_uint<std::uint32_t>("header");
  if (n > 0 && d == 0) throw DataError(reader.source() + ": zero embedding dimension");

  std::vector<std::string> ids;
  ids.reserve(n);
  Matrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<unsigned char> row_bytes(static_cast<std::size_t>(d) * 4);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto id_len = reader.read_uint<std::uint16_t>("row id length");
    std::string id(id_len, '\0');
    reader.read(id.data(), id_len, "row id");
    reader.read(row_bytes.data(), row_bytes.size(), "row values");
    for (std::uint32_t j = 0; j < d; ++j) {
      const float f = std::bit_cast<float>(decode_le<std::uint32_t>(&row_bytes[4 * j]));
      if (!std::isfinite(f)) {
        throw DataError(reader.source() + ": non-finite value in row \"" + id + "\"");
      }
      values(i, j) = static_cast<double>(f);
    }
    ids.push_back(std::move(id));
  }
  try {
    return EmbeddingSet(std::move(ids), std::move(values));
  } catch (const DataError& e) {
    throw DataError(reader.source() + ": " + e.what());
  }
}

EmbeddingSet load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open embeddings " + path.string());
  return read_embeddings(in, path.string());
}

void write_embeddings(std::ostream& out, const EmbeddingSet& set) {
  out.write(kEmbeddingMagic, 8);
  encode_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.size()));
  encode_le<std::uint32_t>(out, static_cast<std::uint32_t>(set.dim()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& id = set.ids()[i];
    if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DataError("embedding id longer than 65535 bytes");
    }
    encode_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    for (std::size_t j = 0; j < set.dim(); ++j) {
      const auto f = static_cast<float>(set.values()(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j)));
      if (!std::isfinite(f)) throw DataError("row \"" + id + "\" overflows float32");
      encode_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
    }
  }
}

void save_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write embeddings " + path.string());
  write_embeddings(out, set);
}

}  // namespace oodkit
