// Copyright 2026 The bc2ta Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// zip_reader.cpp -- reads stored and deflated entries from jar archives.

#include "zip_reader.hpp"

#include <zlib.h>

#include <fstream>
#include <iterator>

#include "bc2ta/error.hpp"

namespace bc2ta::frontend {
namespace {

constexpr uint32_t kEndOfCentralDir = 0x06054b50;
constexpr uint32_t kCentralEntry = 0x02014b50;
constexpr uint32_t kLocalHeader = 0x04034b50;

uint16_t le16(const std::vector<uint8_t>& d, size_t at) {
  return static_cast<uint16_t>(d[at] | d[at + 1] << 8);
}
uint32_t le32(const std::vector<uint8_t>& d, size_t at) {
  return static_cast<uint32_t>(d[at]) | static_cast<uint32_t>(d[at + 1]) << 8 |
         static_cast<uint32_t>(d[at + 2]) << 16 | static_cast<uint32_t>(d[at + 3]) << 24;
}

}  // namespace

ZipArchive::ZipArchive(const std::filesystem::path& path) : path_(path.string()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open archive " + path_);
  data_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  auto bad = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedClassFile, "archive " + path_ + ": " + what);
  };
  if (data_.size() < 22) bad("too small");
  size_t eocd = std::string::npos;
  size_t lowest = data_.size() > 22 + 65535 ? data_.size() - 22 - 65535 : 0;
  for (size_t at = data_.size() - 22 + 1; at-- > lowest;) {
    if (le32(data_, at) == kEndOfCentralDir) {
      eocd = at;
      break;
    }
  }
  if (eocd == std::string::npos) bad("no end-of-central-directory record");
  uint16_t count = le16(data_, eocd + 10);
  uint32_t cd_offset = le32(data_, eocd + 16);
  size_t at = cd_offset;
  for (uint16_t i = 0; i < count; ++i) {
    if (at + 46 > data_.size() || le32(data_, at) != kCentralEntry) bad("corrupt central directory");
    Entry e;
    e.method = le16(data_, at + 10);
    e.compressed_size = le32(data_, at + 20);
    e.size = le32(data_, at + 24);
    uint16_t name_len = le16(data_, at + 28);
    uint16_t extra_len = le16(data_, at + 30);
    uint16_t comment_len = le16(data_, at + 32);
    e.local_offset = le32(data_, at + 42);
    if (at + 46 + name_len > data_.size()) bad("corrupt central directory");
    std::string name(data_.begin() + static_cast<long>(at + 46),
                     data_.begin() + static_cast<long>(at + 46 + name_len));
    entries_.emplace(std::move(name), e);
    at += 46 + name_len + extra_len + comment_len;
  }
}

std::vector<std::string> ZipArchive::names() const {
  std::vector<std::string> out;
  for (const auto& [name, e] : entries_) out.push_back(name);
  return out;
}

std::vector<uint8_t> ZipArchive::read(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw Error(ErrorCode::kIo, "no entry " + name + " in " + path_);
  const Entry& e = it->second;
  auto bad = [&](const std::string& what) {
    throw Error(ErrorCode::kMalformedClassFile, "archive " + path_ + ", entry " + name + ": " + what);
  };
  size_t at = e.local_offset;
  if (at + 30 > data_.size() || le32(data_, at) != kLocalHeader) bad("bad local header");
  size_t start = at + 30 + le16(data_, at + 26) + le16(data_, at + 28);
  if (start + e.compressed_size > data_.size()) bad("truncated entry");
  const uint8_t* src = data_.data() + start;
  if (e.method == 0) return {src, src + e.compressed_size};
  if (e.method != 8) bad("unsupported compression method " + std::to_string(e.method));

  std::vector<uint8_t> out(e.size);
  z_stream zs{};
  if (inflateInit2(&zs, -MAX_WBITS) != Z_OK) bad("inflate init failed");
  zs.next_in = const_cast<Bytef*>(src);
  zs.avail_in = e.compressed_size;
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != e.size) bad("inflate failed");
  return out;
}

}  // namespace bc2ta::frontend
