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
// zip_reader.hpp -- minimal jar (zip) archive reader.

#ifndef BC2TA_SRC_FRONTEND_ZIP_READER_HPP_
#define BC2TA_SRC_FRONTEND_ZIP_READER_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace bc2ta::frontend {

// Minimal reader for jar/zip archives: stored and deflated entries, no zip64.
class ZipArchive {
 public:
  explicit ZipArchive(const std::filesystem::path& path);

  bool contains(const std::string& name) const { return entries_.contains(name); }
  std::vector<uint8_t> read(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  struct Entry {
    uint16_t method = 0;
    uint32_t compressed_size = 0;
    uint32_t size = 0;
    uint32_t local_offset = 0;
  };

  std::vector<uint8_t> data_;
  std::map<std::string, Entry> entries_;
  std::string path_;
};

}  // namespace bc2ta::frontend

#endif  // BC2TA_SRC_FRONTEND_ZIP_READER_HPP_
