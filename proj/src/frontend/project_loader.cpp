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
// project_loader.cpp -- collects classes reachable from the main class.

#include <algorithm>
#include <deque>
#include <fstream>
#include <iterator>
#include <memory>

#include "bc2ta/error.hpp"
#include "bc2ta/frontend.hpp"
#include "zip_reader.hpp"

namespace fs = std::filesystem;

namespace bc2ta::frontend {
namespace {

std::vector<uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text(const fs::path& path) {
  auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

bool is_platform_class(std::string_view name) {
  for (std::string_view prefix : {"java/", "javax/", "jdk/", "sun/", "com/sun/"}) {
    if (name.starts_with(prefix)) return true;
  }
  return false;
}

// One classpath entry. Text-IR files are parsed eagerly; class files are
// parsed on demand.
class ClassSource {
 public:
  explicit ClassSource(fs::path root) : root_(std::move(root)) {
    if (fs::is_directory(root_)) {
      std::vector<fs::path> ir_files;
      for (const auto& entry : fs::directory_iterator(root_)) {
        if (entry.is_regular_file() && entry.path().extension() == ".jbct") {
          ir_files.push_back(entry.path());
        }
      }
      std::sort(ir_files.begin(), ir_files.end());
      for (const auto& f : ir_files) add_ir(read_text(f));
    } else if (root_.extension() == ".jbct") {
      add_ir(read_text(root_));
    } else if (root_.extension() == ".class") {
      RawClass cls = parse_class_file(read_file(root_));
      std::string name = cls.name;
      parsed_.emplace(std::move(name), std::move(cls));
    } else if (root_.extension() == ".jar" || root_.extension() == ".zip") {
      archive_ = std::make_unique<ZipArchive>(root_);
    } else if (!fs::exists(root_)) {
      throw Error(ErrorCode::kIo, "classpath entry does not exist: " + root_.string());
    } else {
      throw Error(ErrorCode::kInvalidArgument, "unsupported classpath entry: " + root_.string());
    }
  }

  std::optional<RawClass> find(const std::string& name) const {
    if (auto it = parsed_.find(name); it != parsed_.end()) return it->second;
    if (archive_ && archive_->contains(name + ".class")) {
      return parse_class_file(archive_->read(name + ".class"));
    }
    if (fs::is_directory(root_)) {
      fs::path p = root_ / (name + ".class");
      if (fs::is_regular_file(p)) return parse_class_file(read_file(p));
    }
    return std::nullopt;
  }

 private:
  void add_ir(const std::string& text) {
    for (RawClass& cls : parse_text_ir(text)) {
      std::string name = cls.name;
      parsed_.emplace(std::move(name), std::move(cls));
    }
  }

  fs::path root_;
  std::map<std::string, RawClass> parsed_;
  std::unique_ptr<ZipArchive> archive_;
};

}  // namespace

LoadedClasses load_project(const std::vector<fs::path>& roots, const std::string& main_class,
                           const std::vector<std::string>& include_filter) {
  std::vector<ClassSource> sources;
  sources.reserve(roots.size());
  for (const auto& root : roots) sources.emplace_back(root);

  std::vector<std::string> prefixes;
  for (std::string p : include_filter) {
    std::replace(p.begin(), p.end(), '.', '/');
    prefixes.push_back(std::move(p));
  }
  auto included = [&](const std::string& name) {
    if (name == main_class || prefixes.empty()) return true;
    return std::any_of(prefixes.begin(), prefixes.end(),
                       [&](const std::string& p) { return name.starts_with(p); });
  };
  auto lookup = [&](const std::string& name) -> std::optional<RawClass> {
    for (const auto& src : sources) {
      if (auto cls = src.find(name)) return cls;
    }
    return std::nullopt;
  };

  LoadedClasses out;
  std::map<std::string, RawClass> found;
  std::set<std::string> seen{main_class};
  std::deque<std::string> queue{main_class};
  while (!queue.empty()) {
    std::string name = queue.front();
    queue.pop_front();
    if (name.starts_with("[") || !included(name)) {
      out.external_stubs.insert(name);
      continue;
    }
    std::optional<RawClass> cls = lookup(name);
    if (!cls) {
      if (name == main_class) {
        throw Error(ErrorCode::kMainClassNotFound, "main class '" + main_class + "' not found");
      }
      if (is_platform_class(name)) {
        out.external_stubs.insert(name);
        continue;
      }
      throw Error(ErrorCode::kClassResolutionError,
                  "class '" + name + "' is referenced and included but not on the classpath");
    }
    if (cls->name != name) {
      throw Error(ErrorCode::kClassResolutionError,
                  "entry for '" + name + "' declares class '" + cls->name + "'");
    }
    auto enqueue = [&](const std::string& ref) {
      if (seen.insert(ref).second) queue.push_back(ref);
    };
    if (cls->super_name) enqueue(*cls->super_name);
    for (const auto& i : cls->interfaces) enqueue(i);
    for (const auto& m : cls->methods) {
      for (const auto& ins : m.instructions) {
        if (ins.invoke_ref) enqueue(ins.invoke_ref->owner);
      }
    }
    found.emplace(name, std::move(*cls));
  }
  for (auto& [name, cls] : found) out.classes.push_back(std::move(cls));
  return out;
}

}  // namespace bc2ta::frontend
