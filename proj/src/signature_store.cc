// Copyright 2026 The BinSeeker Authors. All Rights Reserved.
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


#include "binseeker/signature_store.h"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "binseeker/error.h"

namespace binseeker {
namespace {

namespace fs = std::filesystem;

std::uint64_t Fnv(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteAtomically(const fs::path& p, const std::string& content) {
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, p);
}

// Index id field: whitespace and '%' become %XX.
std::string EncodeId(const std::string& id) {
  std::string out;
  for (char c : id) {
    if (c == '%' || std::isspace(static_cast<unsigned char>(c))) {
      char buf[4];
      std::snprintf(buf, sizeof(buf), "%%%02X", static_cast<unsigned char>(c));
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

std::string DecodeId(const std::string& field) {
  std::string out;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] == '%' && i + 2 < field.size() &&
        std::isxdigit(static_cast<unsigned char>(field[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(field[i + 2]))) {
      out += static_cast<char>(std::stoi(field.substr(i + 1, 2), nullptr, 16));
      i += 2;
    } else {
      out += field[i];
    }
  }
  return out;
}

// File name for an id; ids with unsafe characters get a hash suffix.
std::string SafeName(const std::string& id) {
  std::string out;
  bool changed = id.empty() || id[0] == '.';
  for (char c : id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' ||
                    c == '_' || c == '-';
    out += ok ? c : '_';
    changed |= !ok;
  }
  if (changed) out += "-" + Hex(Fnv(id)).substr(0, 8);
  return out;
}

}  // namespace

std::string DefaultStoreRoot() {
  const char* env = std::getenv("BINSEEKER_STORE");
  if (env != nullptr && *env != '\0') return env;
  return ".binseeker-store";
}

std::string SignatureKey(const FunctionRecord& f, const CalleeIndex* callees,
                         const EmuConfig& cfg) {
  std::string settings = std::to_string(cfg.arg_seed) + "/" +
                         std::to_string(cfg.loop_threshold) + "/" +
                         std::to_string(cfg.recursion_threshold) + "/" +
                         std::to_string(cfg.step_budget) + "/" +
                         std::to_string(cfg.int_width);
  for (std::int64_t v : cfg.arg_values) settings += "," + std::to_string(v);
  std::uint64_t h = Fnv(settings, Fnv(SerializeFunctions({f})));
  if (callees != nullptr) {
    std::set<std::string> seen;
    std::vector<const FunctionRecord*> stack = {&f};
    std::map<std::string, const FunctionRecord*> reach;
    while (!stack.empty()) {
      const FunctionRecord* g = stack.back();
      stack.pop_back();
      for (const auto& [site, name] : g->callees) {
        if (!seen.insert(name).second) continue;
        if (const FunctionRecord* c = callees->Find(name)) {
          reach[name] = c;
          stack.push_back(c);
        }
      }
    }
    for (const auto& [name, c] : reach) {
      if (c == &f) continue;
      h = Fnv(SerializeFunctions({*c}), Fnv(name, h));
    }
  }
  return Hex(h);
}

SignatureStore::SignatureStore(std::string root, std::string corpus_hash) {
  dir_ = (fs::path(root) / "sigs" / corpus_hash).string();
  const fs::path index = fs::path(dir_) / "index";
  if (!fs::exists(index)) return;
  std::istringstream in(ReadAll(index));
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string id;
    Entry e;
    if (!(ls >> id >> e.path >> e.arg_seed >> e.key >> e.status)) continue;
    entries_[DecodeId(id)] = std::move(e);
  }
}

std::optional<EmulationResult> SignatureStore::Lookup(
    const FunctionRecord& f, const std::string& key) const {
  auto it = entries_.find(f.id);
  if (it == entries_.end() || it->second.key != key) {
    ++misses_;
    return std::nullopt;
  }
  const Entry& e = it->second;
  EmulationResult r;
  if (e.status == "failed") {
    r.failed = true;
  } else if (e.signature) {
    r.signature = *e.signature;
  } else {
    const fs::path file = fs::path(dir_) / e.path;
    if (!fs::is_regular_file(file)) {
      ++misses_;
      return std::nullopt;
    }
    try {
      r.signature = ParseSignature(ReadAll(file));
    } catch (const MalformedSignature&) {
      ++misses_;
      return std::nullopt;
    }
    r.signature.truncated = e.status == "truncated";
  }
  ++hits_;
  return r;
}

void SignatureStore::Put(const FunctionRecord& f, const EmuConfig& cfg,
                         const std::string& key,
                         const EmulationResult& result) {
  Entry& e = entries_[f.id];
  e.path = SafeName(f.id) + ".sig";
  e.arg_seed = cfg.arg_seed;
  e.key = key;
  e.status = result.failed ? "failed"
             : result.signature.truncated ? "truncated"
                                          : "ok";
  e.signature = result.signature;
  e.dirty = true;
}

void SignatureStore::Flush() {
  if (dir_.empty()) return;
  fs::create_directories(dir_);
  std::string index;
  for (auto& [id, e] : entries_) {
    if (e.dirty) {
      WriteAtomically(fs::path(dir_) / e.path,
                      e.signature ? SerializeSignature(*e.signature) : "");
      e.dirty = false;
    }
    index += EncodeId(id) + " " + e.path + " " + std::to_string(e.arg_seed) + " " +
             e.key + " " + e.status + "\n";
  }
  WriteAtomically(fs::path(dir_) / "index", index);
}

}  // namespace binseeker
