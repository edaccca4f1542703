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


// Random fixtures shared by the unit tests.

#ifndef BINSEEKER_TESTS_TEST_SUPPORT_H_
#define BINSEEKER_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "binseeker/embed.h"
#include "binseeker/func_model.h"
#include "binseeker/lsfg.h"
#include "binseeker/profiles.h"

namespace binseeker::testing {

class TestRng {
 public:
  explicit TestRng(std::uint64_t seed) : gen_(seed) {}
  int Int(int lo, int hi) {
    return lo + static_cast<int>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  std::int64_t Int64(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(span == 0 ? gen_() : gen_() % span);
  }
  double Uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  bool Chance(double p) { return Uniform(0.0, 1.0) < p; }
  template <typename T>
  const T& Pick(const std::vector<T>& v) {
    return v[gen_() % v.size()];
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline std::string RandomLocation(TestRng& rng, const ArchProfile& profile) {
  const int kind = rng.Int(0, 5);
  if (kind <= 3) return rng.Pick(profile.registers);
  Location loc;
  if (kind == 4) {
    loc.kind = Location::Kind::kRelative;
    loc.base = rng.Chance(0.5) ? profile.frame_pointer : profile.stack_pointer;
    loc.offset = 4 * rng.Int(-6, 6);
  } else {
    loc.kind = Location::Kind::kAbsolute;
    loc.offset = 4 * rng.Int(1024, 1040);
  }
  return loc.Canonical();
}

inline std::vector<std::string> RandomLocations(TestRng& rng,
                                                const ArchProfile& profile,
                                                int max_count) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  const int n = rng.Int(0, max_count);
  for (int i = 0; i < n; ++i) {
    std::string l = RandomLocation(rng, profile);
    if (seen.insert(l).second) out.push_back(l);
  }
  return out;
}

// Random CFG over `blocks` blocks: edges unique, any shape including
// cycles and unreachable blocks.
inline std::vector<CfgEdge> RandomCfg(TestRng& rng, int blocks, double density) {
  std::vector<CfgEdge> edges;
  for (int a = 0; a < blocks; ++a) {
    for (int b = 0; b < blocks; ++b) {
      if (rng.Chance(density)) {
        edges.emplace_back("b" + std::to_string(a), "b" + std::to_string(b));
      }
    }
  }
  return edges;
}

// A function with declared reads/writes only (no micro-ops), generic
// mnemonics so the declared lists are the effective accesses.
inline FunctionRecord RandomDataflowFunction(TestRng& rng, int max_blocks,
                                             const std::string& arch = "alpha") {
  const ArchProfile& profile = ProfileFor(arch);
  FunctionRecord f;
  f.id = "df";
  f.arch = arch;
  f.entry = "b0";
  const int nb = rng.Int(1, max_blocks);
  // A small location pool makes define-use chains likely.
  std::vector<std::string> pool = {profile.registers[0], profile.registers[1],
                                   profile.registers[2], "@4096"};
  for (int b = 0; b < nb; ++b) {
    BasicBlock bb;
    bb.id = "b" + std::to_string(b);
    const int ni = rng.Int(1, 4);
    for (int i = 0; i < ni; ++i) {
      Instruction ins;
      ins.mnemonic = rng.Chance(0.5) ? "mov" : "nop";
      std::set<std::string> r, w;
      for (const std::string& l : pool) {
        if (rng.Chance(0.3)) r.insert(l);
        if (rng.Chance(0.25)) w.insert(l);
      }
      ins.reads.assign(r.begin(), r.end());
      ins.writes.assign(w.begin(), w.end());
      bb.instructions.push_back(ins);
    }
    f.blocks.push_back(bb);
  }
  f.cfg_edges = RandomCfg(rng, nb, 2.0 / nb);
  return f;
}

inline MicroOp RandomPlainUop(TestRng& rng, const ArchProfile& profile) {
  auto name = [&] {
    return rng.Chance(0.2) ? "t" + std::to_string(rng.Int(0, 3))
                           : rng.Pick(profile.registers);
  };
  auto src = [&] {
    return rng.Chance(0.3) ? "#" + std::to_string(rng.Int64(-100000, 100000))
                           : name();
  };
  auto addr = [&] {
    Location loc;
    if (rng.Chance(0.5)) {
      loc.kind = Location::Kind::kAbsolute;
      loc.offset = 4 * rng.Int(0, 5000);
    } else {
      loc.kind = Location::Kind::kRelative;
      loc.base = rng.Pick(profile.registers);
      loc.offset = 4 * rng.Int(-10, 10);
    }
    return loc.Canonical();
  };
  const Region regions[] = {Region::kStack, Region::kData, Region::kHeap};
  switch (rng.Int(0, 5)) {
    case 0:
      return MicroOp::Const(name(), rng.Int64(INT64_MIN / 2, INT64_MAX / 2));
    case 1:
      return MicroOp::Binop(static_cast<BinopKind>(rng.Int(0, 8)), name(),
                            src(), src());
    case 2:
      return MicroOp::Load(name(), addr(), regions[rng.Int(0, 2)]);
    case 3:
      return MicroOp::Store(addr(), src(), regions[rng.Int(0, 2)]);
    case 4:
      return MicroOp::Cmp(static_cast<CmpKind>(rng.Int(0, 5)), name(), src(),
                          src());
    default:
      return MicroOp::Binop(BinopKind::kAdd, name(), name(), "#0");
  }
}

inline std::string RandomText(TestRng& rng) {
  static const std::vector<std::string> kPieces = {
      "a", "Z", "0", "_", ".", " ", "\"", "\\", "/", "\t", "\n", "\xc3\xa9",
      "\xe2\x82\xac", "x86", "[", "]", "{", "}", ":", ","};
  std::string s;
  const int n = rng.Int(1, 8);
  for (int i = 0; i < n; ++i) s += rng.Pick(kPieces);
  return s;
}

// A function that passes ValidateFunction, optionally executable.
inline FunctionRecord RandomValidFunction(TestRng& rng, int index) {
  const std::string arch = rng.Chance(0.5) ? "alpha" : "beta";
  const ArchProfile& profile = ProfileFor(arch);
  FunctionRecord f;
  f.id = "fn" + std::to_string(index) + (rng.Chance(0.2) ? RandomText(rng) : "");
  f.arch = arch;
  const int nb = rng.Int(1, 6);
  f.entry = "b" + std::to_string(rng.Int(0, nb - 1));
  f.cfg_edges = RandomCfg(rng, nb, 0.3);
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [a, b] : f.cfg_edges) succ[a].push_back(b);
  const bool exec = rng.Chance(0.6);
  int flat = 0;
  for (int b = 0; b < nb; ++b) {
    BasicBlock bb;
    bb.id = "b" + std::to_string(b);
    const auto& out = succ[bb.id];
    const int ni = rng.Int(1, 4);
    for (int i = 0; i < ni; ++i, ++flat) {
      Instruction ins;
      ins.mnemonic = rng.Chance(0.8)
          ? rng.Pick(std::vector<std::string>{"mov", "add", "cmp", "push", "call", "xor"})
          : RandomText(rng);
      const int nops = rng.Int(0, 3);
      for (int k = 0; k < nops; ++k) ins.operands.push_back(RandomText(rng));
      ins.reads = RandomLocations(rng, profile, 3);
      ins.writes = RandomLocations(rng, profile, 3);
      if (exec) {
        std::vector<MicroOp> uops;
        const int nu = rng.Int(0, 3);
        for (int k = 0; k < nu; ++k) uops.push_back(RandomPlainUop(rng, profile));
        if (rng.Chance(0.15)) {
          const std::string callee =
              rng.Chance(0.5) ? "puts" : "callee" + std::to_string(rng.Int(0, 9));
          uops.push_back(MicroOp::Call(callee, callee == "puts"));
          if (rng.Chance(0.7)) f.callees[flat] = callee;
        }
        if (i + 1 == ni) {
          if (out.size() >= 2) {
            if (rng.Chance(0.7)) {
              uops.push_back(MicroOp::CondBranch(rng.Pick(profile.registers),
                                                 out[0], out[1]));
            } else {
              uops.push_back(MicroOp::Ret(rng.Chance(0.5) ? profile.return_register : ""));
            }
          } else if (out.size() == 1 && rng.Chance(0.5)) {
            uops.push_back(MicroOp::Jump(out[0]));
          } else if (out.empty()) {
            uops.push_back(MicroOp::Ret(rng.Chance(0.5) ? "#" + std::to_string(rng.Int(-9, 9)) : ""));
          }
        }
        ins.uops = std::move(uops);
      }
      bb.instructions.push_back(std::move(ins));
    }
    f.blocks.push_back(std::move(bb));
  }
  if (!exec && rng.Chance(0.3)) f.callees[rng.Int(0, flat - 1)] = "ext";
  if (rng.Chance(0.7)) f.source_key = "src" + std::to_string(rng.Int(0, 20));
  return f;
}

inline Lsfg RandomLsfg(TestRng& rng, int max_vertices, int max_feature = 5) {
  Lsfg g;
  g.function_id = "g";
  const int v = rng.Int(1, max_vertices);
  for (int i = 0; i < v; ++i) {
    g.block_ids.push_back("b" + std::to_string(i));
    FeatureVector x{};
    for (auto& c : x) c = rng.Int(0, max_feature);
    g.features.push_back(x);
  }
  std::set<Edge> data;
  for (int a = 0; a < v; ++a) {
    for (int b = 0; b < v; ++b) {
      if (rng.Chance(0.35)) g.control_edges.push_back({a, b});
      if (a != b && rng.Chance(0.3)) data.insert({a, b});
    }
  }
  g.data_edges.assign(data.begin(), data.end());
  return g;
}

inline ModelParams RandomParams(TestRng& rng, const EmbedConfig& cfg,
                                double scale) {
  ModelParams m = InitParams(cfg);
  for (Matrix* mat : m.Matrices()) {
    for (Eigen::Index i = 0; i < mat->size(); ++i) {
      mat->data()[i] = rng.Uniform(-scale, scale);
    }
  }
  return m;
}

// Fresh directory removed on destruction.
class ScopedTempDir {
 public:
  explicit ScopedTempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("binseeker-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScopedTempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScopedTempDir(const ScopedTempDir&) = delete;
  ScopedTempDir& operator=(const ScopedTempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace binseeker::testing

#endif  // BINSEEKER_TESTS_TEST_SUPPORT_H_
