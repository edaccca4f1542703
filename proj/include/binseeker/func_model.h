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

// Binary-function interchange representation.
//
// A corpus document is canonical JSON:
//   {"functions":[...],"version":1}
// Each function carries its blocks, the CFG edge list, an optional
// ground-truth source_key and an optional call-site -> callee map. Each
// instruction lists the locations it reads and writes, and optionally the
// micro-op bundle that makes it executable by the emulator.
//
// Locations are either register names from the architecture profile, a
// stack/register-relative slot "<reg>+K" / "<reg>-K", or an absolute data
// address "@K".

#ifndef BINSEEKER_FUNC_MODEL_H_
#define BINSEEKER_FUNC_MODEL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace binseeker {

enum class UopKind { kConst, kBinop, kLoad, kStore, kCmp, kBranch, kCall, kRet };
enum class BinopKind { kAdd, kSub, kMul, kDiv, kAnd, kOr, kXor, kShl, kShr };
enum class CmpKind { kEq, kNe, kLt, kLe, kGt, kGe };
enum class Region { kStack, kData, kHeap };

std::string_view BinopName(BinopKind kind);
std::string_view CmpName(CmpKind kind);
std::string_view RegionName(Region region);
std::optional<BinopKind> ParseBinop(std::string_view name);
std::optional<CmpKind> ParseCmp(std::string_view name);
std::optional<Region> ParseRegion(std::string_view name);
CmpKind NegateCmp(CmpKind kind);

// One single-operation micro-IR statement. Source operands are location
// names or immediates written "#<int>". Addresses are "<base>+K",
// "<base>-K" or "@K". Only the fields relevant to `kind` are meaningful.
//
// JSON forms (arrays of strings):
//   ["const", dst, "<int>"]
//   [<binop>, dst, src1, src2]          binop in add,sub,mul,div,and,or,...
//   ["load", dst, addr, region]
//   ["store", addr, src, region]
//   ["cmp", kind, dst, src1, src2]
//   ["br", target]  /  ["br", cond, true_target, false_target]
//   ["call", callee, "lib"|"fn"]
//   ["ret"]  /  ["ret", src]
struct MicroOp {
  UopKind kind = UopKind::kConst;
  BinopKind binop = BinopKind::kAdd;
  CmpKind cmp = CmpKind::kEq;
  Region region = Region::kStack;
  std::string dst;
  std::string src1;
  std::string src2;
  std::string addr;
  std::int64_t literal = 0;
  std::string target_true;
  std::string target_false;
  std::string callee;
  bool is_library = false;

  bool is_terminator() const {
    return kind == UopKind::kBranch || kind == UopKind::kRet;
  }
  bool is_conditional_branch() const {
    return kind == UopKind::kBranch && !src1.empty();
  }

  static MicroOp Const(std::string dst, std::int64_t value);
  static MicroOp Binop(BinopKind op, std::string dst, std::string a,
                       std::string b);
  static MicroOp Load(std::string dst, std::string addr, Region region);
  static MicroOp Store(std::string addr, std::string src, Region region);
  static MicroOp Cmp(CmpKind kind, std::string dst, std::string a,
                     std::string b);
  static MicroOp Jump(std::string target);
  static MicroOp CondBranch(std::string cond, std::string if_true,
                            std::string if_false);
  static MicroOp Call(std::string callee, bool is_library);
  static MicroOp Ret(std::string src = "");

  friend bool operator==(const MicroOp&, const MicroOp&) = default;
};

struct Instruction {
  std::string mnemonic;
  std::vector<std::string> operands;
  std::vector<std::string> reads;
  std::vector<std::string> writes;
  std::optional<std::vector<MicroOp>> uops;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

struct BasicBlock {
  std::string id;
  std::vector<Instruction> instructions;

  friend bool operator==(const BasicBlock&, const BasicBlock&) = default;
};

using CfgEdge = std::pair<std::string, std::string>;

struct FunctionRecord {
  std::string id;
  std::string arch;
  std::string entry;
  std::vector<BasicBlock> blocks;
  std::vector<CfgEdge> cfg_edges;
  std::optional<std::string> source_key;
  // Flat instruction index (blocks in declaration order) -> callee function
  // id or library name. Unresolved indirect calls are simply absent.
  std::map<int, std::string> callees;

  int BlockIndex(std::string_view block_id) const;  // -1 when absent
  int InstructionCount() const;
  bool IsExecutable() const;  // every instruction carries micro-ops

  friend bool operator==(const FunctionRecord&, const FunctionRecord&) =
      default;
};

// Parsed form of a location or address token.
struct Location {
  enum class Kind { kRegister, kRelative, kAbsolute };
  Kind kind = Kind::kRegister;
  std::string base;  // register name for kRegister / kRelative
  std::int64_t offset = 0;

  // Canonical spelling: "eax", "ebp-8", "@4096".
  std::string Canonical() const;
};

// Accepts "eax", "[ebp-8]", "ebp+4", "@4096", "[@4096]". Brackets are
// stripped. Returns nullopt for anything else.
std::optional<Location> ParseLocation(std::string_view token);
// Immediate operand "#<int>".
std::optional<std::int64_t> ParseImmediate(std::string_view token);
bool IsTemporary(std::string_view name);  // "t<digits>" micro-op temps

// Throws MalformedDocument on syntax errors and InvariantViolation when a
// function breaks a structural rule. Architecture tags resolve against the
// built-in profiles.
std::vector<FunctionRecord> ParseFunctionFile(std::string_view content);
std::vector<FunctionRecord> ReadFunctionFile(const std::string& path);

// Canonical serialization: sorted keys, arrays in declaration order,
// no insignificant whitespace.
std::string SerializeFunctions(const std::vector<FunctionRecord>& records);
void WriteFunctionFile(const std::string& path,
                       const std::vector<FunctionRecord>& records);

// Re-validates an in-memory record (same rules as parsing).
void ValidateFunction(const FunctionRecord& record);

// 64-bit FNV-1a over the canonical serialization, as lowercase hex.
std::string CorpusHash(const std::vector<FunctionRecord>& records);

}  // namespace binseeker

#endif  // BINSEEKER_FUNC_MODEL_H_
