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

#include "binseeker/func_model.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "binseeker/error.h"
#include "binseeker/profiles.h"
#include "json.hpp"

namespace binseeker {
namespace {

using nlohmann::json;

constexpr std::string_view kBinopNames[] = {"add", "sub", "mul", "div", "and",
                                            "or",  "xor", "shl", "shr"};
constexpr std::string_view kCmpNames[] = {"eq", "ne", "lt", "le", "gt", "ge"};
constexpr std::string_view kRegionNames[] = {"stack", "data", "heap"};

bool ParseInt(std::string_view text, std::int64_t* out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  const char* end = text.data() + text.size();
  if (*begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

[[noreturn]] void Malformed(const std::string& what) {
  throw MalformedDocument(what);
}

const json& Field(const json& object, const char* key, const char* where) {
  auto it = object.find(key);
  if (it == object.end()) {
    Malformed(std::string(where) + ": missing field '" + key + "'");
  }
  return *it;
}

std::string StringField(const json& object, const char* key,
                        const char* where) {
  const json& value = Field(object, key, where);
  if (!value.is_string()) {
    Malformed(std::string(where) + ": field '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

void CheckKeys(const json& object, std::initializer_list<const char*> allowed,
               const char* where) {
  if (!object.is_object()) Malformed(std::string(where) + " must be an object");
  for (auto it = object.begin(); it != object.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) known = known || it.key() == key;
    if (!known) {
      Malformed(std::string(where) + ": unknown field '" + it.key() + "'");
    }
  }
}

std::vector<std::string> StringArray(const json& value, const char* where) {
  if (!value.is_array()) Malformed(std::string(where) + " must be an array");
  std::vector<std::string> out;
  out.reserve(value.size());
  for (const json& item : value) {
    if (!item.is_string()) {
      Malformed(std::string(where) + " must contain strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

MicroOp UopFromJson(const json& value) {
  std::vector<std::string> parts = StringArray(value, "uop");
  if (parts.empty()) Malformed("uop: empty array");
  const std::string& head = parts[0];
  auto arity = [&](std::size_t n) {
    if (parts.size() != n) Malformed("uop '" + head + "': wrong arity");
  };
  if (head == "const") {
    arity(3);
    std::int64_t v;
    if (!ParseInt(parts[2], &v)) Malformed("uop const: bad literal");
    return MicroOp::Const(parts[1], v);
  }
  if (auto op = ParseBinop(head)) {
    arity(4);
    return MicroOp::Binop(*op, parts[1], parts[2], parts[3]);
  }
  if (head == "load" || head == "store") {
    arity(4);
    auto region = ParseRegion(parts[3]);
    if (!region) Malformed("uop " + head + ": bad region '" + parts[3] + "'");
    return head == "load" ? MicroOp::Load(parts[1], parts[2], *region)
                          : MicroOp::Store(parts[1], parts[2], *region);
  }
  if (head == "cmp") {
    arity(5);
    auto kind = ParseCmp(parts[1]);
    if (!kind) Malformed("uop cmp: bad kind '" + parts[1] + "'");
    return MicroOp::Cmp(*kind, parts[2], parts[3], parts[4]);
  }
  if (head == "br") {
    if (parts.size() == 2) return MicroOp::Jump(parts[1]);
    arity(4);
    return MicroOp::CondBranch(parts[1], parts[2], parts[3]);
  }
  if (head == "call") {
    arity(3);
    if (parts[2] != "lib" && parts[2] != "fn") {
      Malformed("uop call: flag must be lib or fn");
    }
    return MicroOp::Call(parts[1], parts[2] == "lib");
  }
  if (head == "ret") {
    if (parts.size() == 1) return MicroOp::Ret();
    arity(2);
    return MicroOp::Ret(parts[1]);
  }
  Malformed("uop: unknown operation '" + head + "'");
}

json UopToJson(const MicroOp& op) {
  switch (op.kind) {
    case UopKind::kConst:
      return json::array({"const", op.dst, std::to_string(op.literal)});
    case UopKind::kBinop:
      return json::array(
          {std::string(BinopName(op.binop)), op.dst, op.src1, op.src2});
    case UopKind::kLoad:
      return json::array(
          {"load", op.dst, op.addr, std::string(RegionName(op.region))});
    case UopKind::kStore:
      return json::array(
          {"store", op.addr, op.src1, std::string(RegionName(op.region))});
    case UopKind::kCmp:
      return json::array(
          {"cmp", std::string(CmpName(op.cmp)), op.dst, op.src1, op.src2});
    case UopKind::kBranch:
      if (op.src1.empty()) return json::array({"br", op.target_true});
      return json::array({"br", op.src1, op.target_true, op.target_false});
    case UopKind::kCall:
      return json::array({"call", op.callee, op.is_library ? "lib" : "fn"});
    case UopKind::kRet:
      if (op.src1.empty()) return json::array({"ret"});
      return json::array({"ret", op.src1});
  }
  return json::array();
}

Instruction InstructionFromJson(const json& value) {
  CheckKeys(value, {"m", "ops", "reads", "writes", "uops"}, "instruction");
  Instruction instr;
  instr.mnemonic = StringField(value, "m", "instruction");
  instr.operands = StringArray(Field(value, "ops", "instruction"), "ops");
  instr.reads = StringArray(Field(value, "reads", "instruction"), "reads");
  instr.writes = StringArray(Field(value, "writes", "instruction"), "writes");
  if (auto it = value.find("uops"); it != value.end()) {
    if (!it->is_array()) Malformed("uops must be an array");
    std::vector<MicroOp> uops;
    for (const json& u : *it) uops.push_back(UopFromJson(u));
    instr.uops = std::move(uops);
  }
  return instr;
}

json InstructionToJson(const Instruction& instr) {
  json out = json::object();
  out["m"] = instr.mnemonic;
  out["ops"] = instr.operands;
  out["reads"] = instr.reads;
  out["writes"] = instr.writes;
  if (instr.uops) {
    json uops = json::array();
    for (const MicroOp& op : *instr.uops) uops.push_back(UopToJson(op));
    out["uops"] = std::move(uops);
  }
  return out;
}

FunctionRecord FunctionFromJson(const json& value) {
  CheckKeys(value,
            {"id", "arch", "entry", "blocks", "cfg", "source_key", "callees"},
            "function");
  FunctionRecord f;
  f.id = StringField(value, "id", "function");
  f.arch = StringField(value, "arch", "function");
  f.entry = StringField(value, "entry", "function");
  const json& blocks = Field(value, "blocks", "function");
  if (!blocks.is_array()) Malformed("function '" + f.id + "': blocks");
  for (const json& b : blocks) {
    CheckKeys(b, {"id", "insns"}, "block");
    BasicBlock block;
    block.id = StringField(b, "id", "block");
    const json& insns = Field(b, "insns", "block");
    if (!insns.is_array()) Malformed("block '" + block.id + "': insns");
    for (const json& i : insns) {
      block.instructions.push_back(InstructionFromJson(i));
    }
    f.blocks.push_back(std::move(block));
  }
  const json& cfg = Field(value, "cfg", "function");
  if (!cfg.is_array()) Malformed("function '" + f.id + "': cfg");
  for (const json& e : cfg) {
    std::vector<std::string> pair = StringArray(e, "cfg edge");
    if (pair.size() != 2) Malformed("cfg edge must have two endpoints");
    f.cfg_edges.emplace_back(pair[0], pair[1]);
  }
  if (auto it = value.find("source_key"); it != value.end()) {
    if (!it->is_string()) Malformed("source_key must be a string");
    f.source_key = it->get<std::string>();
  }
  if (auto it = value.find("callees"); it != value.end()) {
    if (!it->is_object()) Malformed("callees must be an object");
    for (auto c = it->begin(); c != it->end(); ++c) {
      std::int64_t index;
      if (!ParseInt(c.key(), &index) || index < 0 ||
          std::to_string(index) != c.key()) {
        Malformed("callees key must be a non-negative integer");
      }
      if (!c->is_string()) Malformed("callee must be a string");
      f.callees[static_cast<int>(index)] = c->get<std::string>();
    }
  }
  return f;
}

json FunctionToJson(const FunctionRecord& f) {
  json out = json::object();
  out["id"] = f.id;
  out["arch"] = f.arch;
  out["entry"] = f.entry;
  json blocks = json::array();
  for (const BasicBlock& b : f.blocks) {
    json insns = json::array();
    for (const Instruction& i : b.instructions) {
      insns.push_back(InstructionToJson(i));
    }
    blocks.push_back(json{{"id", b.id}, {"insns", std::move(insns)}});
  }
  out["blocks"] = std::move(blocks);
  json cfg = json::array();
  for (const auto& [src, dst] : f.cfg_edges) {
    cfg.push_back(json::array({src, dst}));
  }
  out["cfg"] = std::move(cfg);
  if (f.source_key) out["source_key"] = *f.source_key;
  if (!f.callees.empty()) {
    json callees = json::object();
    for (const auto& [index, name] : f.callees) {
      callees[std::to_string(index)] = name;
    }
    out["callees"] = std::move(callees);
  }
  return out;
}

// --- validation ---------------------------------------------------------

class Validator {
 public:
  explicit Validator(const FunctionRecord& f) : f_(f) {}

  void Run() {
    if (f_.id.empty()) Fail("function id must be non-empty");
    try {
      profile_ = &ProfileFor(f_.arch);
    } catch (const UnknownArchitecture&) {
      Fail("unknown architecture '" + f_.arch + "'");
    }
    if (f_.blocks.empty()) Fail("function has no blocks");
    std::unordered_set<std::string> ids;
    for (const BasicBlock& b : f_.blocks) {
      if (b.id.empty()) Fail("block id must be non-empty");
      if (!ids.insert(b.id).second) Fail("duplicate block id '" + b.id + "'");
    }
    if (!ids.count(f_.entry)) Fail("entry '" + f_.entry + "' is not a block");
    std::set<CfgEdge> seen;
    for (const CfgEdge& e : f_.cfg_edges) {
      if (!ids.count(e.first) || !ids.count(e.second)) {
        Fail("cfg edge (" + e.first + "," + e.second +
             ") references a missing block");
      }
      if (!seen.insert(e).second) {
        Fail("duplicate cfg edge (" + e.first + "," + e.second + ")");
      }
      successors_[e.first].insert(e.second);
      has_predecessor_.insert(e.second);
    }
    const int total = f_.InstructionCount();
    for (const auto& [index, name] : f_.callees) {
      if (index >= total) Fail("callee index out of range");
      if (name.empty()) Fail("empty callee name");
    }
    bool any_uops = false;
    bool all_uops = true;
    for (const BasicBlock& b : f_.blocks) {
      for (const Instruction& i : b.instructions) {
        any_uops = any_uops || i.uops.has_value();
        all_uops = all_uops && i.uops.has_value();
      }
    }
    if (any_uops && !all_uops) {
      Fail("micro-ops must be given for every instruction or none");
    }
    int flat = 0;
    for (const BasicBlock& b : f_.blocks) {
      if (b.instructions.empty()) {
        bool synthetic = b.id == f_.entry || !successors_.count(b.id);
        if (!synthetic) {
          Fail("block '" + b.id + "' is empty but neither entry nor exit");
        }
      }
      for (std::size_t k = 0; k < b.instructions.size(); ++k, ++flat) {
        CheckInstruction(b, b.instructions[k],
                         k + 1 == b.instructions.size(), flat);
      }
      if (all_uops) CheckTerminator(b);
    }
  }

 private:
  [[noreturn]] void Fail(const std::string& rule) {
    throw InvariantViolation(f_.id, rule);
  }

  void CheckLocation(const std::string& token, const char* what) {
    auto loc = ParseLocation(token);
    if (!loc || loc->Canonical() != token) {
      Fail(std::string(what) + " location '" + token + "' is not canonical");
    }
    if (loc->kind != Location::Kind::kAbsolute &&
        !profile_->IsRegister(loc->base)) {
      Fail(std::string(what) + " location '" + token +
           "' names no register of " + profile_->name);
    }
  }

  void CheckUopName(const std::string& name, bool allow_immediate) {
    if (allow_immediate && ParseImmediate(name)) return;
    if (IsTemporary(name) || profile_->IsRegister(name)) return;
    Fail("micro-op operand '" + name + "' is not a register or temporary");
  }

  void CheckUopAddress(const std::string& addr) {
    auto loc = ParseLocation(addr);
    if (!loc || loc->kind == Location::Kind::kRegister) {
      Fail("micro-op address '" + addr + "' is malformed");
    }
    if (loc->kind == Location::Kind::kRelative) CheckUopName(loc->base, false);
  }

  void CheckInstruction(const BasicBlock& b, const Instruction& instr,
                        bool last, int flat) {
    if (instr.mnemonic.empty()) Fail("empty mnemonic in block '" + b.id + "'");
    for (const auto* list : {&instr.reads, &instr.writes}) {
      std::unordered_set<std::string> unique;
      for (const std::string& token : *list) {
        CheckLocation(token, list == &instr.reads ? "read" : "write");
        if (!unique.insert(token).second) {
          Fail("duplicate location '" + token + "' in block '" + b.id + "'");
        }
      }
    }
    if (!instr.uops) return;
    const auto& uops = *instr.uops;
    for (std::size_t k = 0; k < uops.size(); ++k) {
      const MicroOp& op = uops[k];
      if (op.is_terminator() && !(last && k + 1 == uops.size())) {
        Fail("terminator micro-op must end block '" + b.id + "'");
      }
      switch (op.kind) {
        case UopKind::kConst:
          CheckUopName(op.dst, false);
          break;
        case UopKind::kBinop:
        case UopKind::kCmp:
          CheckUopName(op.dst, false);
          CheckUopName(op.src1, true);
          CheckUopName(op.src2, true);
          break;
        case UopKind::kLoad:
          CheckUopName(op.dst, false);
          CheckUopAddress(op.addr);
          break;
        case UopKind::kStore:
          CheckUopAddress(op.addr);
          CheckUopName(op.src1, true);
          break;
        case UopKind::kBranch: {
          if (!op.src1.empty()) CheckUopName(op.src1, false);
          const auto& succ = successors_[b.id];
          for (const std::string* t : {&op.target_true, &op.target_false}) {
            if (t->empty()) continue;
            if (!succ.count(*t)) {
              Fail("branch target '" + *t + "' of block '" + b.id +
                   "' is not a cfg successor");
            }
          }
          break;
        }
        case UopKind::kCall: {
          if (op.callee.empty()) Fail("call micro-op without callee");
          auto it = f_.callees.find(flat);
          if (it != f_.callees.end() && it->second != op.callee) {
            Fail("call micro-op callee disagrees with callees map");
          }
          break;
        }
        case UopKind::kRet:
          if (!op.src1.empty()) CheckUopName(op.src1, true);
          break;
      }
    }
  }

  // Blocks without a branch/ret fall through to their unique successor.
  void CheckTerminator(const BasicBlock& b) {
    const MicroOp* last = nullptr;
    if (!b.instructions.empty() && !b.instructions.back().uops->empty()) {
      last = &b.instructions.back().uops->back();
    }
    bool terminated = last && last->is_terminator();
    if (!terminated && successors_[b.id].size() > 1) {
      Fail("block '" + b.id + "' falls through but has several successors");
    }
  }

  const FunctionRecord& f_;
  const ArchProfile* profile_ = nullptr;
  std::map<std::string, std::set<std::string>> successors_;
  std::unordered_set<std::string> has_predecessor_;
};

std::string ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::string_view BinopName(BinopKind kind) {
  return kBinopNames[static_cast<int>(kind)];
}
std::string_view CmpName(CmpKind kind) {
  return kCmpNames[static_cast<int>(kind)];
}
std::string_view RegionName(Region region) {
  return kRegionNames[static_cast<int>(region)];
}

std::optional<BinopKind> ParseBinop(std::string_view name) {
  for (int i = 0; i < 9; ++i) {
    if (kBinopNames[i] == name) return static_cast<BinopKind>(i);
  }
  return std::nullopt;
}
std::optional<CmpKind> ParseCmp(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kCmpNames[i] == name) return static_cast<CmpKind>(i);
  }
  return std::nullopt;
}
std::optional<Region> ParseRegion(std::string_view name) {
  for (int i = 0; i < 3; ++i) {
    if (kRegionNames[i] == name) return static_cast<Region>(i);
  }
  return std::nullopt;
}

CmpKind NegateCmp(CmpKind kind) {
  switch (kind) {
    case CmpKind::kEq: return CmpKind::kNe;
    case CmpKind::kNe: return CmpKind::kEq;
    case CmpKind::kLt: return CmpKind::kGe;
    case CmpKind::kLe: return CmpKind::kGt;
    case CmpKind::kGt: return CmpKind::kLe;
    case CmpKind::kGe: return CmpKind::kLt;
  }
  return kind;
}

MicroOp MicroOp::Const(std::string dst, std::int64_t value) {
  MicroOp op;
  op.kind = UopKind::kConst;
  op.dst = std::move(dst);
  op.literal = value;
  return op;
}
MicroOp MicroOp::Binop(BinopKind kind, std::string dst, std::string a,
                       std::string b) {
  MicroOp op;
  op.kind = UopKind::kBinop;
  op.binop = kind;
  op.dst = std::move(dst);
  op.src1 = std::move(a);
  op.src2 = std::move(b);
  return op;
}
MicroOp MicroOp::Load(std::string dst, std::string addr, Region region) {
  MicroOp op;
  op.kind = UopKind::kLoad;
  op.dst = std::move(dst);
  op.addr = std::move(addr);
  op.region = region;
  return op;
}
MicroOp MicroOp::Store(std::string addr, std::string src, Region region) {
  MicroOp op;
  op.kind = UopKind::kStore;
  op.addr = std::move(addr);
  op.src1 = std::move(src);
  op.region = region;
  return op;
}
MicroOp MicroOp::Cmp(CmpKind kind, std::string dst, std::string a,
                     std::string b) {
  MicroOp op;
  op.kind = UopKind::kCmp;
  op.cmp = kind;
  op.dst = std::move(dst);
  op.src1 = std::move(a);
  op.src2 = std::move(b);
  return op;
}
MicroOp MicroOp::Jump(std::string target) {
  MicroOp op;
  op.kind = UopKind::kBranch;
  op.target_true = std::move(target);
  return op;
}
MicroOp MicroOp::CondBranch(std::string cond, std::string if_true,
                            std::string if_false) {
  MicroOp op;
  op.kind = UopKind::kBranch;
  op.src1 = std::move(cond);
  op.target_true = std::move(if_true);
  op.target_false = std::move(if_false);
  return op;
}
MicroOp MicroOp::Call(std::string callee, bool is_library) {
  MicroOp op;
  op.kind = UopKind::kCall;
  op.callee = std::move(callee);
  op.is_library = is_library;
  return op;
}
MicroOp MicroOp::Ret(std::string src) {
  MicroOp op;
  op.kind = UopKind::kRet;
  op.src1 = std::move(src);
  return op;
}

int FunctionRecord::BlockIndex(std::string_view block_id) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].id == block_id) return static_cast<int>(i);
  }
  return -1;
}

int FunctionRecord::InstructionCount() const {
  int total = 0;
  for (const BasicBlock& b : blocks) {
    total += static_cast<int>(b.instructions.size());
  }
  return total;
}

bool FunctionRecord::IsExecutable() const {
  for (const BasicBlock& b : blocks) {
    for (const Instruction& i : b.instructions) {
      if (!i.uops) return false;
    }
  }
  return true;
}

std::string Location::Canonical() const {
  switch (kind) {
    case Kind::kRegister:
      return base;
    case Kind::kRelative:
      return base + (offset < 0 ? "-" : "+") +
             std::to_string(offset < 0 ? -offset : offset);
    case Kind::kAbsolute:
      return "@" + std::to_string(offset);
  }
  return base;
}

std::optional<Location> ParseLocation(std::string_view token) {
  if (token.size() >= 2 && token.front() == '[' && token.back() == ']') {
    token = token.substr(1, token.size() - 2);
  }
  if (token.empty()) return std::nullopt;
  Location loc;
  if (token.front() == '@') {
    loc.kind = Location::Kind::kAbsolute;
    if (!ParseInt(token.substr(1), &loc.offset) || loc.offset < 0) {
      return std::nullopt;
    }
    return loc;
  }
  auto is_name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
           c == '$' || c == '.';
  };
  std::size_t split = token.find_first_of("+-");
  std::string_view name = token.substr(0, split);
  if (name.empty() ||
      !std::all_of(name.begin(), name.end(), is_name_char) ||
      std::isdigit(static_cast<unsigned char>(name.front()))) {
    return std::nullopt;
  }
  loc.base = std::string(name);
  if (split == std::string_view::npos) {
    loc.kind = Location::Kind::kRegister;
    return loc;
  }
  std::int64_t magnitude;
  std::string_view digits = token.substr(split + 1);
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) {
        return std::isdigit(static_cast<unsigned char>(c));
      })) {
    return std::nullopt;
  }
  if (!ParseInt(digits, &magnitude)) return std::nullopt;
  loc.kind = Location::Kind::kRelative;
  loc.offset = token[split] == '-' ? -magnitude : magnitude;
  return loc;
}

std::optional<std::int64_t> ParseImmediate(std::string_view token) {
  if (token.size() < 2 || token.front() != '#') return std::nullopt;
  std::int64_t v;
  if (!ParseInt(token.substr(1), &v)) return std::nullopt;
  return v;
}

bool IsTemporary(std::string_view name) {
  return name.size() >= 2 && name[0] == 't' &&
         std::all_of(name.begin() + 1, name.end(), [](char c) {
           return std::isdigit(static_cast<unsigned char>(c));
         });
}

void ValidateFunction(const FunctionRecord& record) {
  Validator(record).Run();
}

std::vector<FunctionRecord> ParseFunctionFile(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content.begin(), content.end());
  } catch (const json::parse_error& e) {
    throw MalformedDocument(std::string("syntax error: ") + e.what());
  }
  CheckKeys(doc, {"version", "functions"}, "document");
  const json& version = Field(doc, "version", "document");
  if (!version.is_number_integer() || version.get<std::int64_t>() != 1) {
    Malformed("document: unsupported version");
  }
  const json& functions = Field(doc, "functions", "document");
  if (!functions.is_array()) Malformed("document: functions must be an array");
  std::vector<FunctionRecord> out;
  out.reserve(functions.size());
  std::unordered_set<std::string> ids;
  for (const json& f : functions) {
    out.push_back(FunctionFromJson(f));
    ValidateFunction(out.back());
    if (!ids.insert(out.back().id).second) {
      throw InvariantViolation(out.back().id, "duplicate function id");
    }
  }
  return out;
}

std::vector<FunctionRecord> ReadFunctionFile(const std::string& path) {
  return ParseFunctionFile(ReadAll(path));
}

std::string SerializeFunctions(const std::vector<FunctionRecord>& records) {
  json functions = json::array();
  for (const FunctionRecord& f : records) functions.push_back(FunctionToJson(f));
  json doc = json::object();
  doc["version"] = 1;
  doc["functions"] = std::move(functions);
  return doc.dump();
}

void WriteFunctionFile(const std::string& path,
                       const std::vector<FunctionRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << SerializeFunctions(records);
}

std::string CorpusHash(const std::vector<FunctionRecord>& records) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : SerializeFunctions(records)) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

}  // namespace binseeker
