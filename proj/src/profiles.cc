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

#include "binseeker/profiles.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "binseeker/error.h"
#include "json.hpp"

namespace binseeker {
namespace {

using nlohmann::json;

constexpr std::string_view kCategoryNames[] = {
    "stack",           "arithmetic",         "logical",
    "comparative",     "library_call",       "unconditional_jump",
    "conditional_jump", "generic"};

// Same bytes as data/profiles/alpha.json.
constexpr std::string_view kAlphaJson =
    R"({"arg_registers":["eax","edx","ecx"],"call_mnemonics":["call"],)"
    R"("category_table":{"add":"arithmetic","and":"logical","call":"generic",)"
    R"("cmp":"comparative","dec":"arithmetic","idiv":"arithmetic",)"
    R"("imul":"arithmetic","inc":"arithmetic","ja":"conditional_jump",)"
    R"("jae":"conditional_jump","jb":"conditional_jump","jbe":"conditional_jump",)"
    R"("je":"conditional_jump","jg":"conditional_jump","jge":"conditional_jump",)"
    R"("jl":"conditional_jump","jle":"conditional_jump","jmp":"unconditional_jump",)"
    R"("jne":"conditional_jump","lea":"generic","mov":"generic","neg":"arithmetic",)"
    R"("nop":"generic","not":"logical","or":"logical","pop":"stack","push":"stack",)"
    R"("ret":"unconditional_jump","sar":"logical","shl":"logical","shr":"logical",)"
    R"("sub":"arithmetic","test":"comparative","xchg":"generic","xor":"logical"},)"
    R"("frame_pointer":"ebp","name":"alpha","registers":["eax","ebx","ecx",)"
    R"("edx","esi","edi","ebp","esp","eflags"],"return_register":"eax",)"
    R"("stack_pointer":"esp"})";

// Same bytes as data/profiles/beta.json.
constexpr std::string_view kBetaJson =
    R"({"arg_registers":["r0"],"call_mnemonics":["bl","blx"],)"
    R"("category_table":{"add":"arithmetic","adr":"generic","and":"logical",)"
    R"("asr":"logical","b":"unconditional_jump","beq":"conditional_jump",)"
    R"("bge":"conditional_jump","bgt":"conditional_jump","bic":"logical",)"
    R"("bl":"generic","ble":"conditional_jump","blt":"conditional_jump",)"
    R"("blx":"generic","bne":"conditional_jump","bx":"unconditional_jump",)"
    R"("cmn":"comparative","cmp":"comparative","eor":"logical","ldr":"generic",)"
    R"("lsl":"logical","lsr":"logical","mov":"generic","mul":"arithmetic",)"
    R"("mvn":"logical","nop":"generic","orr":"logical","pop":"stack",)"
    R"("push":"stack","rsb":"arithmetic","sdiv":"arithmetic","str":"generic",)"
    R"("sub":"arithmetic","tst":"comparative"},"frame_pointer":"fp",)"
    R"("name":"beta","registers":["r0","r1","r2","r3","r4","r5","r6","r7",)"
    R"("r8","r9","r10","r11","fp","sp","lr","cpsr"],"return_register":"r0",)"
    R"("stack_pointer":"sp"})";

std::vector<std::string> Strings(const json& value, const char* what) {
  if (!value.is_array()) throw MalformedDocument(std::string("profile: ") + what);
  std::vector<std::string> out;
  for (const json& v : value) {
    if (!v.is_string()) throw MalformedDocument(std::string("profile: ") + what);
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string String(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end() || !it->is_string()) {
    throw MalformedDocument(std::string("profile: missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string_view CategoryName(FeatureCategory category) {
  return kCategoryNames[static_cast<int>(category)];
}

std::optional<FeatureCategory> ParseCategory(std::string_view name) {
  for (int i = 0; i < kNumFeatureCategories; ++i) {
    if (kCategoryNames[i] == name) return static_cast<FeatureCategory>(i);
  }
  return std::nullopt;
}

bool ArchProfile::IsRegister(std::string_view reg) const {
  return std::find(registers.begin(), registers.end(), reg) != registers.end();
}

bool ArchProfile::IsCallMnemonic(std::string_view mnemonic) const {
  return std::find(call_mnemonics.begin(), call_mnemonics.end(), mnemonic) !=
         call_mnemonics.end();
}

ArchProfile ParseProfile(std::string_view content) {
  json doc;
  try {
    doc = json::parse(content.begin(), content.end());
  } catch (const json::parse_error& e) {
    throw MalformedDocument(std::string("profile: ") + e.what());
  }
  if (!doc.is_object()) throw MalformedDocument("profile: not an object");
  ArchProfile p;
  p.name = String(doc, "name");
  p.registers = Strings(doc.value("registers", json()), "registers");
  p.arg_registers = Strings(doc.value("arg_registers", json()), "arg_registers");
  p.call_mnemonics =
      Strings(doc.value("call_mnemonics", json()), "call_mnemonics");
  p.stack_pointer = String(doc, "stack_pointer");
  p.frame_pointer = String(doc, "frame_pointer");
  p.return_register = String(doc, "return_register");
  const json& table = doc.value("category_table", json());
  if (!table.is_object()) throw MalformedDocument("profile: category_table");
  for (auto it = table.begin(); it != table.end(); ++it) {
    auto category = it->is_string() ? ParseCategory(it->get<std::string>())
                                    : std::nullopt;
    if (!category) throw MalformedDocument("profile: bad category for '" + it.key() + "'");
    p.category_table[it.key()] = *category;
  }
  if (p.arg_registers.empty()) throw MalformedDocument("profile: arg_registers is empty");
  for (const std::string* reg : {&p.stack_pointer, &p.frame_pointer,
                                 &p.return_register}) {
    if (!p.IsRegister(*reg)) throw MalformedDocument("profile: unknown register " + *reg);
  }
  for (const std::string& reg : p.arg_registers) {
    if (!p.IsRegister(reg)) throw MalformedDocument("profile: unknown register " + reg);
  }
  return p;
}

ArchProfile ReadProfile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedDocument("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseProfile(buffer.str());
}

std::string SerializeProfile(const ArchProfile& p) {
  json table = json::object();
  for (const auto& [mnemonic, category] : p.category_table) {
    table[mnemonic] = std::string(CategoryName(category));
  }
  json doc = json::object();
  doc["name"] = p.name;
  doc["registers"] = p.registers;
  doc["arg_registers"] = p.arg_registers;
  doc["call_mnemonics"] = p.call_mnemonics;
  doc["stack_pointer"] = p.stack_pointer;
  doc["frame_pointer"] = p.frame_pointer;
  doc["return_register"] = p.return_register;
  doc["category_table"] = std::move(table);
  return doc.dump();
}

const ArchProfile& AlphaProfile() {
  static const ArchProfile profile = ParseProfile(kAlphaJson);
  return profile;
}

const ArchProfile& BetaProfile() {
  static const ArchProfile profile = ParseProfile(kBetaJson);
  return profile;
}

const ArchProfile& ProfileFor(std::string_view arch) {
  if (arch == "alpha") return AlphaProfile();
  if (arch == "beta") return BetaProfile();
  throw UnknownArchitecture("unknown architecture '" + std::string(arch) +
                            "'");
}

std::vector<std::string> BuiltinArchitectures() { return {"alpha", "beta"}; }

const std::vector<std::string>& LibraryFunctions() {
  static const std::vector<std::string> names = {
      "abs",    "atoi",  "free",   "isalpha", "isdigit", "isspace",
      "labs",   "malloc", "printf", "putchar", "puts",    "rand",
      "srand",  "strlen", "tolower", "toupper"};
  return names;
}

bool IsLibraryFunction(std::string_view name) {
  const auto& names = LibraryFunctions();
  return std::binary_search(names.begin(), names.end(), name);
}

std::string CallTarget(const Instruction& instr,
                       const std::string* resolved_callee) {
  if (resolved_callee) return *resolved_callee;
  if (instr.uops) {
    for (const MicroOp& op : *instr.uops) {
      if (op.kind == UopKind::kCall) return op.callee;
    }
  }
  return instr.operands.empty() ? std::string() : instr.operands.front();
}

FeatureCategory Categorize(const Instruction& instr,
                           const ArchProfile& profile,
                           const std::string* resolved_callee) {
  if (profile.IsCallMnemonic(instr.mnemonic) &&
      IsLibraryFunction(CallTarget(instr, resolved_callee))) {
    return FeatureCategory::kLibraryCall;
  }
  auto it = profile.category_table.find(instr.mnemonic);
  return it == profile.category_table.end() ? FeatureCategory::kGeneric
                                            : it->second;
}

Accesses EffectiveAccesses(const Instruction& instr,
                           const ArchProfile& profile) {
  Accesses out{instr.reads, instr.writes};
  if (profile.IsCallMnemonic(instr.mnemonic)) {
    for (const std::string& reg : profile.arg_registers) {
      if (std::find(out.reads.begin(), out.reads.end(), reg) ==
          out.reads.end()) {
        out.reads.push_back(reg);
      }
    }
    if (std::find(out.writes.begin(), out.writes.end(),
                  profile.return_register) == out.writes.end()) {
      out.writes.push_back(profile.return_register);
    }
  }
  return out;
}

}  // namespace binseeker
