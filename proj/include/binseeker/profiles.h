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

#ifndef BINSEEKER_PROFILES_H_
#define BINSEEKER_PROFILES_H_

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "binseeker/func_model.h"

namespace binseeker {

// Basic-block feature categories, in feature-vector order.
enum class FeatureCategory {
  kStack = 0,
  kArithmetic,
  kLogical,
  kComparative,
  kLibraryCall,
  kUnconditionalJump,
  kConditionalJump,
  kGeneric,
};
inline constexpr int kNumFeatureCategories = 8;

std::string_view CategoryName(FeatureCategory category);
std::optional<FeatureCategory> ParseCategory(std::string_view name);

// Calling convention and instruction-class table of one dialect.
//
// `frame_pointer` holds the stack start address for the whole activation;
// arguments passed on the stack live at positive offsets from it.
// `stack_pointer` is the push/pop register.
struct ArchProfile {
  std::string name;
  std::vector<std::string> registers;
  std::map<std::string, FeatureCategory> category_table;
  std::vector<std::string> arg_registers;
  std::string stack_pointer;
  std::string frame_pointer;
  std::string return_register;
  std::vector<std::string> call_mnemonics;

  bool IsRegister(std::string_view name) const;
  bool IsCallMnemonic(std::string_view mnemonic) const;

  friend bool operator==(const ArchProfile&, const ArchProfile&) = default;
};

// Built-in dialects: "alpha" (x86-like, three register arguments) and
// "beta" (ARM-like mnemonics, one register argument, rest on the stack).
const ArchProfile& AlphaProfile();
const ArchProfile& BetaProfile();
// Throws UnknownArchitecture.
const ArchProfile& ProfileFor(std::string_view arch);
std::vector<std::string> BuiltinArchitectures();

ArchProfile ParseProfile(std::string_view content);
ArchProfile ReadProfile(const std::string& path);
std::string SerializeProfile(const ArchProfile& profile);

// C standard library functions the emulator models and the feature
// extractor counts as library calls.
bool IsLibraryFunction(std::string_view name);
const std::vector<std::string>& LibraryFunctions();

// Call target named by the instruction: the callee map entry when given,
// otherwise the call micro-op's callee, otherwise the first operand.
std::string CallTarget(const Instruction& instr,
                       const std::string* resolved_callee = nullptr);

// Unknown mnemonics fall into the generic category. Call instructions whose
// target is a library function count as library calls.
FeatureCategory Categorize(const Instruction& instr,
                           const ArchProfile& profile,
                           const std::string* resolved_callee = nullptr);

// Read/write sets used by define-use analysis and argument recognition.
// Call instructions additionally read every argument register and write
// the return register.
struct Accesses {
  std::vector<std::string> reads;
  std::vector<std::string> writes;
};
Accesses EffectiveAccesses(const Instruction& instr,
                           const ArchProfile& profile);

}  // namespace binseeker

#endif  // BINSEEKER_PROFILES_H_
