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

// Micro-op emulation of a function and its semantic signature.
//
// Machine model:
//  * values are int_width-bit two's complement, held zero-extended;
//  * the top-level stack starts at kStackStart; a callee's stack starts 4
//    bytes below the caller's stack pointer at the call, so the caller's
//    j-th outgoing stack argument (j >= 1) at [sp + 4(j-1)] is the callee's
//    [fp + 4j];
//  * on frame entry the frame and stack pointers both hold the stack start;
//  * unwritten stack/heap memory and registers read as 0; unwritten data
//    words read a fixed per-address constant (see DataWord);
//  * a callee starts from a copy of the caller's registers; on return every
//    caller register except the return register is restored.

#ifndef BINSEEKER_EMULATOR_H_
#define BINSEEKER_EMULATOR_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "binseeker/func_model.h"
#include "binseeker/profiles.h"

namespace binseeker {

inline constexpr std::uint64_t kStackStart = 0x7fff0000;
inline constexpr std::uint64_t kHeapStart = 0x10000000;
inline constexpr std::uint64_t kStackSpan = 1 << 20;
inline constexpr int kArgSequenceLength = 16;

struct ArgSpec {
  std::vector<std::string> register_args;  // profile order
  std::vector<std::int64_t> stack_args;    // ascending offsets above start

  std::size_t size() const { return register_args.size() + stack_args.size(); }
  friend bool operator==(const ArgSpec&, const ArgSpec&) = default;
};

// Register arguments: profile argument registers read before any write on
// some CFG path from the entry. Stack arguments: positive frame-pointer
// offsets, plus positive stack-pointer offsets when the function never
// writes the stack pointer. Uses the declared reads/writes lists.
ArgSpec RecognizeArgs(const FunctionRecord& f, const ArchProfile& profile);

struct EmuConfig {
  std::uint64_t arg_seed = 1;
  int loop_threshold = 32;
  int recursion_threshold = 2;
  std::int64_t step_budget = 100000;
  int int_width = 32;
  // Replaces the seeded argument sequence when non-empty.
  std::vector<std::int64_t> arg_values;

  void Validate() const;  // throws std::invalid_argument
};

// The argument sequence for cfg: arg_values, or kArgSequenceLength values
// drawn from a 64-bit generator seeded with arg_seed, reduced to int_width.
std::vector<std::int64_t> ArgumentSequence(const EmuConfig& cfg);

// Initial content of data word `address`.
std::int64_t DataWord(std::uint64_t address, int int_width);

struct SignatureEvent {
  enum class Kind { kInput, kOutput, kCompare, kLibCall };
  Kind kind = Kind::kInput;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::string text;  // compare opcode or library name

  static SignatureEvent Input(std::int64_t v);
  static SignatureEvent Output(std::int64_t v);
  static SignatureEvent Compare(std::int64_t a, std::int64_t b,
                                std::string_view opcode);
  static SignatureEvent LibCall(std::string_view name);

  // "I 3", "O 27", "CC 5 7 lt", "LC printf"
  std::string Render() const;
  friend bool operator==(const SignatureEvent&, const SignatureEvent&) =
      default;
};

struct Signature {
  std::vector<SignatureEvent> events;
  bool truncated = false;  // the step budget ran out

  friend bool operator==(const Signature&, const Signature&) = default;
};

// One rendered event per line, each terminated by '\n'.
std::string SerializeSignature(const Signature& sig);
// Throws MalformedSignature. The truncation flag is not part of the text.
Signature ParseSignature(std::string_view content);

// Functions reachable as callees, by id. Records are borrowed.
class CalleeIndex {
 public:
  CalleeIndex() = default;
  explicit CalleeIndex(std::span<const FunctionRecord> records) {
    Add(records);
  }
  void Add(std::span<const FunctionRecord> records);
  void Add(const FunctionRecord& record);
  const FunctionRecord* Find(std::string_view id) const;

 private:
  std::unordered_map<std::string, const FunctionRecord*> by_id_;
};

struct EmulationResult {
  Signature signature;
  std::int64_t steps = 0;
  std::vector<std::string> warnings;
  // Set by EmulateAll when the function could not be emulated at all.
  bool failed = false;
};

// Throws MissingMicroOps when f is not executable. Callees that are
// missing, not executable, named "main", or already active
// 1 + recursion_threshold times are skipped and leave 0 in the return
// register.
EmulationResult Emulate(const FunctionRecord& f, const CalleeIndex* callees,
                        const EmuConfig& cfg, const ArchProfile& profile);
EmulationResult Emulate(const FunctionRecord& f, const CalleeIndex* callees,
                        const EmuConfig& cfg);

// |A & B| / |A | B| over occurrence-indexed multisets of rendered events.
// Two empty signatures score 1.
double Jaccard(const Signature& a, const Signature& b);

}  // namespace binseeker

#endif  // BINSEEKER_EMULATOR_H_
