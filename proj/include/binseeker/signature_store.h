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


// On-disk cache of semantic signatures.
//
// Layout under the store root:
//   sigs/<corpus-hash>/<function-id>.sig   rendered events, one per line
//   sigs/<corpus-hash>/index               "<id> <path> <arg_seed> <key> <status>"
// `key` fingerprints the function, every function it can reach through its
// call sites and every emulation setting, so an entry is reused only for an
// identical emulation. `status` is ok,
// truncated or failed.

#ifndef BINSEEKER_SIGNATURE_STORE_H_
#define BINSEEKER_SIGNATURE_STORE_H_

#include <map>
#include <optional>
#include <string>

#include "binseeker/emulator.h"
#include "binseeker/func_model.h"

namespace binseeker {

// $BINSEEKER_STORE, else ".binseeker-store" in the working directory.
std::string DefaultStoreRoot();

// Fingerprint of (f, its reachable callees, settings) as 16 hex digits.
std::string SignatureKey(const FunctionRecord& f, const CalleeIndex* callees,
                         const EmuConfig& cfg);

class SignatureStore {
 public:
  // Memory-only store.
  SignatureStore() = default;
  // Loads sigs/<corpus_hash>/index under root when it exists.
  SignatureStore(std::string root, std::string corpus_hash);

  std::optional<EmulationResult> Lookup(const FunctionRecord& f,
                                        const std::string& key) const;
  void Put(const FunctionRecord& f, const EmuConfig& cfg,
           const std::string& key, const EmulationResult& result);
  // Writes pending entries and the index. No-op for memory-only stores.
  void Flush();

  bool persistent() const { return !dir_.empty(); }
  int hits() const { return hits_; }
  int misses() const { return misses_; }

 private:
  struct Entry {
    std::string path;
    std::uint64_t arg_seed = 0;
    std::string key;
    std::string status;
    std::optional<Signature> signature;  // loaded lazily
    bool dirty = false;
  };

  std::string dir_;
  std::map<std::string, Entry> entries_;
  mutable int hits_ = 0;
  mutable int misses_ = 0;
};

}  // namespace binseeker

#endif  // BINSEEKER_SIGNATURE_STORE_H_
