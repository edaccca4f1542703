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


#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "binseeker/dataset.h"
#include "binseeker/error.h"
#include "binseeker/pipeline.h"
#include "binseeker/signature_store.h"
#include "test_support.h"

namespace binseeker {
namespace {

namespace fs = std::filesystem;
using testing::TestRng;

EmulationResult RandomResult(TestRng& rng) {
  EmulationResult r;
  const int n = rng.Int(0, 12);
  for (int k = 0; k < n; ++k) {
    switch (rng.Int(0, 3)) {
      case 0:
        r.signature.events.push_back(SignatureEvent::Input(rng.Int64(INT32_MIN, INT32_MAX)));
        break;
      case 1:
        r.signature.events.push_back(SignatureEvent::Output(rng.Int64(INT32_MIN, INT32_MAX)));
        break;
      case 2:
        r.signature.events.push_back(SignatureEvent::Compare(
            rng.Int(-50, 50), rng.Int(-50, 50),
            rng.Pick(std::vector<std::string>{"eq", "ne", "lt", "le", "gt", "ge"})));
        break;
      default:
        r.signature.events.push_back(SignatureEvent::LibCall(rng.Pick(LibraryFunctions())));
    }
  }
  r.signature.truncated = rng.Chance(0.2);
  r.failed = rng.Chance(0.1);
  if (r.failed) r.signature = Signature{};
  return r;
}

TEST(SignatureKeyTest, SensitiveToSettingsAndCallees) {
  CorpusSpec spec;
  spec.families = 12;
  const auto corpus = GenCorpus(spec);
  const CalleeIndex index(corpus);
  const EmuConfig cfg;
  const FunctionRecord* caller = nullptr;
  for (const FunctionRecord& f : corpus) {
    for (const auto& [i, c] : f.callees) {
      if (!IsLibraryFunction(c)) caller = &f;
    }
  }
  ASSERT_NE(caller, nullptr);
  const std::string key = SignatureKey(*caller, &index, cfg);
  EXPECT_EQ(key.size(), 16u);
  EXPECT_EQ(SignatureKey(*caller, &index, cfg), key);
  EmuConfig other = cfg;
  other.arg_seed = 2;
  EXPECT_NE(SignatureKey(*caller, &index, other), key);
  other = cfg;
  other.loop_threshold = 7;
  EXPECT_NE(SignatureKey(*caller, &index, other), key);
  EXPECT_NE(SignatureKey(*caller, nullptr, cfg), key);
  // Changing a callee body changes the caller's key.
  std::vector<FunctionRecord> edited = corpus;
  std::string callee;
  for (const auto& [i, c] : caller->callees) {
    if (!IsLibraryFunction(c)) callee = c;
  }
  for (FunctionRecord& f : edited) {
    if (f.id == callee) f.blocks[0].instructions[0].operands.push_back("x");
  }
  const CalleeIndex edited_index(edited);
  EXPECT_NE(SignatureKey(*caller, &edited_index, cfg), key);
}

TEST(SignatureStoreTest, MemoryOnly) {
  SignatureStore store;
  EXPECT_FALSE(store.persistent());
  FunctionRecord f;
  f.id = "f";
  EXPECT_FALSE(store.Lookup(f, "k"));
  EmulationResult r;
  r.signature.events = {SignatureEvent::Output(1)};
  store.Put(f, EmuConfig{}, "k", r);
  ASSERT_TRUE(store.Lookup(f, "k"));
  EXPECT_EQ(store.Lookup(f, "k")->signature, r.signature);
  EXPECT_FALSE(store.Lookup(f, "other"));
  EXPECT_EQ(store.hits(), 2);
  EXPECT_EQ(store.misses(), 2);
  store.Flush();
}

TEST(SignatureStoreTest, PersistsAcrossInstances) {
  testing::ScopedTempDir dir("store");
  TestRng rng(8);
  std::vector<FunctionRecord> fs_;
  std::vector<EmulationResult> rs;
  {
    SignatureStore store(dir.str(), "0123456789abcdef");
    EXPECT_TRUE(store.persistent());
    for (int i = 0; i < 50; ++i) {
      FunctionRecord f;
      f.id = i % 7 == 0 ? "odd/na%me " + std::to_string(i) : "f" + std::to_string(i);
      fs_.push_back(f);
      rs.push_back(RandomResult(rng));
      store.Put(f, EmuConfig{}, "key" + std::to_string(i), rs.back());
    }
    store.Flush();
  }
  EXPECT_TRUE(fs::exists(dir.path() / "sigs" / "0123456789abcdef" / "index"));
  SignatureStore again(dir.str(), "0123456789abcdef");
  for (int i = 0; i < 50; ++i) {
    const auto got = again.Lookup(fs_[i], "key" + std::to_string(i));
    ASSERT_TRUE(got) << i;
    EXPECT_EQ(got->failed, rs[i].failed);
    EXPECT_EQ(got->signature, rs[i].signature) << i;
  }
  SignatureStore other_hash(dir.str(), "fedcba9876543210");
  EXPECT_FALSE(other_hash.Lookup(fs_[1], "key1"));
}

TEST(SignatureStoreTest, DamagedFilesAreMisses) {
  testing::ScopedTempDir dir("damaged");
  FunctionRecord f;
  f.id = "f1";
  FunctionRecord g;
  g.id = "g1";
  EmulationResult r;
  r.signature.events = {SignatureEvent::Input(3)};
  {
    SignatureStore store(dir.str(), "h");
    store.Put(f, EmuConfig{}, "k", r);
    store.Put(g, EmuConfig{}, "k", r);
    store.Flush();
  }
  const fs::path d = dir.path() / "sigs" / "h";
  std::ofstream(d / "f1.sig") << "garbage line\n";
  fs::remove(d / "g1.sig");
  SignatureStore store(dir.str(), "h");
  EXPECT_FALSE(store.Lookup(f, "k"));
  EXPECT_FALSE(store.Lookup(g, "k"));
  EXPECT_EQ(store.misses(), 2);
}

TEST(SignatureStoreTest, EmulateCachedReusesEntries) {
  testing::ScopedTempDir dir("cached");
  CorpusSpec spec;
  spec.families = 5;
  const auto corpus = GenCorpus(spec);
  const CalleeIndex index(corpus);
  std::vector<const FunctionRecord*> ptrs;
  for (const FunctionRecord& f : corpus) ptrs.push_back(&f);
  const EmuConfig cfg;
  std::vector<EmulationResult> first;
  {
    SignatureStore store(dir.str(), CorpusHash(corpus));
    first = EmulateCached(ptrs, index, cfg, &store);
    EXPECT_EQ(store.hits(), 0);
    store.Flush();
  }
  SignatureStore store(dir.str(), CorpusHash(corpus));
  const auto second = EmulateCached(ptrs, index, cfg, &store);
  EXPECT_EQ(store.hits(), static_cast<int>(corpus.size()));
  ASSERT_EQ(second.size(), first.size());
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(second[i].signature, first[i].signature);
  }
}

TEST(SignatureStoreTest, DefaultRootFollowsEnvironment) {
  const char* saved = std::getenv("BINSEEKER_STORE");
  const std::string restore = saved ? saved : "";
  ::setenv("BINSEEKER_STORE", "/tmp/somewhere", 1);
  EXPECT_EQ(DefaultStoreRoot(), "/tmp/somewhere");
  ::unsetenv("BINSEEKER_STORE");
  EXPECT_EQ(DefaultStoreRoot(), ".binseeker-store");
  if (saved) ::setenv("BINSEEKER_STORE", restore.c_str(), 1);
}

}  // namespace
}  // namespace binseeker
