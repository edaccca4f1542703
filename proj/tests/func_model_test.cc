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

#include "binseeker/dataset.h"
#include "binseeker/error.h"
#include "binseeker/func_model.h"
#include "test_support.h"

namespace binseeker {
namespace {

constexpr const char* kTwoBlocks = R"({"functions":[{"arch":"alpha",
  "blocks":[{"id":"a","insns":[{"m":"mov","ops":["eax","1"],
  "reads":[],"writes":["eax"]}]},{"id":"b","insns":[{"m":"ret",
  "ops":[],"reads":["eax"],"writes":[]}]}],"cfg":[["a","b"]],
  "entry":"a","id":"f"}],"version":1})";

TEST(LocationTest, ParsesAndCanonicalizes) {
  auto reg = ParseLocation("eax");
  ASSERT_TRUE(reg);
  EXPECT_EQ(reg->kind, Location::Kind::kRegister);
  EXPECT_EQ(ParseLocation("[ebp-8]")->Canonical(), "ebp-8");
  EXPECT_EQ(ParseLocation("ebp+4")->Canonical(), "ebp+4");
  EXPECT_EQ(ParseLocation("[@4096]")->Canonical(), "@4096");
  EXPECT_EQ(ParseLocation("sp-0")->Canonical(), "sp+0");
  EXPECT_FALSE(ParseLocation(""));
  EXPECT_FALSE(ParseLocation("[eax"));
  EXPECT_FALSE(ParseLocation("@x"));
}

TEST(LocationTest, Immediates) {
  EXPECT_EQ(ParseImmediate("#-12"), -12);
  EXPECT_EQ(ParseImmediate("#0"), 0);
  EXPECT_FALSE(ParseImmediate("12"));
  EXPECT_FALSE(ParseImmediate("#"));
  EXPECT_TRUE(IsTemporary("t0"));
  EXPECT_FALSE(IsTemporary("t"));
  EXPECT_FALSE(IsTemporary("tx"));
}

TEST(FunctionFileTest, MinimalDocument) {
  const auto records = ParseFunctionFile(kTwoBlocks);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].blocks.size(), 2u);
  EXPECT_EQ(records[0].entry, "a");
  EXPECT_FALSE(records[0].IsExecutable());
}

TEST(FunctionFileTest, EmptyList) {
  EXPECT_EQ(SerializeFunctions({}), R"({"functions":[],"version":1})");
  EXPECT_TRUE(ParseFunctionFile(SerializeFunctions({})).empty());
}

TEST(FunctionFileTest, CanonicalizesWhitespaceAndKeyOrder) {
  const auto records = ParseFunctionFile(kTwoBlocks);
  const std::string canonical = SerializeFunctions(records);
  EXPECT_EQ(canonical.find('\n'), std::string::npos);
  EXPECT_EQ(SerializeFunctions(ParseFunctionFile(canonical)), canonical);
}

TEST(FunctionFileTest, MissingCfgEndpointIsRejected) {
  std::string doc = kTwoBlocks;
  doc.replace(doc.find(R"(["a","b"])"), 9, R"(["a","z"])");
  EXPECT_THROW(ParseFunctionFile(doc), InvariantViolation);
}

TEST(FunctionFileTest, SyntaxErrorsAreMalformed) {
  EXPECT_THROW(ParseFunctionFile("{"), MalformedDocument);
  EXPECT_THROW(ParseFunctionFile("[]"), MalformedDocument);
  EXPECT_THROW(ParseFunctionFile(R"({"functions":[{"id":1}],"version":1})"),
               MalformedDocument);
}

TEST(ValidateTest, StructuralRules) {
  FunctionRecord f = ParseFunctionFile(kTwoBlocks)[0];
  ValidateFunction(f);
  {
    FunctionRecord g = f;
    g.entry = "nope";
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.cfg_edges.push_back(g.cfg_edges[0]);
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.blocks[1].id = "a";
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.blocks[0].instructions[0].mnemonic.clear();
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.blocks[0].instructions[0].writes = {"r0"};
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.blocks[0].instructions[0].reads = {"ebp-08"};
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.arch = "gamma";
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
  {
    FunctionRecord g = f;
    g.blocks[0].instructions[0].uops = std::vector<MicroOp>{};
    EXPECT_THROW(ValidateFunction(g), InvariantViolation);
  }
}

TEST(ValidateTest, BranchTargetsMustBeSuccessors) {
  FunctionRecord f = ParseFunctionFile(kTwoBlocks)[0];
  f.blocks[0].instructions[0].uops =
      std::vector<MicroOp>{MicroOp::Const("eax", 1), MicroOp::Jump("a")};
  f.blocks[1].instructions[0].uops = std::vector<MicroOp>{MicroOp::Ret("eax")};
  EXPECT_THROW(ValidateFunction(f), InvariantViolation);
  (*f.blocks[0].instructions[0].uops)[1] = MicroOp::Jump("b");
  ValidateFunction(f);
  EXPECT_TRUE(f.IsExecutable());
}

TEST(ValidateTest, TerminatorMustEndBlock) {
  FunctionRecord f = ParseFunctionFile(kTwoBlocks)[0];
  f.blocks[0].instructions[0].uops =
      std::vector<MicroOp>{MicroOp::Ret(), MicroOp::Const("eax", 1)};
  f.blocks[1].instructions[0].uops = std::vector<MicroOp>{MicroOp::Ret("eax")};
  EXPECT_THROW(ValidateFunction(f), InvariantViolation);
}

TEST(RoundTripTest, RandomValidDocuments) {
  testing::TestRng rng(11);
  for (int i = 0; i < 1000; ++i) {
    std::vector<FunctionRecord> doc;
    const int n = rng.Int(1, 3);
    for (int k = 0; k < n; ++k) {
      doc.push_back(testing::RandomValidFunction(rng, 3 * i + k));
      ValidateFunction(doc.back());
    }
    const std::string text = SerializeFunctions(doc);
    const auto back = ParseFunctionFile(text);
    ASSERT_EQ(back, doc) << "case " << i;
    ASSERT_EQ(SerializeFunctions(back), text) << "case " << i;
  }
}

TEST(RoundTripTest, GeneratedCorpusIsByteStable) {
  CorpusSpec spec;
  spec.families = 40;
  spec.variants_per_family = 5;
  const auto corpus = GenCorpus(spec);
  ASSERT_EQ(corpus.size(), 200u);
  const std::string text = SerializeFunctions(corpus);
  const auto back = ParseFunctionFile(text);
  ASSERT_EQ(back.size(), 200u);
  EXPECT_EQ(SerializeFunctions(back), text);
}

TEST(CorpusHashTest, StableAndContentSensitive) {
  auto records = ParseFunctionFile(kTwoBlocks);
  const std::string h = CorpusHash(records);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(CorpusHash(records), h);
  records[0].blocks[0].instructions[0].operands[1] = "2";
  EXPECT_NE(CorpusHash(records), h);
}

TEST(FunctionRecordTest, Helpers) {
  const FunctionRecord f = ParseFunctionFile(kTwoBlocks)[0];
  EXPECT_EQ(f.BlockIndex("b"), 1);
  EXPECT_EQ(f.BlockIndex("q"), -1);
  EXPECT_EQ(f.InstructionCount(), 2);
}

}  // namespace
}  // namespace binseeker
