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

#include <cmath>

#include "binseeker/experiments.h"
#include "test_support.h"

namespace binseeker {
namespace {

CrossValidationConfig QuickConfig() {
  CrossValidationConfig cfg;
  cfg.folds = 4;
  cfg.max_folds = 2;
  cfg.embed.iterations = 2;
  cfg.embed.embedding_size = 8;
  cfg.embed.epochs = 2;
  return cfg;
}

std::vector<FunctionRecord> SmallCorpus() {
  CorpusSpec spec;
  spec.families = 8;
  spec.variants_per_family = 4;
  return GenCorpus(spec);
}

TEST(CrossValidateTest, ShapeAndDeterminism) {
  const auto corpus = SmallCorpus();
  const CrossValidationResult a = CrossValidate(corpus, QuickConfig());
  ASSERT_EQ(a.folds.size(), 2u);
  double sum = 0.0;
  for (const FoldOutcome& f : a.folds) {
    EXPECT_EQ(f.trace.size(), 2u);
    ASSERT_FALSE(std::isnan(f.auc));
    EXPECT_GE(f.auc, 0.0);
    EXPECT_LE(f.auc, 1.0);
    sum += f.auc;
  }
  EXPECT_NEAR(a.mean_auc, sum / 2, 1e-15);
  EXPECT_GE(a.pooled_auc, 0.0);
  const CrossValidationResult b = CrossValidate(corpus, QuickConfig());
  EXPECT_EQ(a.mean_auc, b.mean_auc);
  EXPECT_EQ(a.pooled_auc, b.pooled_auc);
}

TEST(CrossValidateTest, SerialMatchesParallel) {
  const auto corpus = SmallCorpus();
  CrossValidationConfig cfg = QuickConfig();
  cfg.max_folds = 1;
  const double par = CrossValidate(corpus, cfg).mean_auc;
  cfg.policy = ExecPolicy::kSerial;
  EXPECT_EQ(CrossValidate(corpus, cfg).mean_auc, par);
}

TEST(AblationTest, DefaultVariantsAndTable) {
  const auto variants = DefaultAblationVariants();
  ASSERT_EQ(variants.size(), 3u);
  EXPECT_EQ(variants[0].graph, GraphVariant::kLsfg);
  EXPECT_EQ(variants[1].graph, GraphVariant::kCfgOnly);
  EXPECT_EQ(variants[2].graph, GraphVariant::kDfgOnly);
  const auto corpus = SmallCorpus();
  CrossValidationConfig cfg = QuickConfig();
  cfg.max_folds = 1;
  const auto rows = AblationRun(corpus, variants, cfg);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].result.mean_auc, CrossValidate(corpus, cfg).mean_auc);
  const std::string table = FormatAblation(rows);
  EXPECT_NE(table.find(GraphVariantName(GraphVariant::kCfgOnly)), std::string::npos);
  EXPECT_NE(table.find(GraphVariantName(GraphVariant::kDfgOnly)), std::string::npos);
  EXPECT_EQ(FormatAblation(AblationRun(corpus, variants, cfg)), table);
}

TEST(MnSweepTest, GridShape) {
  BenchmarkSpec spec;
  spec.distractor_families = 8;
  spec.query_families = 4;
  const Benchmark b = BuildBenchmark(spec);
  Model model;
  model.cfg.iterations = 2;
  model.cfg.embedding_size = 8;
  model.params = InitParams(model.cfg);
  const std::vector<int> ms = {5, 20, 44};
  const std::vector<int> ns = {1, 5, 10};
  SignatureStore store;
  const MnSweepResult r = MnSweep(b, model, ms, ns, EmuConfig{}, &store);
  // (5, 10) is skipped.
  EXPECT_EQ(r.cells.size(), 8u);
  EXPECT_EQ(r.two_stage_ranks.size(), 4u);
  EXPECT_EQ(r.learning_ranks.size(), 4u);
  for (const SweepCell& c : r.cells) {
    EXPECT_LE(c.n, c.m);
    EXPECT_EQ(c.queries, 4);
    EXPECT_LE(c.hits, c.queries);
  }
  // With M covering the whole corpus the rerank sees every clone.
  for (const SweepCell& c : r.cells) {
    if (c.m == 44 && c.n == 10) EXPECT_GE(c.hits, 3);
  }
  EXPECT_NE(FormatSweep(r).find("two_stage_mrr"), std::string::npos);
}

}  // namespace
}  // namespace binseeker
