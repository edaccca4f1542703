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


// binseeker: corpus generation, training, two-stage search and evaluation.

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "binseeker/dataset.h"
#include "binseeker/embed.h"
#include "binseeker/error.h"
#include "binseeker/eval.h"
#include "binseeker/experiments.h"
#include "binseeker/kernels.h"
#include "binseeker/lsfg.h"
#include "binseeker/pipeline.h"
#include "binseeker/signature_store.h"

namespace fs = std::filesystem;
using namespace binseeker;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitLookup = 4;

// Failure with a specific exit code.
struct ExitError {
  int code;
  std::string message;
};

[[noreturn]] void Usage(const std::string& m) { throw ExitError{kExitUsage, m}; }
[[noreturn]] void DataError(const std::string& m) { throw ExitError{kExitData, m}; }

std::string ReadText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) DataError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const std::string& path, const std::string& content) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) DataError("cannot write " + path);
  out << content;
}

void MakeDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) DataError("cannot create " + dir + ": " + ec.message());
}

std::string Plain(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general);
  return std::string(buf, r.ptr);
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> IntList(const std::string& s, const char* flag) {
  std::vector<int> out;
  for (const std::string& item : SplitList(s)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      Usage(std::string("bad integer list for ") + flag + ": " + s);
    }
  }
  if (out.empty()) Usage(std::string(flag) + " is empty");
  return out;
}

// Truth file lines: "T <query-id> <clone-id>".
std::map<std::string, std::string> ReadTruth(const std::string& path) {
  std::map<std::string, std::string> truth;
  std::istringstream in(ReadText(path));
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::istringstream ls(line);
    std::string tag, q, c, extra;
    if (!(ls >> tag)) continue;
    if (tag != "T" || !(ls >> q >> c) || (ls >> extra)) {
      DataError(path + ":" + std::to_string(no) + ": expected 'T <query> <clone>'");
    }
    truth[q] = c;
  }
  return truth;
}

std::string FormatTruth(const std::map<std::string, std::string>& truth) {
  std::string out;
  for (const auto& [q, c] : truth) out += "T " + q + " " + c + "\n";
  return out;
}

// Ranks file lines: one rank per line, 0 meaning not retrieved.
std::vector<QueryRank> ReadRanks(const std::string& path) {
  std::vector<QueryRank> ranks;
  std::istringstream in(ReadText(path));
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t used = 0;
      const int r = std::stoi(tok, &used);
      if (used != tok.size() || r < 0) throw std::invalid_argument(tok);
      ranks.push_back(r);
    } catch (const std::exception&) {
      DataError(path + ": bad rank '" + tok + "'");
    }
  }
  return ranks;
}

// Ranks of the true clone in stored search results.
std::vector<QueryRank> RanksFromResults(const std::vector<std::string>& files,
                                        const std::string& truth_path) {
  const auto truth = ReadTruth(truth_path);
  std::vector<QueryRank> ranks;
  for (const std::string& path : files) {
    const ResultFile r = ParseResults(ReadText(path));
    const auto q = r.header.find("query");
    if (q == r.header.end()) DataError(path + ": no '# query' header");
    const auto t = truth.find(q->second);
    if (t == truth.end()) DataError(path + ": query " + q->second + " not in truth file");
    ranks.push_back(RankOf(r.results, t->second));
  }
  return ranks;
}

void EchoSpec(const std::map<std::string, std::string>& kv) {
  std::cout << FormatKeyValues(kv);
}

std::string EmbedEcho(const EmbedConfig& c) {
  return FormatKeyValues({{"iterations", std::to_string(c.iterations)},
                          {"embedding_size", std::to_string(c.embedding_size)},
                          {"depth", std::to_string(c.depth)},
                          {"learning_rate", Plain(c.learning_rate)},
                          {"epochs", std::to_string(c.epochs)},
                          {"batch_size", std::to_string(c.batch_size)},
                          {"seed", std::to_string(c.seed)}});
}

void AddEmbedFlags(CLI::App* cmd, EmbedConfig* c) {
  cmd->add_option("--epochs", c->epochs, "training epochs")->capture_default_str();
  cmd->add_option("--lr", c->learning_rate, "learning rate")->capture_default_str();
  cmd->add_option("--depth", c->depth, "embedding depth n")->capture_default_str();
  cmd->add_option("--size", c->embedding_size, "embedding size p")->capture_default_str();
  cmd->add_option("--iters", c->iterations, "propagation rounds T")->capture_default_str();
  cmd->add_option("--batch", c->batch_size, "mini-batch size")->capture_default_str();
  cmd->add_option("--seed", c->seed, "initialization and shuffle seed")->capture_default_str();
}

void AddEmuFlags(CLI::App* cmd, EmuConfig* c) {
  cmd->add_option("--arg-seed", c->arg_seed, "argument sequence seed")->capture_default_str();
  cmd->add_option("--loop-threshold", c->loop_threshold)->capture_default_str();
  cmd->add_option("--recursion-threshold", c->recursion_threshold)->capture_default_str();
  cmd->add_option("--step-budget", c->step_budget)->capture_default_str();
  cmd->add_option("--int-width", c->int_width)->capture_default_str();
}

std::vector<LabeledPair> BindPairs(const std::vector<PairLine>& lines,
                                   const std::map<std::string, const Lsfg*>& graphs,
                                   const std::string& what) {
  std::vector<LabeledPair> out;
  for (const PairLine& p : lines) {
    const auto a = graphs.find(p.first);
    const auto b = graphs.find(p.second);
    if (a == graphs.end() || b == graphs.end()) {
      DataError(what + ": pair references unknown function " +
                (a == graphs.end() ? p.first : p.second));
    }
    out.push_back({a->second, b->second, p.label});
  }
  return out;
}

struct GraphSet {
  std::vector<FunctionRecord> records;
  std::vector<Lsfg> graphs;
  std::map<std::string, const Lsfg*> by_id;
};

GraphSet LoadGraphs(const std::string& corpus_path) {
  GraphSet g;
  g.records = ParseFunctionFile(ReadText(corpus_path));
  g.graphs = BuildLsfgs(g.records);
  for (std::size_t i = 0; i < g.records.size(); ++i) {
    g.by_id[g.records[i].id] = &g.graphs[i];
  }
  return g;
}

std::string SiblingCorpus(const std::string& pairs_path) {
  return (fs::path(pairs_path).parent_path() / "corpus.json").string();
}

bool ParseVariant(const std::string& s, AblationVariant* v) {
  const std::size_t slash = s.find('/');
  const std::string g = s.substr(0, slash);
  const std::string f = slash == std::string::npos ? "all" : s.substr(slash + 1);
  bool ok = false;
  for (GraphVariant gv : {GraphVariant::kLsfg, GraphVariant::kCfgOnly,
                          GraphVariant::kDfgOnly}) {
    if (g == GraphVariantName(gv)) { v->graph = gv; ok = true; }
  }
  if (!ok) return false;
  for (FeatureSet fv : {FeatureSet::kAll, FeatureSet::kZero,
                        FeatureSet::kNoGeneric, FeatureSet::kControlOnly}) {
    if (f == FeatureSetName(fv)) { v->features = fv; return true; }
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-dialect binary function clone search"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap on worker threads (0 = all)");

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "generate a clone corpus and pairs");
  CorpusSpec corpus_spec;
  std::string gen_out = "data";
  std::string gen_dialects = "alpha,beta";
  gen->add_option("--families", corpus_spec.families)->capture_default_str();
  gen->add_option("--variants", corpus_spec.variants_per_family)->capture_default_str();
  gen->add_option("--seed", corpus_spec.seed)->capture_default_str();
  gen->add_option("--levels", corpus_spec.transform_levels)->capture_default_str();
  gen->add_option("--dialects", gen_dialects)->capture_default_str();
  gen->add_option("--out", gen_out, "output directory")->capture_default_str();

  // gen-benchmark
  auto* genb = app.add_subcommand("gen-benchmark", "generate a planted-clone search benchmark");
  BenchmarkSpec bench_spec;
  std::string genb_out = "bench";
  genb->add_option("--distractors", bench_spec.distractor_families)->capture_default_str();
  genb->add_option("--queries", bench_spec.query_families)->capture_default_str();
  genb->add_option("--variants", bench_spec.variants_per_family)->capture_default_str();
  genb->add_option("--query-variant", bench_spec.query_variant)->capture_default_str();
  genb->add_option("--clone-variant", bench_spec.clone_variant)->capture_default_str();
  genb->add_option("--seed", bench_spec.seed)->capture_default_str();
  genb->add_option("--out", genb_out, "output directory")->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "train the embedding network");
  EmbedConfig train_cfg;
  std::string train_pairs, train_corpus, train_valid, train_out = "model.txt",
              train_trace;
  train->add_option("--pairs", train_pairs, "training pairs file")->required();
  train->add_option("--corpus", train_corpus, "corpus (default: corpus.json next to --pairs)");
  train->add_option("--valid-pairs", train_valid, "validation pairs file");
  train->add_option("--out", train_out, "model file")->capture_default_str();
  train->add_option("--trace", train_trace, "per-epoch trace file (default: <out>.trace)");
  AddEmbedFlags(train, &train_cfg);

  // search
  auto* search = app.add_subcommand("search", "two-stage clone search");
  PipelineConfig search_cfg;
  std::string search_model, search_corpus, search_queries, search_query,
      search_out, search_timing;
  bool no_store = false;
  search->add_option("--model", search_model)->required();
  search->add_option("--corpus", search_corpus)->required();
  search->add_option("--query", search_query, "query function id")->required();
  search->add_option("--queries", search_queries, "file holding the query function");
  search->add_option("--m", search_cfg.m, "learning-stage candidates")->capture_default_str();
  search->add_option("--n", search_cfg.n, "final results")->capture_default_str();
  search->add_option("--out", search_out, "result file (default: stdout)");
  search->add_option("--timing", search_timing, "timing report file");
  search->add_flag("--no-store", no_store, "do not read or write the signature store");
  AddEmuFlags(search, &search_cfg.emu);

  // eval
  auto* eval = app.add_subcommand("eval", "metrics and experiments");
  eval->require_subcommand(1);
  std::vector<std::string> ev_results;
  std::string ev_truth, ev_ranks, ev_ks = "1,5,10,20";
  auto* topk = eval->add_subcommand("topk", "top-k hits of the true clone");
  auto* mrr = eval->add_subcommand("mrr", "mean reciprocal rank of the true clone");
  for (auto* cmd : {topk, mrr}) {
    cmd->add_option("--results", ev_results, "search result files");
    cmd->add_option("--truth", ev_truth, "truth file");
    cmd->add_option("--ranks", ev_ranks, "file of ranks, 0 = not retrieved");
  }
  topk->add_option("--k", ev_ks, "comma-separated k values")->capture_default_str();

  auto* auc = eval->add_subcommand("auc", "ROC AUC of a model on labeled pairs");
  std::string auc_model, auc_corpus, auc_pairs, auc_roc;
  auc->add_option("--model", auc_model)->required();
  auc->add_option("--pairs", auc_pairs)->required();
  auc->add_option("--corpus", auc_corpus, "corpus (default: corpus.json next to --pairs)");
  auc->add_option("--roc", auc_roc, "write ROC points to this file");

  auto* abl = eval->add_subcommand("ablation", "cross-validated AUC per graph/feature variant");
  CrossValidationConfig abl_cfg;
  abl_cfg.embed.epochs = 50;
  std::string abl_corpus, abl_variants = "lsfg,cfg-only,dfg-only", abl_out;
  abl->add_option("--corpus", abl_corpus)->required();
  abl->add_option("--variants", abl_variants,
                  "comma-separated graph[/features] variants")->capture_default_str();
  abl->add_option("--folds", abl_cfg.folds)->capture_default_str();
  abl->add_option("--max-folds", abl_cfg.max_folds, "evaluate only the first folds")
      ->capture_default_str();
  abl->add_option("--fold-seed", abl_cfg.fold_seed)->capture_default_str();
  abl->add_option("--pair-seed", abl_cfg.pair_seed)->capture_default_str();
  abl->add_option("--out", abl_out, "also write the table here");
  AddEmbedFlags(abl, &abl_cfg.embed);

  auto* sweep = eval->add_subcommand("mn-sweep", "success grid over M and N");
  std::string sw_model, sw_bench, sw_ms = "50,100,200", sw_ns = "1,5,10,25", sw_out;
  EmuConfig sw_emu;
  bool sw_no_store = false;
  sweep->add_option("--model", sw_model)->required();
  sweep->add_option("--benchmark", sw_bench, "directory written by gen-benchmark")->required();
  sweep->add_option("--m", sw_ms)->capture_default_str();
  sweep->add_option("--n", sw_ns)->capture_default_str();
  sweep->add_option("--out", sw_out, "also write the grid here");
  sweep->add_flag("--no-store", sw_no_store);
  AddEmuFlags(sweep, &sw_emu);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    SetThreadCount(threads);

    if (gen->parsed()) {
      corpus_spec.dialects = SplitList(gen_dialects);
      if (corpus_spec.families < 2) Usage("--families must be >= 2 to form pairs");
      try {
        corpus_spec.Validate();
      } catch (const std::invalid_argument& e) {
        Usage(e.what());
      } catch (const UnknownArchitecture& e) {
        Usage(e.what());
      }
      const auto corpus = GenCorpus(corpus_spec);
      const auto pairs = MakePairs(corpus, corpus_spec.seed);
      MakeDir(gen_out);
      WriteFunctionFile((fs::path(gen_out) / "corpus.json").string(), corpus);
      WriteText((fs::path(gen_out) / "pairs.txt").string(),
                SerializePairs(ToPairLines(corpus, pairs)));
      EchoSpec({{"families", std::to_string(corpus_spec.families)},
                {"variants", std::to_string(corpus_spec.variants_per_family)},
                {"seed", std::to_string(corpus_spec.seed)},
                {"levels", std::to_string(corpus_spec.transform_levels)},
                {"dialects", gen_dialects},
                {"functions", std::to_string(corpus.size())},
                {"pairs", std::to_string(pairs.size())},
                {"out", gen_out}});
      return 0;
    }

    if (genb->parsed()) {
      Benchmark b;
      try {
        b = BuildBenchmark(bench_spec);
      } catch (const std::invalid_argument& e) {
        Usage(e.what());
      }
      MakeDir(genb_out);
      WriteFunctionFile((fs::path(genb_out) / "corpus.json").string(), b.corpus);
      WriteFunctionFile((fs::path(genb_out) / "queries.json").string(), b.queries);
      WriteText((fs::path(genb_out) / "truth.txt").string(), FormatTruth(b.clone_of));
      EchoSpec({{"distractors", std::to_string(bench_spec.distractor_families)},
                {"queries", std::to_string(b.queries.size())},
                {"corpus_functions", std::to_string(b.corpus.size())},
                {"seed", std::to_string(bench_spec.seed)},
                {"out", genb_out}});
      return 0;
    }

    if (train->parsed()) {
      try {
        train_cfg.Validate();
      } catch (const std::invalid_argument& e) {
        Usage(e.what());
      }
      std::cout << EmbedEcho(train_cfg);
      const GraphSet g = LoadGraphs(train_corpus.empty() ? SiblingCorpus(train_pairs)
                                                         : train_corpus);
      const auto tr = BindPairs(ParsePairs(ReadText(train_pairs)), g.by_id, train_pairs);
      std::vector<LabeledPair> va;
      if (!train_valid.empty()) {
        va = BindPairs(ParsePairs(ReadText(train_valid)), g.by_id, train_valid);
      }
      const TrainResult r = Train(tr, va, train_cfg);
      SaveModel(train_out, train_cfg, r.params);
      WriteText(train_trace.empty() ? train_out + ".trace" : train_trace,
                FormatTrace(r.trace));
      if (!r.trace.empty()) {
        std::cout << "final_train_loss " << FormatScore(r.trace.back().train_loss) << "\n";
      }
      return 0;
    }

    if (search->parsed()) {
      const Model model = LoadModel(search_model);
      const std::vector<FunctionRecord> corpus =
          ParseFunctionFile(ReadText(search_corpus));
      std::vector<FunctionRecord> pool_records;
      if (!search_queries.empty()) {
        pool_records = ParseFunctionFile(ReadText(search_queries));
      }
      const std::vector<FunctionRecord>& pool = pool_records;
      const FunctionRecord* query = nullptr;
      for (const std::vector<FunctionRecord>* set : {&pool, &corpus}) {
        for (const FunctionRecord& f : *set) {
          if (query == nullptr && f.id == search_query) query = &f;
        }
      }
      if (query == nullptr) {
        throw ExitError{kExitLookup, "unknown query id " + search_query};
      }
      try {
        search_cfg.emu.Validate();
      } catch (const std::invalid_argument& e) {
        Usage(e.what());
      }
      SignatureStore store = no_store
          ? SignatureStore()
          : SignatureStore(DefaultStoreRoot(), CorpusHash(corpus));
      SearchResult r;
      try {
        r = Search(*query, corpus, model, search_cfg, &store, pool);
      } catch (const MTooLarge& e) {
        Usage(e.what());
      } catch (const std::invalid_argument& e) {
        Usage(e.what());
      }
      store.Flush();
      for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
      const std::string text = FormatResults(
          {{"query", query->id},
           {"m", std::to_string(search_cfg.m)},
           {"n", std::to_string(search_cfg.n)},
           {"arg_seed", std::to_string(search_cfg.emu.arg_seed)},
           {"model", search_model},
           {"corpus", search_corpus},
           {"corpus_hash", CorpusHash(corpus)}},
          r.results);
      if (search_out.empty()) {
        std::cout << text;
      } else {
        WriteText(search_out, text);
      }
      const std::string timing = FormatTiming(r.timing);
      if (!search_timing.empty()) {
        WriteText(search_timing, timing);
      } else {
        std::cerr << timing;
      }
      return 0;
    }

    if (topk->parsed() || mrr->parsed()) {
      std::vector<QueryRank> ranks;
      if (!ev_ranks.empty()) {
        ranks = ReadRanks(ev_ranks);
      } else if (!ev_results.empty() && !ev_truth.empty()) {
        ranks = RanksFromResults(ev_results, ev_truth);
      } else {
        DataError("need --ranks, or --results with --truth");
      }
      if (ranks.empty()) DataError("no ranks");
      if (topk->parsed()) {
        const std::vector<int> ks = IntList(ev_ks, "--k");
        std::cout << FormatTopkTable(ranks, ks);
      } else {
        std::cout << "mrr " << FormatScore(Mrr(ranks)) << "\n";
      }
      return 0;
    }

    if (auc->parsed()) {
      const Model model = LoadModel(auc_model);
      const GraphSet g = LoadGraphs(auc_corpus.empty() ? SiblingCorpus(auc_pairs)
                                                       : auc_corpus);
      const auto pairs = BindPairs(ParsePairs(ReadText(auc_pairs)), g.by_id, auc_pairs);
      const auto sims = PairSimilarities(pairs, model.params, model.cfg);
      std::vector<ScoredPair> scored;
      for (std::size_t k = 0; k < sims.size(); ++k) scored.push_back({sims[k], pairs[k].label});
      RocResult roc;
      try {
        roc = RocAuc(scored);
      } catch (const SingleClassInput& e) {
        DataError(e.what());
      }
      std::cout << "pairs " << scored.size() << "\nauc " << FormatScore(roc.auc) << "\n";
      if (!auc_roc.empty()) {
        std::string out = "threshold fpr tpr\n";
        for (const RocPoint& p : roc.points) {
          out += FormatScore(p.threshold) + " " + FormatScore(p.fpr) + " " +
                 FormatScore(p.tpr) + "\n";
        }
        WriteText(auc_roc, out);
      }
      return 0;
    }

    if (abl->parsed()) {
      try {
        abl_cfg.embed.Validate();
      } catch (const std::invalid_argument& e) {
        Usage(e.what());
      }
      std::vector<AblationVariant> variants;
      for (const std::string& s : SplitList(abl_variants)) {
        AblationVariant v;
        if (!ParseVariant(s, &v)) Usage("unknown variant " + s);
        variants.push_back(v);
      }
      const auto corpus = ParseFunctionFile(ReadText(abl_corpus));
      std::cout << EmbedEcho(abl_cfg.embed);
      const auto rows = AblationRun(corpus, variants, abl_cfg);
      const std::string table = FormatAblation(rows);
      std::cout << table;
      if (!abl_out.empty()) WriteText(abl_out, table);
      return 0;
    }

    if (sweep->parsed()) {
      const Model model = LoadModel(sw_model);
      Benchmark b;
      b.corpus = ParseFunctionFile(ReadText((fs::path(sw_bench) / "corpus.json").string()));
      b.queries = ParseFunctionFile(ReadText((fs::path(sw_bench) / "queries.json").string()));
      b.clone_of = ReadTruth((fs::path(sw_bench) / "truth.txt").string());
      for (const FunctionRecord& q : b.queries) {
        if (!b.clone_of.count(q.id)) DataError("query " + q.id + " has no truth entry");
      }
      const std::vector<int> ms = IntList(sw_ms, "--m");
      const std::vector<int> ns = IntList(sw_ns, "--n");
      for (int m : ms) {
        if (m < 1 || m > static_cast<int>(b.corpus.size())) {
          Usage("--m values must lie in [1, corpus size]");
        }
      }
      for (int n : ns) {
        if (n < 1) Usage("--n values must be >= 1");
      }
      SignatureStore store = sw_no_store
          ? SignatureStore()
          : SignatureStore(DefaultStoreRoot(), CorpusHash(b.corpus));
      const MnSweepResult r = MnSweep(b, model, ms, ns, sw_emu, &store);
      store.Flush();
      const std::string grid = FormatSweep(r);
      std::cout << grid;
      if (!sw_out.empty()) WriteText(sw_out, grid);
      return 0;
    }
  } catch (const ExitError& e) {
    std::cerr << "binseeker: " << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << "binseeker: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    std::cerr << "binseeker: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "binseeker: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
