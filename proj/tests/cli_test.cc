#include "cli.h"

#include <atomic>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "amr/harness.h"
#include "amr/penman.h"
#include "amr/simplified.h"
#include "amr/synthetic.h"
#include "amr/text.h"

namespace amr::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = Run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("amrseq-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::create_directories(dir_);
    examples_ = MakeSyntheticCorpus({60, 4, "t"});
    WriteFile(P("corpus.amr"), SyntheticAmrDocument(examples_));
    WriteFile(P("align.jsonl"), SyntheticAlignmentsJsonl(examples_));
    std::string ext;
    for (const std::string &s : SyntheticSentences(2000, 9)) ext += s + "\n";
    WriteFile(P("external.txt"), ext);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string P(const std::string &name) const { return (dir_ / name).string(); }

  std::vector<std::string> Sentences() const {
    std::vector<std::string> out;
    for (const SyntheticExample &ex : examples_) out.push_back(JoinTokens(ex.sentence));
    return out;
  }

  Result Preprocess(const std::string &prefix, std::vector<std::string> extra = {}) {
    std::vector<std::string> args = {"preprocess", "--amr", P("corpus.amr"),
                                     "--alignments", P("align.jsonl"), "--out", P(prefix)};
    args.insert(args.end(), extra.begin(), extra.end());
    return Call(args);
  }

  fs::path dir_;
  std::vector<SyntheticExample> examples_;
};

TEST_F(CliTest, HelpAndUsageCodes) {
  EXPECT_EQ(Call({"--help"}).code, kOk);
  Result train_help = Call({"train", "--help"});
  EXPECT_EQ(train_help.code, kOk);
  EXPECT_NE(train_help.out.find("--epochs-finetune"), std::string::npos);
  EXPECT_EQ(Call({}).code, kUsage);
  EXPECT_EQ(Call({"frobnicate"}).code, kUsage);
  EXPECT_EQ(Call({"smatch"}).code, kUsage);
  EXPECT_EQ(Call({"preprocess", "--amr", P("corpus.amr"), "--out", P("x"),
                  "--mode", "sideways"})
                .code,
            kUsage);
}

TEST_F(CliTest, DataErrorsNameFileAndLine) {
  WriteFile(P("bad.amr"), "# ::id a\n(w / want-01)\n\n# ::id b\n(a / b :c (d / e)\n");
  Result r = Call({"smatch", P("bad.amr"), P("bad.amr")});
  EXPECT_EQ(r.code, kDataError);
  EXPECT_NE(r.err.find("bad.amr:5:"), std::string::npos) << r.err;

  Result missing = Call({"bleu", P("nope.txt"), P("nope.txt")});
  EXPECT_EQ(missing.code, kDataError);
  EXPECT_NE(missing.err.find("nope.txt"), std::string::npos);

  WriteFile(P("bad.jsonl"), "{\"id\":\"t.1\",\"alignments\":[]}\n{not json\n");
  Result align = Preprocess("p", {"--alignments", P("bad.jsonl")});
  EXPECT_EQ(align.code, kDataError);
  EXPECT_NE(align.err.find("bad.jsonl:2:"), std::string::npos) << align.err;
}

TEST_F(CliTest, SmatchOfFileWithItself) {
  Result r = Call({"smatch", P("corpus.amr"), P("corpus.amr")});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("F1 1.000"), std::string::npos) << r.out;
  Result j = Call({"smatch", P("corpus.amr"), P("corpus.amr"), "--json"});
  EXPECT_DOUBLE_EQ(nlohmann::json::parse(j.out)["f1"].get<double>(), 1.0);
}

TEST_F(CliTest, BleuSingleLineFormat) {
  WriteFile(P("hyp.txt"), "a b c d\n");
  WriteFile(P("ref.txt"), "a b c d e\n");
  Result r = Call({"bleu", P("hyp.txt"), P("ref.txt")});
  EXPECT_EQ(r.out,
            "BLEU = 77.88, 100.0/100.0/100.0/100.0 (BP=0.779, ratio=0.800, "
            "hyp_len=4, ref_len=5)\n");
}

TEST_F(CliTest, FourAblationStagesDiffer) {
  ASSERT_EQ(Preprocess("a", {"--no-scope", "--no-ne-clusters", "--no-anon"}).code, kOk);
  ASSERT_EQ(Preprocess("b", {"--no-scope", "--no-ne-clusters"}).code, kOk);
  ASSERT_EQ(Preprocess("c", {"--no-scope"}).code, kOk);
  ASSERT_EQ(Preprocess("d").code, kOk);
  std::vector<std::string> src;
  for (const char *s : {"a", "b", "c", "d"}) src.push_back(ReadFile(P(std::string(s) + ".src")));
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = i + 1; j < src.size(); ++j) EXPECT_NE(src[i], src[j]);
  }
  // Stage (a) is plain simplification: no brackets, no entity tokens, and
  // the sentence side is untouched.
  EXPECT_EQ(src[0].find("( "), std::string::npos);
  EXPECT_EQ(src[0].find("_0"), std::string::npos);
  std::string sentences;
  for (const std::string &s : Sentences()) sentences += s + "\n";
  EXPECT_EQ(ReadFile(P("a.tgt")), sentences);
  EXPECT_NE(src[1].find("country_"), std::string::npos);
  EXPECT_EQ(src[2].find("country_"), std::string::npos);
  EXPECT_NE(src[2].find("location_"), std::string::npos);
  EXPECT_NE(src[3].find("( "), std::string::npos);
}

TEST_F(CliTest, PreprocessThenDeanonymizeRestoresSentences) {
  ASSERT_EQ(Preprocess("g").code, kOk);
  Result r = Call({"deanonymize", "--input", P("g.tgt"), "--records",
                   P("g.records.jsonl"), "--table", P("g.table.json")});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::string want;
  for (const std::string &s : Sentences()) want += s + "\n";
  EXPECT_EQ(r.out, want);
}

TEST_F(CliTest, PreprocessThenDelinearizeRestoresGraphs) {
  ASSERT_EQ(Preprocess("p", {"--mode", "parsing", "--scope-style", "non-leaf"}).code, kOk);
  Result r = Call({"delinearize", "--input", P("p.tgt"), "--records",
                   P("p.records.jsonl"), "--scope-style", "non-leaf"});
  ASSERT_EQ(r.code, kOk) << r.err;
  std::vector<AmrEntry> back = ParsePenmanDocument(r.out);
  ASSERT_EQ(back.size(), examples_.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(SimplifyGraph(back[i].graph, SimplifyMode::kParsing), examples_[i].tree)
        << examples_[i].id;
    EXPECT_EQ(back[i].Field("id"), examples_[i].id);
  }
}

TEST_F(CliTest, CommandsAreIdempotent) {
  ASSERT_EQ(Preprocess("x", {"--order", "random", "--seed", "5"}).code, kOk);
  ASSERT_EQ(Preprocess("y", {"--order", "random", "--seed", "5"}).code, kOk);
  for (const char *ext : {".src", ".tgt", ".records.jsonl", ".table.json"}) {
    EXPECT_EQ(ReadFile(P(std::string("x") + ext)), ReadFile(P(std::string("y") + ext)));
  }
  auto sample = [&] {
    return Call({"sample", "--vocab", P("x.tgt"), "--external", P("external.txt"),
                 "--size", "20", "--seed", "3"})
        .out;
  };
  EXPECT_EQ(sample(), sample());
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  WriteFile(P("cfg.json"), R"({"mode": "parsing", "no-scope": true})");
  Result parsing = Call({"linearize", "--amr", P("corpus.amr"), "--config", P("cfg.json")});
  ASSERT_EQ(parsing.code, kOk) << parsing.err;
  EXPECT_NE(parsing.out.find("-01"), std::string::npos);
  EXPECT_EQ(parsing.out.find("( "), std::string::npos);
  Result over = Call({"linearize", "--amr", P("corpus.amr"), "--config", P("cfg.json"),
                      "--mode", "generation"});
  EXPECT_EQ(over.out.find("-01"), std::string::npos);
  WriteFile(P("broken.json"), "{");
  EXPECT_EQ(Call({"linearize", "--amr", P("corpus.amr"), "--config", P("broken.json")}).code,
            kDataError);
}

TEST_F(CliTest, StatsReports) {
  ASSERT_EQ(Preprocess("s", {"--no-anon"}).code, kOk);
  Result oov = Call({"stats", "oov", "--heldout", P("s.tgt"), "--corpus",
                     "all=" + P("s.tgt")});
  ASSERT_EQ(oov.code, kOk) << oov.err;
  EXPECT_EQ(oov.out.rfind("Corpus", 0), 0u);
  EXPECT_NE(oov.out.find("0.0"), std::string::npos);
  Result edge = Call({"stats", "edge-order", "--amr", P("corpus.amr"), "--alignments",
                      P("align.jsonl"), "--json"});
  ASSERT_EQ(edge.code, kOk) << edge.err;
  EXPECT_NO_THROW(nlohmann::json::parse(edge.out));
  Result open = Call({"stats", "open-class", "--amr", P("corpus.amr"), "--alignments",
                      P("align.jsonl"), "--json"});
  ASSERT_EQ(open.code, kOk) << open.err;
  EXPECT_GT(nlohmann::json::parse(open.out)["open_class_tokens"].get<int>(), 0);
}

std::vector<std::string> TrainArgs(const CliTest &, const std::string &src,
                                   const std::string &tgt, const std::string &ext) {
  return {"train", "--train-src", src, "--train-tgt", tgt, "--dev-src", src,
          "--dev-tgt", tgt, "--external", ext, "--k", "10", "--iterations", "2",
          "--epochs-initial", "2", "--epochs-pretrain", "2", "--epochs-finetune", "1",
          "--no-vocab-filter", "--parser-metric", "exact", "--generator-metric", "exact"};
}

TEST_F(CliTest, TrainWithMockLedger) {
  ASSERT_EQ(Preprocess("t", {"--mode", "parsing"}).code, kOk);
  std::vector<std::string> args =
      TrainArgs(*this, P("t.src"), P("t.tgt"), P("external.txt"));
  args.insert(args.end(), {"--mock", "memorize"});
  Result first = Call(args);
  ASSERT_EQ(first.code, kOk) << first.err;
  RunLedger ledger;
  std::istringstream lines(first.out);
  for (std::string line; std::getline(lines, line);) ledger.Append(line);
  EXPECT_EQ(ledger.SampleSizes(), (std::vector<std::int64_t>{10, 100, 1000}));
  EXPECT_EQ(Call(args).out, first.out);
}

TEST_F(CliTest, TrainEndpointFailureIsModelError) {
  ASSERT_EQ(Preprocess("t", {"--mode", "parsing"}).code, kOk);
  std::vector<std::string> args =
      TrainArgs(*this, P("t.src"), P("t.tgt"), P("external.txt"));
  args.insert(args.end(), {"--parser-cmd", std::string(FAKE_ADAPTER) + " --fail",
                           "--generator-cmd", FAKE_ADAPTER, "--work-dir", P("jobs"),
                           "--ledger", P("ledger.jsonl")});
  Result r = Call(args);
  EXPECT_EQ(r.code, kModelError);
  EXPECT_NE(r.err.find("parser.initial"), std::string::npos) << r.err;
  EXPECT_NE(ReadFile(P("ledger.jsonl")).find("\"phase\":\"error\""), std::string::npos);
}

TEST_F(CliTest, TrainWithoutModelIsUsageError) {
  ASSERT_EQ(Preprocess("t", {"--mode", "parsing"}).code, kOk);
  EXPECT_EQ(Call(TrainArgs(*this, P("t.src"), P("t.tgt"), P("external.txt"))).code, kUsage);
}

}  // namespace
}  // namespace amr::cli
