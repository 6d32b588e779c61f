// One PASS/FAIL line per acceptance criterion; indented lines add detail.
// Exit status is nonzero when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "amr/anonymize.h"
#include "amr/corpus.h"
#include "amr/harness.h"
#include "amr/linearize.h"
#include "amr/metrics.h"
#include "amr/model.h"
#include "amr/penman.h"
#include "amr/pipeline.h"
#include "amr/synthetic.h"
#include "support/oracles.h"
#include "support/random_graphs.h"

namespace amr {
namespace {

using testing::ExpectedBrackets;
using testing::MergeNameOps;
using testing::RandomGraph;
using testing::RandomTree;

// Pinned tolerances and limits.
constexpr int kRoundTripTrees = 1000;
constexpr std::size_t kRoundTripMaxNodes = 12;
constexpr double kRoundTripSeconds = 5.0;
constexpr int kPenmanGraphs = 1000;
constexpr double kPenmanSeconds = 5.0;
constexpr std::size_t kReversibilityExamples = 200;
constexpr int kSmatchPairs = 500;
constexpr std::size_t kSmatchMaxVariables = 6;
constexpr int kSmatchRestarts = 4;
constexpr double kSmatchAgreement = 0.99;
constexpr double kSmatchSeconds = 30.0;
constexpr double kBleuTolerance = 1e-6;
constexpr double kTraceSeconds = 1.0;
constexpr double kEdgeConsistencyTarget = 50.0;
constexpr std::size_t kAblationExamples = 200;

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

class Stopwatch {
 public:
  double Seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string Fmt(const char *format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char *format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

std::size_t CountBrackets(const Tokens &tokens) {
  std::size_t n = 0;
  for (const std::string &t : tokens) n += t == kOpenScope || t == kCloseScope;
  return n;
}

// --- 1 ---------------------------------------------------------------------

Outcome RoundTrip() {
  Stopwatch clock;
  Rng rng(101);
  std::vector<SimplifiedGraph> trees;
  for (int i = 0; i < kRoundTripTrees; ++i) trees.push_back(RandomTree(rng, kRoundTripMaxNodes));
  const LinearizationOrder global = MakeGlobalOrder(LabelInventory(trees), 7);
  const LinearizationOrder random = LinearizationOrder::Random(7);
  struct Named {
    const char *name;
    const LinearizationOrder *order;
  };
  const LinearizationOrder human = LinearizationOrder::Human();
  const Named orders[] = {{"human", &human}, {"global-random", &global}, {"random", &random}};

  Outcome out;
  std::size_t misses = 0, collisions = 0, lossless_ok = 0;
  std::string per_order;
  for (const Named &o : orders) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < trees.size(); ++i) {
      LinearizeOptions opts{ScopeMarkers::kMultiChild, "t" + std::to_string(i)};
      Tokens seq = Linearize(trees[i], *o.order, opts);
      SimplifiedGraph back = Delinearize(seq, ScopeMarkers::kMultiChild).tree;
      const bool good = o.order == &human ? back == trees[i]
                                          : IsomorphicUnordered(back, trees[i]);
      if (good) {
        ++ok;
      } else {
        ++misses;
        // A collision: the decoded tree differs yet renders identically.
        LinearizeOptions human_opts{ScopeMarkers::kMultiChild, opts.example_id};
        collisions += Linearize(back, LinearizationOrder::Human(), human_opts) == seq;
      }
      LinearizeOptions nl{ScopeMarkers::kNonLeaf, opts.example_id};
      SimplifiedGraph lossless =
          Delinearize(Linearize(trees[i], *o.order, nl), ScopeMarkers::kNonLeaf).tree;
      lossless_ok += o.order == &human ? lossless == trees[i]
                                       : IsomorphicUnordered(lossless, trees[i]);
    }
    per_order += Fmt("%s %zu/%zu ", o.name, ok, trees.size());
  }
  const double secs = clock.Seconds();
  out.pass = misses == 0 && secs < kRoundTripSeconds;
  out.summary = Fmt("round-trip: %srecovered (%.2fs)", per_order.c_str(), secs);
  if (misses > 0) {
    out.details.push_back(Fmt(
        "%zu of %zu misses decode to a different tree that renders to the same "
        "sequence: omitting brackets on single-child nodes makes the rendering "
        "non-injective",
        collisions, misses));
  }
  out.details.push_back(Fmt("brackets on every non-leaf node (non-leaf mode): %zu/%zu",
                            lossless_ok, trees.size() * 3));
  return out;
}

// --- 2 ---------------------------------------------------------------------

Outcome PenmanRoundTrip() {
  Stopwatch clock;
  Rng rng(202);
  int ok = 0, reentrant = 0;
  for (int i = 0; i < kPenmanGraphs; ++i) {
    AmrGraph g = RandomGraph(rng);
    std::map<std::size_t, int> indegree;
    for (const Edge &e : g.edges()) {
      if (!g.node(e.target).is_constant) ++indegree[e.target.index];
    }
    for (const auto &[n, d] : indegree) {
      if (d > 1) {
        ++reentrant;
        break;
      }
    }
    ok += Triples(ParsePenman(SerializePenman(g))) == Triples(g) &&
          Triples(ParsePenman(SerializePenmanIndented(g))) == Triples(g);
  }
  const double secs = clock.Seconds();
  Outcome out;
  out.pass = ok == kPenmanGraphs && secs < kPenmanSeconds;
  out.summary = Fmt("penman round-trip: %d/%d triple sets equal, %d with re-entrancy (%.2fs)",
                    ok, kPenmanGraphs, reentrant, secs);
  return out;
}

// --- 3 ---------------------------------------------------------------------

Outcome Reversibility() {
  const std::vector<SyntheticExample> corpus =
      MakeSyntheticCorpus({kReversibilityExamples, 31, "acc"});
  const EntityTypeRegistry registry = EntityTypeRegistry::Default();
  std::vector<PreprocessInput> inputs;
  for (const SyntheticExample &ex : corpus) {
    inputs.push_back({ex.id, ToFullAmr(ex.tree), ex.sentence, ex.alignments});
  }
  std::size_t sentences_ok = 0, graphs_ok = 0, total_graphs = 0;
  for (SimplifyMode mode : {SimplifyMode::kGeneration, SimplifyMode::kParsing}) {
    PipelineConfig config;
    config.mode = mode;
    std::vector<PreprocessedExample> done = PreprocessCorpus(inputs, config, registry);
    AnonymizationTable table;
    for (const PreprocessedExample &ex : done) table.AddRecords(ex.records);
    for (std::size_t i = 0; i < done.size(); ++i) {
      if (mode == SimplifyMode::kGeneration) {
        sentences_ok +=
            DeanonymizeOutput(done[i].sentence, done[i].records, table).tokens ==
            corpus[i].sentence;
      }
      SimplifiedGraph original = SimplifyGraph(inputs[i].graph, mode);
      RecoveredGraph r = RecoverAmrEntities(done[i].tree, done[i].records);
      ++total_graphs;
      graphs_ok += r.unmatched.empty() && MergeNameOps(r.tree) == MergeNameOps(original);
    }
  }
  Outcome out;
  out.pass = sentences_ok == corpus.size() && graphs_ok == total_graphs;
  out.summary = Fmt(
      "anonymization reversibility: %zu/%zu sentences restored, %zu/%zu graphs "
      "recovered (generation and parsing)",
      sentences_ok, corpus.size(), graphs_ok, total_graphs);
  return out;
}

// --- 4 ---------------------------------------------------------------------

Outcome BracketEconomy() {
  Rng rng(101);
  std::vector<SimplifiedGraph> trees;
  for (int i = 0; i < kRoundTripTrees; ++i) trees.push_back(RandomTree(rng, kRoundTripMaxNodes));
  for (const SyntheticExample &ex : MakeSyntheticCorpus({200, 41, "b"})) {
    trees.push_back(ex.tree);
  }
  const LinearizationOrder orders[] = {LinearizationOrder::Human(),
                                       MakeGlobalOrder(LabelInventory(trees), 3),
                                       LinearizationOrder::Random(3)};
  std::size_t ok = 0, total = 0;
  for (const LinearizationOrder &order : orders) {
    for (std::size_t i = 0; i < trees.size(); ++i) {
      Tokens seq = Linearize(trees[i], order, {ScopeMarkers::kMultiChild, std::to_string(i)});
      ok += CountBrackets(seq) == ExpectedBrackets(trees[i]);
      ++total;
    }
  }
  Outcome out;
  out.pass = ok == total;
  out.summary = Fmt("bracket economy: %zu/%zu renderings carry 2 brackets per node "
                    "with two or more children",
                    ok, total);
  return out;
}

// --- 5 ---------------------------------------------------------------------

Outcome SmatchOracle() {
  Stopwatch clock;
  Rng rng(505);
  int agree = 0, self_one = 0, over = 0;
  SmatchOptions options;
  options.restarts = kSmatchRestarts;
  for (int i = 0; i < kSmatchPairs; ++i) {
    AmrGraph a = RandomGraph(rng, testing::GraphShape{kSmatchMaxVariables});
    AmrGraph b = i % 2 ? testing::Perturb(testing::RenameVariables(a, rng), rng)
                       : RandomGraph(rng, testing::GraphShape{kSmatchMaxVariables});
    SmatchResult hill = Smatch(a, b, options);
    const std::int64_t best = testing::SmatchOracleMatched(a, b);
    const double oracle_f1 =
        2.0 * best / static_cast<double>(testing::TripleCount(a) + testing::TripleCount(b));
    agree += std::fabs(hill.f1 - oracle_f1) < 1e-12;
    over += hill.matched > best;
    self_one += Smatch(a, a, options).f1 == 1.0 &&
                Smatch(a, testing::RenameVariables(a, rng), options).f1 == 1.0;
  }
  const double secs = clock.Seconds();
  Outcome out;
  out.pass = agree >= kSmatchAgreement * kSmatchPairs && over == 0 &&
             self_one == kSmatchPairs && secs < kSmatchSeconds;
  out.summary = Fmt("smatch oracle: %d/%d pairs equal exhaustive F1 (need %.0f%%), "
                    "smatch(g,g)=1 for %d/%d (%.2fs)",
                    agree, kSmatchPairs, kSmatchAgreement * 100, self_one, kSmatchPairs,
                    secs);
  if (over > 0) out.details.push_back(Fmt("%d pairs beat the exhaustive optimum", over));
  return out;
}

// --- 6 ---------------------------------------------------------------------

Outcome BleuFormula() {
  const double expected = 100.0 * std::exp(-0.25);
  BleuResult r = Bleu({SplitTokens("a b c d")}, {SplitTokens("a b c d e")});
  std::vector<Tokens> corpus = {SplitTokens("the boy wants to go"),
                                SplitTokens("he saw the girl in the city .")};
  BleuResult same = Bleu(corpus, corpus);
  Outcome out;
  out.pass = std::fabs(r.score - expected) <= kBleuTolerance && same.score == 100.0;
  out.summary = Fmt("bleu formula: %.8f vs %.8f (tol %g), identical corpora %.1f",
                    r.score, expected, kBleuTolerance, same.score);
  return out;
}

// --- 7 ---------------------------------------------------------------------

class RecordingModel : public Model {
 public:
  RecordingModel(std::unique_ptr<Model> inner, std::string name,
                 std::vector<std::string> *log)
      : inner_(std::move(inner)), name_(std::move(name)), log_(log) {}

  TrainOutcome Train(const TrainJob &job) override {
    log_->push_back(name_ + ".train:" + std::to_string(job.train.size()) +
                    (job.init_checkpoint ? "+init" : ""));
    return inner_->Train(job);
  }
  std::vector<Tokens> Predict(const std::vector<Tokens> &in, const std::string &ckpt,
                              int beam) override {
    log_->push_back(name_ + ".predict:" + std::to_string(in.size()));
    return inner_->Predict(in, ckpt, beam);
  }

 private:
  std::unique_ptr<Model> inner_;
  std::string name_;
  std::vector<std::string> *log_;
};

// Hand trace of the paired training procedure for k=10, N=2 with two
// pre-training epochs: P = parser, G = generator, D = 16 train / 4 dev.
std::vector<std::string> HandTrace() {
  std::vector<std::string> t = {"parser.train:16", "parser.predict:4"};
  auto cycle = [&](const std::string &who, int sample) {
    const std::string n = std::to_string(sample);
    for (int epoch = 0; epoch < 2; ++epoch) {
      t.push_back(who + ".train:" + n + (epoch ? "+init" : ""));
      t.push_back(who + ".train:16+init");
      t.push_back(who + ".predict:4");
    }
  };
  t.push_back("parser.predict:10");
  cycle("parser", 10);
  t.push_back("parser.predict:100");
  cycle("parser", 100);
  t.push_back("parser.predict:1000");
  cycle("generator", 1000);
  return t;
}

Outcome AlgorithmTrace() {
  Stopwatch clock;
  const std::vector<std::string> words = SplitTokens(
      "the cat dog saw a bird ran to big red old house near small tree ate fish boy girl and");
  PairedData data;
  for (std::size_t i = 0; i < 20; ++i) {
    Tokens s = {words[i], words[(i + 3) % 20], words[(i + 7) % 20]};
    Tokens a = {"(", s[1] + "-01", ":ARG0", s[0], ")"};
    (i < 16 ? data.train : data.dev).push_back({s, a});
  }
  std::vector<std::string> pool;
  for (const std::string &a : words)
    for (const std::string &b : words)
      for (int c = 0; c < 5; ++c) pool.push_back(a + " " + b + " " + words[c]);
  TrainingSchedule schedule;
  schedule.k = 10;
  schedule.iterations = 2;
  schedule.epochs_initial = 3;
  schedule.epochs_pretrain = 2;
  schedule.epochs_finetune = 1;
  HarnessOptions options;
  options.parser_metric = DevMetric::kExactMatch;
  options.generator_metric = DevMetric::kExactMatch;
  options.seed = 11;

  auto run = [&](std::vector<std::string> *log) {
    RecordingModel p(MakeMockModel(MockBehavior::kMemorize), "parser", log);
    RecordingModel g(MakeMockModel(MockBehavior::kMemorize), "generator", log);
    return PairedTraining(data, pool, p, g, schedule, options);
  };
  std::vector<std::string> calls_a, calls_b;
  TrainingResult a = run(&calls_a);
  TrainingResult b = run(&calls_b);
  const double secs = clock.Seconds() / 2;
  const std::vector<std::int64_t> sizes = a.ledger.SampleSizes();
  const bool sizes_ok = sizes == std::vector<std::int64_t>{10, 100, 1000};
  const bool calls_ok = calls_a == HandTrace() && calls_b == calls_a;
  const bool bytes_ok = a.ledger.Text() == b.ledger.Text();
  Outcome out;
  out.pass = sizes_ok && calls_ok && bytes_ok && secs < kTraceSeconds;
  std::string s;
  for (std::int64_t n : sizes) s += (s.empty() ? "" : ",") + std::to_string(n);
  out.summary = Fmt("algorithm trace: sample sizes [%s], %zu calls %s hand trace, "
                    "ledgers %s (%.3fs per run)",
                    s.c_str(), calls_a.size(), calls_ok ? "match" : "differ from",
                    bytes_ok ? "byte-identical" : "differ", secs);
  return out;
}

// --- 8 ---------------------------------------------------------------------

Outcome OovMonotonicity() {
  const std::vector<std::string> pool = SyntheticSentences(1600, 808);
  const std::vector<std::string> held_text = SyntheticSentences(200, 909);
  std::vector<Tokens> held;
  for (const std::string &s : held_text) held.push_back(SplitTokens(s));
  std::vector<OovRow> rows;
  for (std::size_t n : {100, 400, 1600}) {
    std::vector<Tokens> corpus;
    for (std::size_t i = 0; i < n; ++i) corpus.push_back(SplitTokens(pool[i]));
    Vocabulary v = BuildVocabulary(corpus);
    rows.push_back({"C" + std::to_string(rows.size() + 1), v.size(), OovRate(v, held, 1),
                    OovRate(v, held, 5)});
  }
  bool ok = true;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    ok = ok && rows[i].oov1 <= rows[i - 1].oov1 && rows[i].oov5 <= rows[i - 1].oov5;
  }
  Outcome out;
  out.pass = ok;
  out.summary = Fmt("oov monotonicity: OOV@1 %.1f > %.1f > %.1f, OOV@5 %.1f > %.1f > %.1f "
                    "on nested corpora",
                    rows[0].oov1, rows[1].oov1, rows[2].oov1, rows[0].oov5, rows[1].oov5,
                    rows[2].oov5);
  return out;
}

// --- 9 ---------------------------------------------------------------------

Outcome AblationPlumbing() {
  const std::vector<SyntheticExample> corpus =
      MakeSyntheticCorpus({kAblationExamples, 1, "fx"});
  std::vector<PreprocessInput> inputs;
  for (const SyntheticExample &ex : corpus) {
    inputs.push_back({ex.id, ToFullAmr(ex.tree), ex.sentence, ex.alignments});
  }
  const EntityTypeRegistry registry = EntityTypeRegistry::Default();
  auto stage = [&](bool scope, bool clusters, bool anon) {
    PipelineConfig c;
    c.scope_markers = scope;
    c.ne_clusters = clusters;
    c.anonymization = anon;
    std::vector<Tokens> out;
    for (const PreprocessedExample &ex : PreprocessCorpus(inputs, c, registry)) {
      out.push_back(ex.graph);
    }
    return out;
  };
  auto brackets = [](const std::vector<Tokens> &seqs) {
    std::size_t n = 0;
    for (const Tokens &t : seqs) n += CountBrackets(t);
    return n;
  };
  const std::vector<Tokens> a = stage(false, false, false), b = stage(false, false, true),
                            c = stage(false, true, true), d = stage(true, true, true);
  const std::vector<std::vector<Tokens>> stages = {a, b, c, d};
  bool distinct = true;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    for (std::size_t j = i + 1; j < stages.size(); ++j) distinct = distinct && stages[i] != stages[j];
  }
  // Other scope-marked variants of the same pipeline.
  const std::size_t d_br = brackets(d);
  const std::size_t no_anon_br = brackets(stage(true, false, false));
  const std::size_t no_ne_br = brackets(stage(true, false, true));
  Outcome out;
  out.pass = distinct && d_br <= no_ne_br && d_br < no_anon_br;
  out.summary = Fmt("ablation plumbing: 4 stages %s; brackets full %zu, without clusters "
                    "%zu, without anonymization %zu",
                    distinct ? "pairwise distinct" : "NOT distinct", d_br, no_ne_br,
                    no_anon_br);
  return out;
}

// --- 10 --------------------------------------------------------------------

struct EdgeCase {
  const char *penman;
  const char *sentence;
  AlignmentSet alignments;
};

Outcome EdgeOrder() {
  // (ARG0, ARG1) always in that order; (mod, time) both ways, with the
  // sentence agreeing with the edge order in half the cases.
  const std::vector<EdgeCase> cases = {
      {"(s / see-01 :ARG0 (b / boy) :ARG1 (g / girl))", "the boy saw the girl",
       {{"0.0", 1, 2}, {"0.1", 4, 5}}},
      {"(s / see-01 :ARG0 (c / cat) :ARG1 (d / dog))", "the cat saw the dog",
       {{"0.0", 1, 2}, {"0.1", 4, 5}}},
      {"(r / run-02 :mod (f / fast) :time (t / today))", "he ran fast today",
       {{"0.0", 2, 3}, {"0.1", 3, 4}}},
      {"(r / run-02 :time (t / today) :mod (f / fast))", "today he ran fast",
       {{"0.0", 0, 1}, {"0.1", 3, 4}}},
      {"(r / run-02 :mod (f / fast) :time (t / today))", "today he ran fast",
       {{"0.0", 3, 4}, {"0.1", 0, 1}}},
      {"(r / run-02 :time (t / today) :mod (f / fast))", "he ran fast today",
       {{"0.0", 3, 4}, {"0.1", 2, 3}}},
  };
  std::vector<AmrGraph> graphs;
  std::vector<AlignmentSet> alignments;
  for (const EdgeCase &c : cases) {
    graphs.push_back(ParsePenman(c.penman));
    alignments.push_back(c.alignments);
  }
  EdgeOrderStats stats = ComputeEdgeOrderStats(graphs, &alignments);

  // Brute force: enumerate every sibling pair in every graph.
  std::map<std::pair<std::string, std::string>, std::set<bool>> orders;
  struct Obs {
    std::pair<std::string, std::string> key;
    bool agrees;
    bool aligned;
  };
  std::vector<Obs> observations;
  for (std::size_t g = 0; g < graphs.size(); ++g) {
    SimplifiedGraph t = SimplifyGraph(graphs[g], SimplifyMode::kParsing);
    std::map<std::string, std::size_t> start;
    for (const Alignment &a : alignments[g]) start[a.path] = a.start;
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      for (std::size_t j = i + 1; j < t.children.size(); ++j) {
        const std::string &x = t.children[i].label, &y = t.children[j].label;
        if (x == y) continue;
        auto key = std::make_pair(std::min(x, y), std::max(x, y));
        orders[key].insert(x < y);
        auto si = start.find("0." + std::to_string(i));
        auto sj = start.find("0." + std::to_string(j));
        const bool aligned = si != start.end() && sj != start.end();
        observations.push_back({key, aligned && si->second < sj->second, aligned});
      }
    }
  }
  std::size_t consistent = 0, eligible = 0;
  for (const auto &[key, seen] : orders) {
    ++eligible;
    consistent += seen.size() == 1;
  }
  std::size_t agree = 0, aligned = 0;
  for (const Obs &o : observations) {
    if (orders[o.key].size() == 1 || !o.aligned) continue;
    ++aligned;
    agree += o.agrees;
  }
  const double brute_consistency = 100.0 * consistent / eligible;
  const double brute_agreement = 100.0 * agree / aligned;
  const std::optional<double> got = stats.RealizationAgreementPercent();
  Outcome out;
  out.pass = stats.ConsistencyPercent() == kEdgeConsistencyTarget &&
             brute_consistency == kEdgeConsistencyTarget && got &&
             *got == brute_agreement;
  out.summary = Fmt("edge-order stats: consistency %.1f%% (brute force %.1f%%), "
                    "realization agreement %.1f%% (brute force %.1f%%)",
                    stats.ConsistencyPercent(), brute_consistency, got ? *got : -1.0,
                    brute_agreement);
  return out;
}

}  // namespace
}  // namespace amr

int main() {
  using amr::Outcome;
  const std::pair<const char *, std::function<Outcome()>> criteria[] = {
      {"round-trip", amr::RoundTrip},
      {"penman", amr::PenmanRoundTrip},
      {"reversibility", amr::Reversibility},
      {"brackets", amr::BracketEconomy},
      {"smatch", amr::SmatchOracle},
      {"bleu", amr::BleuFormula},
      {"trace", amr::AlgorithmTrace},
      {"oov", amr::OovMonotonicity},
      {"ablation", amr::AblationPlumbing},
      {"edge-order", amr::EdgeOrder},
  };
  int failed = 0;
  for (const auto &[name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception &e) {
      o.pass = false;
      o.summary = std::string(name) + ": threw " + e.what();
    }
    std::printf("%s %s\n", o.pass ? "PASS" : "FAIL", o.summary.c_str());
    for (const std::string &d : o.details) std::printf("     %s\n", d.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
