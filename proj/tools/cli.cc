#include "cli.h"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "amr/alignment_io.h"
#include "amr/corpus.h"
#include "amr/error.h"
#include "amr/external_model.h"
#include "amr/harness.h"
#include "amr/metrics.h"
#include "amr/model.h"
#include "amr/penman.h"
#include "amr/pipeline.h"
#include "amr/text.h"

namespace amr::cli {

namespace {

using Json = nlohmann::json;

// A failure tied to an input file: "path:line: Code: message".
class DataError : public std::runtime_error {
 public:
  DataError(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void FailAt(ErrorCode code, const std::string &path,
                         std::optional<std::size_t> line, std::string message) {
  const std::string prefix = std::string(ErrorCodeName(code)) + ": ";
  if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
  std::string where = path;
  if (line) where += ":" + std::to_string(*line);
  throw DataError(code, where + ": " + prefix + message);
}

// Rewrites "line N: msg" errors from the format readers into "path:N: msg".
template <typename F>
auto WithPath(const std::string &path, F &&read) -> decltype(read()) {
  try {
    return read();
  } catch (const DataError &) {
    throw;
  } catch (const Error &e) {
    static const std::regex kLine(R"(^(?:[\w-]+ )?line (\d+): (.*)$)");
    std::smatch m;
    std::string what = e.what();
    const std::string prefix = std::string(ErrorCodeName(e.code())) + ": ";
    if (what.rfind(prefix, 0) == 0) what.erase(0, prefix.size());
    if (std::regex_match(what, m, kLine)) {
      FailAt(e.code(), path, std::stoul(m[1].str()), m[2].str());
    }
    FailAt(e.code(), path, std::nullopt, what);
  }
}

std::string Slurp(const std::string &path) {
  return WithPath(path, [&] { return ReadFile(path); });
}

std::vector<AmrEntry> ReadAmrFile(const std::string &path) {
  const std::string text = Slurp(path);
  try {
    return ParsePenmanDocument(text);
  } catch (const ParseError &e) {
    FailAt(e.code(), path, LineOfOffset(text, e.offset()), e.what());
  } catch (const Error &e) {
    FailAt(e.code(), path, std::nullopt, e.what());
  }
}

std::vector<std::string> ReadTextLines(const std::string &path) {
  return WithPath(path, [&] { return ReadLines(path); });
}

std::vector<Tokens> ReadTokenLines(const std::string &path) {
  std::vector<Tokens> out;
  for (const std::string &line : ReadTextLines(path)) out.push_back(SplitTokens(line));
  return out;
}

std::string EntryId(const AmrEntry &entry, std::size_t index) {
  if (auto id = entry.Field("id")) return *id;
  return std::to_string(index + 1);
}

void Emit(const std::string &text, const std::string &path, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WithPath(path, [&] { WriteFile(path, text); return 0; });
  }
}

std::string JoinLines(const std::vector<Tokens> &lines) {
  std::string out;
  for (const Tokens &t : lines) out += JoinTokens(t) + "\n";
  return out;
}

// --- configuration ---------------------------------------------------------

// Expands a JSON object of option values into "--key=value" arguments.
std::vector<std::string> ConfigArguments(const std::string &path) {
  Json j;
  try {
    j = Json::parse(Slurp(path));
  } catch (const Json::exception &e) {
    FailAt(ErrorCode::kFormat, path, std::nullopt, e.what());
  }
  if (!j.is_object()) FailAt(ErrorCode::kFormat, path, std::nullopt, "expected a JSON object");
  std::vector<std::string> args;
  auto scalar = [&](const std::string &key, const Json &v) {
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_boolean() || v.is_number()) {
      text = v.dump();
    } else {
      FailAt(ErrorCode::kFormat, path, std::nullopt, "unsupported value for " + key);
    }
    args.push_back("--" + key + "=" + text);
  };
  for (const auto &[key, value] : j.items()) {
    if (value.is_array()) {
      for (const Json &v : value) scalar(key, v);
    } else {
      scalar(key, value);
    }
  }
  return args;
}

// Moves "--config FILE" values in front of the remaining flags so that
// explicit flags win.
std::vector<std::string> ApplyConfig(std::vector<std::string> args) {
  std::optional<std::string> config;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config) return rest;
  std::size_t at = 0;
  if (!rest.empty() && rest[0].rfind("-", 0) != 0) at = 1;
  if (at == 1 && rest[0] == "stats" && rest.size() > 1 && rest[1].rfind("-", 0) != 0) at = 2;
  std::vector<std::string> expanded = ConfigArguments(*config);
  rest.insert(rest.begin() + static_cast<std::ptrdiff_t>(at), expanded.begin(),
              expanded.end());
  return rest;
}

// --- shared option groups --------------------------------------------------

struct PipelineFlags {
  std::string mode = "generation";
  bool no_scope = false;
  bool no_ne_clusters = false;
  bool no_anon = false;
  std::string scope_style = "multi-child";
  std::string order = "human";
  std::uint64_t seed = 0;

  void Register(CLI::App *app, bool anonymization) {
    app->add_option("--mode", mode, "parsing or generation")
        ->check(CLI::IsMember({"parsing", "generation"}))
        ->capture_default_str();
    app->add_flag("--no-scope", no_scope, "omit scope markers");
    app->add_option("--scope-style", scope_style,
                    "bracket placement when scope markers are on: multi-child "
                    "(nodes with two or more children) or non-leaf")
        ->check(CLI::IsMember({"multi-child", "non-leaf"}))
        ->capture_default_str();
    app->add_option("--order", order, "child order: human, global-random or random")
        ->check(CLI::IsMember({"human", "global-random", "random"}))
        ->capture_default_str();
    app->add_option("--seed", seed, "seed for random orders")->capture_default_str();
    if (anonymization) {
      app->add_flag("--no-ne-clusters", no_ne_clusters,
                    "keep fine-grained entity types");
      app->add_flag("--no-anon", no_anon,
                    "skip anonymization (implies --no-ne-clusters)");
    }
  }

  PipelineConfig Config() const {
    PipelineConfig c;
    c.mode = mode == "parsing" ? SimplifyMode::kParsing : SimplifyMode::kGeneration;
    c.scope_markers = !no_scope;
    c.anonymization = !no_anon;
    c.ne_clusters = !no_ne_clusters && !no_anon;
    c.scope_style = scope_style == "non-leaf" ? ScopeMarkers::kNonLeaf
                                              : ScopeMarkers::kMultiChild;
    c.order = *ParseOrderKind(order);
    c.seed = seed;
    return c;
  }
};

struct ScopeFlags {
  bool no_scope = false;
  std::string scope_style = "multi-child";

  void Register(CLI::App *app) {
    app->add_flag("--no-scope", no_scope, "input has no scope markers");
    app->add_option("--scope-style", scope_style, "multi-child or non-leaf")
        ->check(CLI::IsMember({"multi-child", "non-leaf"}))
        ->capture_default_str();
  }
  ScopeMarkers Scope() const {
    if (no_scope) return ScopeMarkers::kNone;
    return scope_style == "non-leaf" ? ScopeMarkers::kNonLeaf
                                     : ScopeMarkers::kMultiChild;
  }
};

EntityTypeRegistry LoadRegistry(const std::string &path) {
  if (path.empty()) return EntityTypeRegistry::Default();
  return WithPath(path, [&] { return EntityTypeRegistry::Load(path); });
}

std::map<std::string, AlignmentSet> LoadAlignments(const std::string &path) {
  if (path.empty()) return {};
  const std::string text = Slurp(path);
  return WithPath(path, [&] { return ParseAlignmentsJsonl(text); });
}

// Records file lines paired with sequence lines.
std::vector<std::pair<std::string, Records>> LoadRecords(const std::string &path) {
  const std::string text = Slurp(path);
  return WithPath(path, [&] { return ParseRecordsJsonl(text); });
}

// --- commands --------------------------------------------------------------

struct PreprocessCmd {
  std::string amr, alignments, registry, out;
  PipelineFlags flags;

  void Register(CLI::App *app) {
    app->add_option("--amr", amr, "Penman file with # ::id and # ::snt metadata")
        ->required();
    app->add_option("--alignments", alignments,
                    "alignment JSONL {id, alignments:[{path,start,end}]}");
    app->add_option("--registry", registry, "fine_type<TAB>coarse_type TSV");
    app->add_option("--out", out,
                    "output prefix: writes PREFIX.src, PREFIX.tgt, "
                    "PREFIX.records.jsonl and PREFIX.table.json")
        ->required();
    flags.Register(app, true);
  }

  int Run(std::ostream &, std::ostream &err) const {
    const PipelineConfig config = flags.Config();
    const EntityTypeRegistry reg = LoadRegistry(registry);
    const std::map<std::string, AlignmentSet> aligned = LoadAlignments(alignments);
    const std::vector<AmrEntry> entries = ReadAmrFile(amr);
    const std::string text = Slurp(amr);
    std::vector<PreprocessInput> inputs;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const AmrEntry &e = entries[i];
      std::optional<std::string> snt = e.Field("snt");
      if (!snt) {
        FailAt(ErrorCode::kFormat, amr, LineOfOffset(text, e.offset),
               "graph has no # ::snt line");
      }
      PreprocessInput in{EntryId(e, i), e.graph, SplitTokens(*snt), {}};
      if (auto it = aligned.find(in.id); it != aligned.end()) in.alignments = it->second;
      inputs.push_back(std::move(in));
    }
    std::vector<PreprocessedExample> done;
    try {
      done = PreprocessCorpus(inputs, config, reg);
    } catch (const Error &e) {
      const std::string what = e.what();
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (what.rfind("example " + inputs[i].id + ": ", 0) == 0) {
          FailAt(e.code(), amr, LineOfOffset(text, entries[i].offset), what);
        }
      }
      FailAt(e.code(), amr, std::nullopt, what);
    }
    std::vector<Tokens> src, tgt;
    AnonymizationTable table;
    std::size_t unaligned = 0;
    for (const PreprocessedExample &ex : done) {
      const bool parsing = config.mode == SimplifyMode::kParsing;
      src.push_back(parsing ? ex.sentence : ex.graph);
      tgt.push_back(parsing ? ex.graph : ex.sentence);
      table.AddRecords(ex.records);
      unaligned += ex.unaligned.size();
    }
    Emit(JoinLines(src), out + ".src", err);
    Emit(JoinLines(tgt), out + ".tgt", err);
    Emit(RecordsJsonl(done), out + ".records.jsonl", err);
    Emit(table.ToJson() + "\n", out + ".table.json", err);
    err << "preprocessed " << done.size() << " examples";
    if (unaligned > 0) err << " (" << unaligned << " unaligned records)";
    err << "\n";
    return kOk;
  }
};

struct LinearizeCmd {
  std::string amr, out;
  PipelineFlags flags;

  void Register(CLI::App *app) {
    app->add_option("--amr", amr, "Penman file")->required();
    app->add_option("--out", out, "output file (default stdout)");
    flags.Register(app, false);
  }

  int Run(std::ostream &o, std::ostream &) const {
    PipelineConfig config = flags.Config();
    std::vector<SimplifiedGraph> trees;
    std::vector<std::string> ids;
    std::vector<AmrEntry> entries = ReadAmrFile(amr);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      trees.push_back(SimplifyGraph(entries[i].graph, config.mode));
      ids.push_back(EntryId(entries[i], i));
    }
    const LinearizationOrder order = BuildOrder(config, trees);
    std::vector<Tokens> lines;
    for (std::size_t i = 0; i < trees.size(); ++i) {
      lines.push_back(Linearize(trees[i], order, {config.Scope(), ids[i]}));
    }
    Emit(JoinLines(lines), out, o);
    return kOk;
  }
};

struct DelinearizeCmd {
  std::string input, records, out;
  ScopeFlags scope;

  void Register(CLI::App *app) {
    app->add_option("--input", input, "one token sequence per line")->required();
    app->add_option("--records", records,
                    "records JSONL from preprocess; re-expands entity tokens");
    app->add_option("--out", out, "Penman output (default stdout)");
    scope.Register(app);
  }

  int Run(std::ostream &o, std::ostream &err) const {
    std::vector<Tokens> seqs = ReadTokenLines(input);
    std::vector<std::pair<std::string, Records>> recs;
    if (!records.empty()) {
      recs = LoadRecords(records);
      if (recs.size() != seqs.size()) {
        FailAt(ErrorCode::kLengthMismatch, records, std::nullopt,
               std::to_string(recs.size()) + " record lines for " +
                   std::to_string(seqs.size()) + " sequences");
      }
    }
    std::vector<AmrEntry> entries;
    std::size_t repaired = 0, unmatched = 0;
    for (std::size_t i = 0; i < seqs.size(); ++i) {
      Reconstructed r = ReconstructGraph(seqs[i], recs.empty() ? Records{} : recs[i].second,
                                         scope.Scope());
      if (!r.repairs.clean()) ++repaired;
      unmatched += r.unmatched.size();
      AmrEntry e{{}, std::move(r.graph), 0};
      e.metadata.push_back("# ::id " + (recs.empty() ? std::to_string(i + 1) : recs[i].first));
      entries.push_back(std::move(e));
    }
    Emit(SerializePenmanDocument(entries), out, o);
    if (repaired > 0) err << "repaired " << repaired << " malformed sequences\n";
    if (unmatched > 0) err << unmatched << " anonymization tokens had no record\n";
    return kOk;
  }
};

struct DeanonymizeCmd {
  std::string input, records, table, out;

  void Register(CLI::App *app) {
    app->add_option("--input", input, "generated sentences, one per line")->required();
    app->add_option("--records", records, "records JSONL from preprocess")->required();
    app->add_option("--table", table, "anonymization table JSON");
    app->add_option("--out", out, "output file (default stdout)");
  }

  int Run(std::ostream &o, std::ostream &err) const {
    std::vector<Tokens> lines = ReadTokenLines(input);
    auto recs = LoadRecords(records);
    if (recs.size() != lines.size()) {
      FailAt(ErrorCode::kLengthMismatch, records, std::nullopt,
             std::to_string(recs.size()) + " record lines for " +
                 std::to_string(lines.size()) + " sentences");
    }
    AnonymizationTable t;
    if (!table.empty()) {
      const std::string text = Slurp(table);
      t = WithPath(table, [&] { return AnonymizationTable::FromJson(text); });
    }
    std::vector<Tokens> result;
    std::size_t unresolved = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      Deanonymized d = DeanonymizeOutput(lines[i], recs[i].second, t);
      unresolved += d.unresolved.size();
      result.push_back(std::move(d.tokens));
    }
    Emit(JoinLines(result), out, o);
    if (unresolved > 0) err << unresolved << " tokens left unresolved\n";
    return kOk;
  }
};

struct StatsOovCmd {
  std::string heldout;
  std::vector<std::string> corpora;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("--heldout", heldout, "held-out sentences")->required();
    app->add_option("--corpus", corpora, "NAME=FILE, repeatable, one row each")
        ->required();
    app->add_flag("--json", json, "emit JSON");
  }

  int Run(std::ostream &o, std::ostream &) const {
    std::vector<Tokens> held = ReadTokenLines(heldout);
    std::vector<OovRow> rows;
    for (const std::string &entry : corpora) {
      const std::size_t eq = entry.find('=');
      if (eq == std::string::npos) {
        throw CLI::ValidationError("--corpus", "expected NAME=FILE, got " + entry);
      }
      const std::string name = entry.substr(0, eq), path = entry.substr(eq + 1);
      std::vector<Tokens> corpus = ReadTokenLines(path);
      Vocabulary v = WithPath(path, [&] { return BuildVocabulary(corpus); });
      rows.push_back({name, v.size(), OovRate(v, held, 1), OovRate(v, held, 5)});
    }
    o << (json ? OovTableJson(rows) + "\n" : FormatOovTable(rows));
    return kOk;
  }
};

struct StatsEdgeOrderCmd {
  std::string amr, alignments;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("--amr", amr, "Penman file")->required();
    app->add_option("--alignments", alignments, "alignment JSONL");
    app->add_flag("--json", json, "emit JSON");
  }

  int Run(std::ostream &o, std::ostream &) const {
    std::vector<AmrEntry> entries = ReadAmrFile(amr);
    std::map<std::string, AlignmentSet> aligned = LoadAlignments(alignments);
    std::vector<AmrGraph> graphs;
    std::vector<AlignmentSet> sets;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      graphs.push_back(entries[i].graph);
      auto it = aligned.find(EntryId(entries[i], i));
      sets.push_back(it == aligned.end() ? AlignmentSet{} : it->second);
    }
    EdgeOrderStats stats =
        ComputeEdgeOrderStats(graphs, alignments.empty() ? nullptr : &sets);
    o << (json ? EdgeOrderJson(stats) + "\n" : FormatEdgeOrderReport(stats));
    return kOk;
  }
};

struct StatsOpenClassCmd {
  std::string amr, alignments, registry;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("--amr", amr, "Penman file with # ::snt")->required();
    app->add_option("--alignments", alignments, "alignment JSONL")->required();
    app->add_option("--registry", registry, "entity type TSV");
    app->add_flag("--json", json, "emit JSON");
  }

  int Run(std::ostream &o, std::ostream &) const {
    PipelineFlags flags;
    flags.mode = "parsing";
    flags.no_ne_clusters = true;
    const EntityTypeRegistry reg = LoadRegistry(registry);
    const auto aligned = LoadAlignments(alignments);
    std::vector<SentenceSpans> input;
    std::vector<AmrEntry> entries = ReadAmrFile(amr);
    const LinearizationOrder order = LinearizationOrder::Human();
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string id = EntryId(entries[i], i);
      auto snt = entries[i].Field("snt");
      if (!snt) FailAt(ErrorCode::kFormat, amr, std::nullopt, id + ": no # ::snt line");
      auto it = aligned.find(id);
      PreprocessedExample ex = PreprocessExample(
          id, entries[i].graph, SplitTokens(*snt),
          it == aligned.end() ? AlignmentSet{} : it->second, flags.Config(), reg, order);
      input.push_back({SplitTokens(*snt), ex.spans});
    }
    OpenClassStats s = ComputeOpenClassStats(input);
    if (json) {
      o << Json{{"tokens", s.tokens},
                {"open_class_tokens", s.open_class_tokens},
                {"types", s.types},
                {"open_class_types", s.open_class_types},
                {"rare_open_class_types", s.rare_open_class_types},
                {"token_percent", s.TokenPercent()},
                {"type_percent", s.TypePercent()},
                {"rare_percent", s.RarePercent()}}
               .dump()
        << "\n";
    } else {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "open-class tokens %.1f%% of %lld\n"
                    "open-class types  %.1f%% of %zu\n"
                    "rare (<5) among open-class types %.1f%%\n",
                    s.TokenPercent(), static_cast<long long>(s.tokens),
                    s.TypePercent(), s.types, s.RarePercent());
      o << buf;
    }
    return kOk;
  }
};

struct SampleCmd {
  std::string vocab, external, out;
  std::vector<std::string> exclude;
  std::size_t size = 0;
  std::uint64_t seed = 0;

  void Register(CLI::App *app) {
    app->add_option("--vocab", vocab, "sentences whose tokens form the vocabulary")
        ->required();
    app->add_option("--external", external, "candidate sentences, one per line")
        ->required();
    app->add_option("--size", size, "sample size")->required();
    app->add_option("--exclude", exclude, "files of sentences to skip, repeatable");
    app->add_option("--seed", seed, "reservoir seed")->capture_default_str();
    app->add_option("--out", out, "output file (default stdout)");
  }

  int Run(std::ostream &o, std::ostream &err) const {
    std::vector<Tokens> corpus = ReadTokenLines(vocab);
    Vocabulary v = WithPath(vocab, [&] { return BuildVocabulary(corpus); });
    std::set<std::string> skip;
    for (const Tokens &t : corpus) skip.insert(JoinTokens(t));
    for (const std::string &path : exclude) {
      for (const std::string &line : ReadTextLines(path)) skip.insert(NormalizeWhitespace(line));
    }
    SampleResult r = SampleExternal(ReadTextLines(external), v, skip, size, seed);
    std::string text;
    for (const std::string &s : r.sentences) text += s + "\n";
    Emit(text, out, o);
    if (r.insufficient) {
      err << "warning: only " << r.sentences.size() << " eligible sentences for a sample of "
          << size << "\n";
    }
    return kOk;
  }
};

struct SmatchCmd {
  std::string gold, pred;
  int restarts = 4;
  std::uint64_t seed = 0;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("gold", gold, "gold Penman file")->required();
    app->add_option("pred", pred, "predicted Penman file")->required();
    app->add_option("--restarts", restarts, "random restarts")->capture_default_str();
    app->add_option("--seed", seed, "restart seed")->capture_default_str();
    app->add_flag("--json", json, "emit JSON");
  }

  int Run(std::ostream &o, std::ostream &) const {
    std::vector<AmrGraph> g, p;
    for (AmrEntry &e : ReadAmrFile(gold)) g.push_back(std::move(e.graph));
    for (AmrEntry &e : ReadAmrFile(pred)) p.push_back(std::move(e.graph));
    if (g.size() != p.size()) {
      FailAt(ErrorCode::kLengthMismatch, pred, std::nullopt,
             std::to_string(p.size()) + " graphs against " +
                 std::to_string(g.size()) + " gold graphs");
    }
    SmatchOptions options;
    options.restarts = restarts;
    options.seed = seed;
    SmatchResult r = WithPath(gold, [&] { return SmatchCorpus(g, p, options); });
    o << (json ? SmatchJson(r) : FormatSmatch(r)) << "\n";
    return kOk;
  }
};

struct BleuCmd {
  std::string hyp, ref;
  bool json = false;

  void Register(CLI::App *app) {
    app->add_option("hyp", hyp, "hypotheses, one per line")->required();
    app->add_option("ref", ref, "references, one per line")->required();
    app->add_flag("--json", json, "emit JSON");
  }

  int Run(std::ostream &o, std::ostream &) const {
    std::vector<Tokens> h = ReadTokenLines(hyp), r = ReadTokenLines(ref);
    BleuResult b = WithPath(hyp, [&] { return Bleu(h, r); });
    o << (json ? BleuJson(b) : FormatBleu(b)) << "\n";
    return kOk;
  }
};

std::optional<DevMetric> ParseMetric(const std::string &name) {
  if (name == "smatch") return DevMetric::kSmatch;
  if (name == "bleu") return DevMetric::kBleu;
  if (name == "exact") return DevMetric::kExactMatch;
  return std::nullopt;
}

struct TrainCmd {
  std::string train_src, train_tgt, dev_src, dev_tgt, external;
  std::string mock, parser_cmd, generator_cmd, parser_mailbox, generator_mailbox;
  std::string work_dir, ledger, parser_out, generator_out;
  double timeout_sec = 3600;
  bool keep_jobs = false;
  TrainingSchedule schedule;
  std::string parser_metric = "smatch", generator_metric = "bleu";
  ScopeFlags scope;
  bool no_fine_tune = false, no_vocab_filter = false;
  std::uint64_t seed = 0;

  void Register(CLI::App *app) {
    app->add_option("--train-src", train_src, "training sentences")->required();
    app->add_option("--train-tgt", train_tgt, "training AMR sequences")->required();
    app->add_option("--dev-src", dev_src, "dev sentences")->required();
    app->add_option("--dev-tgt", dev_tgt, "dev AMR sequences")->required();
    app->add_option("--external", external, "unlabeled sentences, one per line")
        ->required();
    auto *m = app->add_option("--mock", mock, "mock model for both directions: "
                                              "identity, memorize or reverse")
                  ->check(CLI::IsMember({"identity", "memorize", "reverse"}));
    app->add_option("--parser-cmd", parser_cmd,
                    "parser endpoint command; the job directory is appended");
    app->add_option("--generator-cmd", generator_cmd, "generator endpoint command");
    app->add_option("--parser-mailbox", parser_mailbox, "parser mailbox directory");
    app->add_option("--generator-mailbox", generator_mailbox,
                    "generator mailbox directory");
    app->add_option("--work-dir", work_dir, "job directories for command endpoints");
    app->add_option("--timeout-sec", timeout_sec, "per-job timeout")->capture_default_str();
    app->add_flag("--keep-jobs", keep_jobs, "keep job directories");
    app->add_option("--ledger", ledger, "ledger JSONL (default stdout)");
    app->add_option("--parser-checkpoint-out", parser_out, "write final parser checkpoint");
    app->add_option("--generator-checkpoint-out", generator_out,
                    "write final generator checkpoint");
    app->add_option("--k", schedule.k, "first sample size")->capture_default_str();
    app->add_option("--iterations", schedule.iterations, "self-training rounds")
        ->capture_default_str();
    app->add_option("--lr-initial", schedule.lr_initial_parser)->capture_default_str();
    app->add_option("--lr-pretrain", schedule.lr_pretrain)->capture_default_str();
    app->add_option("--lr-finetune", schedule.lr_finetune)->capture_default_str();
    app->add_option("--lr-decay", schedule.lr_decay)->capture_default_str();
    app->add_option("--epochs-initial", schedule.epochs_initial)->capture_default_str();
    app->add_option("--epochs-pretrain", schedule.epochs_pretrain)->capture_default_str();
    app->add_option("--epochs-finetune", schedule.epochs_finetune)->capture_default_str();
    app->add_option("--beam", schedule.beam)->capture_default_str();
    app->add_option("--batch", schedule.batch)->capture_default_str();
    app->add_option("--dropout", schedule.dropout)->capture_default_str();
    app->add_option("--parser-metric", parser_metric, "smatch, bleu or exact")
        ->check(CLI::IsMember({"smatch", "bleu", "exact"}))
        ->capture_default_str();
    app->add_option("--generator-metric", generator_metric, "smatch, bleu or exact")
        ->check(CLI::IsMember({"smatch", "bleu", "exact"}))
        ->capture_default_str();
    scope.Register(app);
    app->add_flag("--no-fine-tune", no_fine_tune,
                  "select pre-trained checkpoints without fine-tuning");
    app->add_flag("--no-vocab-filter", no_vocab_filter,
                  "sample external sentences regardless of vocabulary");
    app->add_option("--seed", seed, "seed for sampling and jobs")->capture_default_str();
    m->excludes(app->get_option("--parser-cmd"))
        ->excludes(app->get_option("--parser-mailbox"));
  }

  std::unique_ptr<Model> MakeModel(const std::string &cmd, const std::string &box,
                                   const char *role) const {
    if (!mock.empty()) return MakeMockModel(*ParseMockBehavior(mock));
    ExternalModelOptions o;
    o.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_sec * 1000));
    o.keep_jobs = keep_jobs;
    if (!cmd.empty()) {
      o.work_dir = work_dir.empty()
                       ? (std::filesystem::temp_directory_path() / "amrseq-jobs").string()
                       : work_dir;
      return MakeSubprocessModel(cmd, o);
    }
    if (!box.empty()) {
      o.work_dir = box;
      return MakeMailboxModel(box, o);
    }
    throw CLI::ValidationError(std::string("--") + role + "-cmd",
                               std::string("no ") + role +
                                   " model: give --mock, --" + role + "-cmd or --" +
                                   role + "-mailbox");
  }

  std::vector<SeqPair> Pairs(const std::string &src, const std::string &tgt) const {
    std::vector<Tokens> s = ReadTokenLines(src), t = ReadTokenLines(tgt);
    if (s.size() != t.size()) {
      FailAt(ErrorCode::kLengthMismatch, tgt, std::nullopt,
             std::to_string(t.size()) + " lines against " + std::to_string(s.size()) +
                 " in " + src);
    }
    std::vector<SeqPair> out;
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s[i], t[i]});
    return out;
  }

  int Run(std::ostream &o, std::ostream &err) const {
    std::unique_ptr<Model> parser = MakeModel(parser_cmd, parser_mailbox, "parser");
    std::unique_ptr<Model> generator =
        MakeModel(generator_cmd, generator_mailbox, "generator");
    PairedData data{Pairs(train_src, train_tgt), Pairs(dev_src, dev_tgt)};
    std::vector<std::string> pool = ReadTextLines(external);
    HarnessOptions options;
    options.parser_metric = *ParseMetric(parser_metric);
    options.generator_metric = *ParseMetric(generator_metric);
    options.scope = scope.Scope();
    options.fine_tune = !no_fine_tune;
    options.vocabulary_filter = !no_vocab_filter;
    options.seed = seed;
    try {
      TrainingResult r = PairedTraining(data, pool, *parser, *generator, schedule, options);
      Emit(r.ledger.Text(), ledger, o);
      if (!parser_out.empty()) Emit(r.parser_checkpoint, parser_out, o);
      if (!generator_out.empty()) Emit(r.generator_checkpoint, generator_out, o);
      char buf[128];
      std::snprintf(buf, sizeof buf, "parser dev %.4f generator dev %.4f\n",
                    r.parser_dev, r.generator_dev);
      err << buf;
      return kOk;
    } catch (const TrainingFailure &f) {
      Emit(f.ledger().Text(), ledger, o);
      err << "amrseq: training failed during " << f.what() << "\n";
      try {
        std::rethrow_exception(f.cause());
      } catch (const Error &e) {
        return IsModelError(e.code()) ? kModelError : kDataError;
      } catch (...) {
        return kModelError;
      }
    }
  }
};

}  // namespace

int Run(const std::vector<std::string> &raw_args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Sequence-to-sequence AMR data pipeline, metrics and training harness",
               "amrseq"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_help_all_flag("--help-all", "help for every command");
  app.footer(
      "Every command accepts --config FILE: a JSON object whose keys are long "
      "flag names; explicit flags override it.\n"
      "Exit codes: 0 success, 1 usage, 2 data error, 3 model error.");

  PreprocessCmd preprocess;
  LinearizeCmd linearize;
  DelinearizeCmd delinearize;
  DeanonymizeCmd deanonymize;
  StatsOovCmd oov;
  StatsEdgeOrderCmd edge_order;
  StatsOpenClassCmd open_class;
  SampleCmd sample;
  SmatchCmd smatch;
  BleuCmd bleu;
  TrainCmd train;

  auto *pre = app.add_subcommand("preprocess", "simplify, anonymize and linearize a corpus");
  preprocess.Register(pre);
  auto *lin = app.add_subcommand("linearize", "simplify and linearize graphs");
  linearize.Register(lin);
  auto *delin = app.add_subcommand("delinearize", "token sequences back to Penman");
  delinearize.Register(delin);
  auto *dean = app.add_subcommand("deanonymize", "restore entity text in generated sentences");
  deanonymize.Register(dean);
  auto *stats = app.add_subcommand("stats", "corpus statistics");
  stats->require_subcommand(1);
  auto *st_oov = stats->add_subcommand("oov", "vocabulary size and OOV@1/OOV@5 table");
  oov.Register(st_oov);
  auto *st_edge = stats->add_subcommand("edge-order", "sibling edge order consistency");
  edge_order.Register(st_edge);
  auto *st_open = stats->add_subcommand("open-class", "share of entity, date and number text");
  open_class.Register(st_open);
  auto *smp = app.add_subcommand("sample", "vocabulary-filtered reservoir sample");
  sample.Register(smp);
  auto *sm = app.add_subcommand("smatch", "SMATCH between two Penman files");
  smatch.Register(sm);
  auto *bl = app.add_subcommand("bleu", "corpus BLEU");
  bleu.Register(bl);
  auto *tr = app.add_subcommand("train", "paired self-training of parser and generator");
  train.Register(tr);
  for (CLI::App *sub : {pre, lin, delin, dean, st_oov, st_edge, st_open, smp, sm, bl, tr}) {
    sub->add_option("--config", "JSON file of option values");
  }

  try {
    std::vector<std::string> args = ApplyConfig(raw_args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError &e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kUsage;
    }
    if (pre->parsed()) return preprocess.Run(out, err);
    if (lin->parsed()) return linearize.Run(out, err);
    if (delin->parsed()) return delinearize.Run(out, err);
    if (dean->parsed()) return deanonymize.Run(out, err);
    if (st_oov->parsed()) return oov.Run(out, err);
    if (st_edge->parsed()) return edge_order.Run(out, err);
    if (st_open->parsed()) return open_class.Run(out, err);
    if (smp->parsed()) return sample.Run(out, err);
    if (sm->parsed()) return smatch.Run(out, err);
    if (bl->parsed()) return bleu.Run(out, err);
    if (tr->parsed()) return train.Run(out, err);
    return kUsage;
  } catch (const CLI::ParseError &e) {
    err << "amrseq: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError &e) {
    err << "amrseq: " << e.what() << "\n";
    return IsModelError(e.code()) ? kModelError : kDataError;
  } catch (const Error &e) {
    err << "amrseq: " << e.what() << "\n";
    return IsModelError(e.code()) ? kModelError : kDataError;
  } catch (const std::exception &e) {
    err << "amrseq: " << e.what() << "\n";
    return kDataError;
  }
}

}  // namespace amr::cli
