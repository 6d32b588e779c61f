#include "amr/pipeline.h"

#include <nlohmann/json.hpp>

#include "amr/error.h"

namespace amr {

std::optional<OrderKind> ParseOrderKind(std::string_view name) {
  if (name == "human") return OrderKind::kHuman;
  if (name == "global-random") return OrderKind::kGlobalRandom;
  if (name == "random") return OrderKind::kRandom;
  return std::nullopt;
}

std::string_view OrderKindName(OrderKind kind) {
  switch (kind) {
    case OrderKind::kHuman: return "human";
    case OrderKind::kGlobalRandom: return "global-random";
    case OrderKind::kRandom: return "random";
  }
  return "human";
}

LinearizationOrder BuildOrder(const PipelineConfig &config,
                              const std::vector<SimplifiedGraph> &trees) {
  switch (config.order) {
    case OrderKind::kHuman:
      return LinearizationOrder::Human();
    case OrderKind::kRandom:
      return LinearizationOrder::Random(config.seed);
    case OrderKind::kGlobalRandom:
      return MakeGlobalOrder(LabelInventory(trees), config.seed);
  }
  return LinearizationOrder::Human();
}

namespace {

struct GraphSide {
  SimplifiedGraph tree;
  Records records;
};

GraphSide AnonymizeTree(const AmrGraph &graph, const PipelineConfig &config,
                        const EntityTypeRegistry &registry) {
  GraphSide out{SimplifyGraph(graph, config.mode), {}};
  if (!config.anonymization) return out;
  AnonymizedGraph ne = AnonymizeGraph(out.tree, registry);
  AnonymizedGraph dates = AnonymizeDates(ne.tree);
  out.tree = std::move(dates.tree);
  out.records = std::move(ne.records);
  out.records.insert(out.records.end(), dates.records.begin(),
                     dates.records.end());
  if (config.ClustersActive()) {
    out.tree = ClusterEntities(out.tree, out.records, registry);
  }
  return out;
}

PreprocessedExample Finish(const std::string &id, GraphSide side,
                           const Tokens &sentence,
                           const AlignmentSet &alignments,
                           const PipelineConfig &config,
                           const LinearizationOrder &order) {
  PreprocessedExample ex;
  ex.id = id;
  if (config.anonymization) {
    AnonymizedSentence s = AnonymizeSentence(sentence, alignments, side.records);
    ex.sentence = std::move(s.tokens);
    ex.unaligned = std::move(s.unaligned);
    ex.spans = std::move(s.spans);
  } else {
    ex.sentence = sentence;
  }
  LinearizeOptions options;
  options.scope = config.Scope();
  options.example_id = id;
  ex.graph = Linearize(side.tree, order, options);
  ex.tree = std::move(side.tree);
  ex.records = std::move(side.records);
  return ex;
}

}  // namespace

PreprocessedExample PreprocessExample(const std::string &id,
                                      const AmrGraph &graph,
                                      const Tokens &sentence,
                                      const AlignmentSet &alignments,
                                      const PipelineConfig &config,
                                      const EntityTypeRegistry &registry,
                                      const LinearizationOrder &order) {
  return Finish(id, AnonymizeTree(graph, config, registry), sentence,
                alignments, config, order);
}

std::vector<PreprocessedExample> PreprocessCorpus(
    const std::vector<PreprocessInput> &inputs, const PipelineConfig &config,
    const EntityTypeRegistry &registry) {
  std::vector<GraphSide> sides;
  std::vector<SimplifiedGraph> trees;
  auto tagged = [](const std::string &id, auto &&step) {
    try {
      step();
    } catch (const Error &e) {
      throw Error(e.code(), "example " + id + ": " + e.what());
    }
  };
  for (const PreprocessInput &in : inputs) {
    tagged(in.id, [&] { sides.push_back(AnonymizeTree(in.graph, config, registry)); });
    trees.push_back(sides.back().tree);
  }
  const LinearizationOrder order = BuildOrder(config, trees);
  std::vector<PreprocessedExample> out;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    tagged(inputs[i].id, [&] {
      out.push_back(Finish(inputs[i].id, std::move(sides[i]), inputs[i].sentence,
                           inputs[i].alignments, config, order));
    });
  }
  return out;
}

Reconstructed ReconstructGraph(const Tokens &sequence, const Records &records,
                               ScopeMarkers scope) {
  DelinearizeResult d = Delinearize(sequence, scope);
  RecoveredGraph r = RecoverAmrEntities(d.tree, records);
  Reconstructed out{ToFullAmr(r.tree), std::move(r.tree), d.repairs,
                    std::move(r.unmatched)};
  return out;
}

std::string RecordsJsonl(const std::vector<PreprocessedExample> &examples) {
  std::string out;
  for (const PreprocessedExample &ex : examples) {
    nlohmann::json line = {{"id", ex.id},
                           {"records", nlohmann::json::parse(RecordsToJson(ex.records))},
                           {"unaligned", ex.unaligned}};
    out += line.dump() + "\n";
  }
  return out;
}

std::vector<std::pair<std::string, Records>> ParseRecordsJsonl(
    std::string_view text) {
  std::vector<std::pair<std::string, Records>> out;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (NormalizeWhitespace(line).empty()) continue;
    try {
      nlohmann::json j = nlohmann::json::parse(line);
      out.emplace_back(j.at("id").get<std::string>(),
                       RecordsFromJson(j.at("records").dump()));
    } catch (const std::exception &ex) {
      throw Error(ErrorCode::kFormat,
                  "line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace amr
