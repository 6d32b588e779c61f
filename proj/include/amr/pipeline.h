#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amr/anonymize.h"
#include "amr/entity_registry.h"
#include "amr/linearize.h"
#include "amr/penman.h"
#include "amr/simplified.h"

namespace amr {

enum class OrderKind { kHuman, kGlobalRandom, kRandom };

std::optional<OrderKind> ParseOrderKind(std::string_view name);
std::string_view OrderKindName(OrderKind kind);

// Preprocessing switches. The Figure-3 style stages are
//   (a) scope_markers=false ne_clusters=false anonymization=false
//   (b) scope_markers=false ne_clusters=false
//   (c) scope_markers=false
//   (d) everything on.
struct PipelineConfig {
  SimplifyMode mode = SimplifyMode::kGeneration;
  bool scope_markers = true;
  bool ne_clusters = true;
  bool anonymization = true;
  // Bracket style used when scope_markers is on.
  ScopeMarkers scope_style = ScopeMarkers::kMultiChild;
  OrderKind order = OrderKind::kHuman;
  std::uint64_t seed = 0;

  // Clustering needs anonymized graphs and is a generation-side step.
  bool ClustersActive() const {
    return anonymization && ne_clusters && mode == SimplifyMode::kGeneration;
  }
  ScopeMarkers Scope() const {
    return scope_markers ? scope_style : ScopeMarkers::kNone;
  }
};

struct PreprocessedExample {
  std::string id;
  Tokens sentence;  // anonymized
  Tokens graph;     // linearized
  SimplifiedGraph tree;  // the tree that was linearized
  Records records;
  std::vector<std::string> unaligned;
  // Replaced spans of the original sentence.
  std::vector<std::pair<std::size_t, std::size_t>> spans;
};

// Order over every example: the global ranking is drawn once from the
// label inventory of `trees`.
LinearizationOrder BuildOrder(const PipelineConfig &config,
                              const std::vector<SimplifiedGraph> &trees);

PreprocessedExample PreprocessExample(const std::string &id,
                                      const AmrGraph &graph,
                                      const Tokens &sentence,
                                      const AlignmentSet &alignments,
                                      const PipelineConfig &config,
                                      const EntityTypeRegistry &registry,
                                      const LinearizationOrder &order);

struct PreprocessInput {
  std::string id;
  AmrGraph graph;
  Tokens sentence;
  AlignmentSet alignments;
};

// Errors are rethrown with an "example ID: " prefix.
std::vector<PreprocessedExample> PreprocessCorpus(
    const std::vector<PreprocessInput> &inputs, const PipelineConfig &config,
    const EntityTypeRegistry &registry);

// Sequence back to a full AMR graph, re-expanding anonymized entities.
struct Reconstructed {
  AmrGraph graph;
  SimplifiedGraph tree;
  RepairReport repairs;
  std::vector<std::string> unmatched;
};

Reconstructed ReconstructGraph(const Tokens &sequence, const Records &records,
                               ScopeMarkers scope);

// JSONL of {"id", "records", "unaligned"} lines, one per example.
std::string RecordsJsonl(const std::vector<PreprocessedExample> &examples);
std::vector<std::pair<std::string, Records>> ParseRecordsJsonl(
    std::string_view text);

}  // namespace amr
