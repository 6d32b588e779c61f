#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "amr/graph.h"
#include "amr/simplified.h"
#include "amr/text.h"

namespace amr {

inline constexpr std::string_view kOpenScope = "(";
inline constexpr std::string_view kCloseScope = ")";
inline constexpr std::string_view kUnknownConcept = "amr-unknown";
inline constexpr std::string_view kAttachLabel = ":mod";

// Which nodes get wrapped in scope markers.
enum class ScopeMarkers {
  // Nodes with two or more children, root included.
  kMultiChild,
  // Every non-root node with at least one child; root is an implicit
  // scope. Unlike kMultiChild this rendering is injective.
  kNonLeaf,
  // No markers at all.
  kNone,
};

// Child visitation order for linearization.
class LinearizationOrder {
 public:
  enum class Kind { kHuman, kGlobalRandom, kRandom };

  // Authored child order.
  static LinearizationOrder Human();
  // One edge-label ranking shared by every example.
  static LinearizationOrder GlobalRandom(std::vector<std::string> ranking);
  // A fresh label ranking per example, derived from (seed, example id).
  static LinearizationOrder Random(std::uint64_t seed);

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<std::string> &ranking() const { return ranking_; }

  // Label ranking that applies to one example. Empty for Human.
  std::vector<std::string> RankingFor(const SimplifiedGraph &tree,
                                      std::string_view example_id) const;

 private:
  LinearizationOrder(Kind kind, std::uint64_t seed,
                     std::vector<std::string> ranking)
      : kind_(kind), seed_(seed), ranking_(std::move(ranking)) {}

  Kind kind_;
  std::uint64_t seed_;
  std::vector<std::string> ranking_;
};

// Deterministic permutation of the distinct labels in `inventory`; the
// same (inventory, seed) gives the same order on every platform. Throws
// Error(kEmptyInventory).
LinearizationOrder MakeGlobalOrder(const std::vector<std::string> &inventory,
                                   std::uint64_t seed);

// Sorted distinct edge labels of a set of trees.
std::vector<std::string> LabelInventory(
    const std::vector<SimplifiedGraph> &trees);

struct LinearizeOptions {
  ScopeMarkers scope = ScopeMarkers::kMultiChild;
  // Seeds the Random order; ignored by the others.
  std::string example_id;
};

// Pre-order rendering: a node emits its concept, an edge its label followed
// by the rendered child. Children with equal rank keep authored order.
Tokens Linearize(const SimplifiedGraph &tree, const LinearizationOrder &order,
                 const LinearizeOptions &options = {});

// Repairs applied while reading a token sequence.
struct RepairReport {
  // ")" added at the end for scopes left open.
  int inserted_close = 0;
  // ")" with no open scope.
  int dropped_close = 0;
  // "(" that did not precede a concept and was discarded.
  int dropped_open = 0;
  // "(" after a concept instead of an edge label; reopened that concept.
  int misplaced_open = 0;
  // Labels with no concept after them received kUnknownConcept.
  int placeholder_concepts = 0;
  // Concepts with no label in front attached via kAttachLabel.
  int attached_concepts = 0;
  // Extra children given to an unscoped root.
  int root_overflow = 0;

  bool clean() const {
    return inserted_close == 0 && dropped_close == 0 && dropped_open == 0 &&
           misplaced_open == 0 && placeholder_concepts == 0 &&
           attached_concepts == 0 && root_overflow == 0;
  }
  int total() const {
    return inserted_close + dropped_close + dropped_open + misplaced_open +
           placeholder_concepts + attached_concepts + root_overflow;
  }
};

struct DelinearizeResult {
  SimplifiedGraph tree;
  RepairReport repairs;
};

// Reads any token list back into a tree. Malformed input is repaired, never
// rejected. Under kMultiChild an open scope collects every following label
// until it closes, so a single-child node nested in a scope reads back as
// a sibling (that rendering does not distinguish the two).
DelinearizeResult Delinearize(const Tokens &tokens,
                              ScopeMarkers scope = ScopeMarkers::kMultiChild);

// Restores variables and instance-of. Fresh variables are the concept's
// first letter, then the letter plus 2, 3, ...; non-root leaves that are
// numbers, quoted strings, "-" or "+" become constants. Re-entrancy lost
// during simplification is not recovered.
AmrGraph ToFullAmr(const SimplifiedGraph &tree);

}  // namespace amr
