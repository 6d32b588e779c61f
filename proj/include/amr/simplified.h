#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "amr/graph.h"

namespace amr {

struct SimplifiedEdge;

// Variable-free AMR tree: every node is a concept, every edge a rendered
// role label (inverse roles keep their "-of" suffix). Re-entrant mentions
// appear as childless copies of the referenced concept.
struct SimplifiedGraph {
  std::string concept_name;
  std::vector<SimplifiedEdge> children;

  bool operator==(const SimplifiedGraph &) const;
  bool empty() const { return concept_name.empty() && children.empty(); }
};

struct SimplifiedEdge {
  std::string label;
  SimplifiedGraph child;

  bool operator==(const SimplifiedEdge &) const = default;
};

inline bool SimplifiedGraph::operator==(const SimplifiedGraph &other) const {
  return concept_name == other.concept_name && children == other.children;
}

enum class SimplifyMode { kParsing, kGeneration };

// Drops variables and instance-of, copies concepts for re-entrant mentions
// (first visit in authored order keeps the subtree) and, for generation
// only, strips sense suffixes. Child order is preserved.
SimplifiedGraph SimplifyGraph(const AmrGraph &graph, SimplifyMode mode);

std::size_t NodeCount(const SimplifiedGraph &tree);

// Compact bracketed rendering for diagnostics and test failure messages,
// e.g. "want :ARG0 (boy) :ARG1 (go :ARG0 (boy))".
std::string DebugString(const SimplifiedGraph &tree);

// Node addresses: "0" is the root, "0.2" its third child, and so on.
std::string ChildPath(std::string_view parent, std::size_t child_index);

// Nullptr when the path does not name a node.
const SimplifiedGraph *FindPath(const SimplifiedGraph &tree,
                                std::string_view path);

// True when the trees are equal up to the order of siblings.
bool IsomorphicUnordered(const SimplifiedGraph &a, const SimplifiedGraph &b);

}  // namespace amr
