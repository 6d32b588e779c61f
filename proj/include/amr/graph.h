#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace amr {

struct NodeId {
  std::size_t index = 0;

  auto operator<=>(const NodeId &) const = default;
};

struct Node {
  // Empty for constants.
  std::string variable;
  // Concept without sense suffix; for constants the literal as written,
  // including quotes for strings.
  std::string concept_name;
  std::optional<int> sense;
  bool is_constant = false;

  // Concept with its sense suffix, e.g. "want-01".
  std::string Label() const;

  bool operator==(const Node &) const = default;
};

// Edges are stored in traversal (textual) direction. An inverted edge is
// rendered with an "-of" suffix and denotes the canonical triple
// (target, label, source).
struct Edge {
  NodeId source;
  std::string label;
  NodeId target;
  bool inverted = false;

  std::string RenderedLabel() const;

  bool operator==(const Edge &) const = default;
};

struct Triple {
  std::string source;
  std::string relation;
  std::string target;

  auto operator<=>(const Triple &) const = default;
};

inline constexpr std::string_view kInstanceRelation = "instance";

// Splits "want-01" into ("want", 1). Only a two-digit numeric suffix after
// a non-empty stem counts as a sense.
std::pair<std::string, std::optional<int>> SplitSense(std::string_view concept_name);

// True when a role written with an "-of" suffix denotes an inverse edge.
// Roles such as :consist-of are canonical names that merely end in "-of".
bool IsInverseRole(std::string_view role);

// Rooted, connected AMR graph. Every node is reachable from the root along
// edges in traversal direction; the edge list order is the authored child
// order. Immutable after construction.
class AmrGraph {
 public:
  // Throws Error(kMalformedGraph) when an invariant does not hold.
  AmrGraph(std::vector<Node> nodes, std::vector<Edge> edges, NodeId root);

  const std::vector<Node> &nodes() const { return nodes_; }
  const std::vector<Edge> &edges() const { return edges_; }
  NodeId root() const { return root_; }
  const Node &node(NodeId id) const { return nodes_[id.index]; }

  // Indices into edges(), in authored order.
  const std::vector<std::size_t> &OutgoingEdges(NodeId id) const {
    return outgoing_[id.index];
  }

  std::optional<NodeId> FindVariable(std::string_view variable) const;

  std::size_t VariableCount() const;

  // False when canonical-direction edges form a cycle.
  bool IsAcyclic() const;

  bool operator==(const AmrGraph &other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_ &&
           root_ == other.root_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  NodeId root_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

// Instance triples plus relation triples with inverse edges normalized to
// canonical direction. Constant targets appear as their literal.
std::set<Triple> Triples(const AmrGraph &graph);

}  // namespace amr
