#include "amr/graph.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <unordered_set>

#include "amr/error.h"

namespace amr {

std::string Node::Label() const {
  if (!sense) return concept_name;
  char suffix[16];
  std::snprintf(suffix, sizeof(suffix), "-%02d", *sense);
  return concept_name + suffix;
}

std::string Edge::RenderedLabel() const {
  return inverted ? label + "-of" : label;
}

std::pair<std::string, std::optional<int>> SplitSense(
    std::string_view concept_name) {
  const std::size_t n = concept_name.size();
  if (n >= 4 && concept_name[n - 3] == '-' &&
      std::isdigit(static_cast<unsigned char>(concept_name[n - 2])) &&
      std::isdigit(static_cast<unsigned char>(concept_name[n - 1]))) {
    int sense = (concept_name[n - 2] - '0') * 10 + (concept_name[n - 1] - '0');
    return {std::string(concept_name.substr(0, n - 3)), sense};
  }
  return {std::string(concept_name), std::nullopt};
}

bool IsInverseRole(std::string_view role) {
  static const std::unordered_set<std::string_view> kCanonical = {
      ":consist-of", ":prep-out-of", ":prep-on-behalf-of"};
  return role.size() > 4 && role.substr(role.size() - 3) == "-of" &&
         !kCanonical.contains(role);
}

AmrGraph::AmrGraph(std::vector<Node> nodes, std::vector<Edge> edges,
                   NodeId root)
    : nodes_(std::move(nodes)), edges_(std::move(edges)), root_(root) {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::kMalformedGraph, what);
  };
  if (root_.index >= nodes_.size()) fail("root out of range");
  if (nodes_[root_.index].is_constant) fail("root is a constant");

  std::unordered_set<std::string> variables;
  for (const Node &n : nodes_) {
    if (n.concept_name.empty()) fail("empty concept");
    if (n.is_constant) {
      if (!n.variable.empty()) fail("constant with variable " + n.variable);
      if (n.sense) fail("constant with sense");
    } else {
      if (n.variable.empty()) fail("node without variable");
      if (!variables.insert(n.variable).second) {
        fail("duplicate variable " + n.variable);
      }
    }
  }

  outgoing_.assign(nodes_.size(), {});
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge &e = edges_[i];
    if (e.source.index >= nodes_.size() || e.target.index >= nodes_.size()) {
      fail("edge endpoint out of range");
    }
    if (e.label.size() < 2 || e.label[0] != ':') fail("bad label " + e.label);
    if (nodes_[e.source.index].is_constant) fail("edge leaves a constant");
    if (e.inverted && nodes_[e.target.index].is_constant) {
      fail("inverted edge into a constant");
    }
    outgoing_[e.source.index].push_back(i);
  }

  // Reachability in traversal direction; constants must have exactly one
  // incoming edge since they carry no variable to refer back to.
  std::vector<int> incoming(nodes_.size(), 0);
  for (const Edge &e : edges_) ++incoming[e.target.index];
  std::vector<bool> seen(nodes_.size(), false);
  std::vector<std::size_t> stack = {root_.index};
  seen[root_.index] = true;
  while (!stack.empty()) {
    std::size_t at = stack.back();
    stack.pop_back();
    for (std::size_t ei : outgoing_[at]) {
      std::size_t t = edges_[ei].target.index;
      if (!seen[t]) {
        seen[t] = true;
        stack.push_back(t);
      }
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!seen[i]) fail("node " + nodes_[i].Label() + " unreachable from root");
    if (nodes_[i].is_constant && incoming[i] != 1) {
      fail("constant " + nodes_[i].concept_name + " must have one parent");
    }
  }
}

std::optional<NodeId> AmrGraph::FindVariable(std::string_view variable) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_constant && nodes_[i].variable == variable) {
      return NodeId{i};
    }
  }
  return std::nullopt;
}

std::size_t AmrGraph::VariableCount() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const Node &n) { return !n.is_constant; }));
}

bool AmrGraph::IsAcyclic() const {
  const std::size_t n = nodes_.size();
  std::vector<std::vector<std::size_t>> next(n);
  std::vector<int> indegree(n, 0);
  for (const Edge &e : edges_) {
    std::size_t from = e.inverted ? e.target.index : e.source.index;
    std::size_t to = e.inverted ? e.source.index : e.target.index;
    next[from].push_back(to);
    ++indegree[to];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t at = ready.back();
    ready.pop_back();
    ++visited;
    for (std::size_t to : next[at]) {
      if (--indegree[to] == 0) ready.push_back(to);
    }
  }
  return visited == n;
}

std::set<Triple> Triples(const AmrGraph &graph) {
  std::set<Triple> out;
  auto name = [&](NodeId id) -> const std::string & {
    const Node &n = graph.node(id);
    return n.is_constant ? n.concept_name : n.variable;
  };
  for (const Node &n : graph.nodes()) {
    if (!n.is_constant) {
      out.insert({n.variable, std::string(kInstanceRelation), n.Label()});
    }
  }
  for (const Edge &e : graph.edges()) {
    if (e.inverted) {
      out.insert({name(e.target), e.label, name(e.source)});
    } else {
      out.insert({name(e.source), e.label, name(e.target)});
    }
  }
  return out;
}

}  // namespace amr
