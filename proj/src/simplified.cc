#include "amr/simplified.h"

#include <algorithm>
#include <charconv>

namespace amr {

namespace {

class Simplifier {
 public:
  Simplifier(const AmrGraph &graph, SimplifyMode mode)
      : graph_(graph), mode_(mode), expanded_(graph.nodes().size(), false) {}

  SimplifiedGraph Visit(NodeId id) {
    expanded_[id.index] = true;
    SimplifiedGraph out{ConceptOf(id), {}};
    for (std::size_t ei : graph_.OutgoingEdges(id)) {
      const Edge &e = graph_.edges()[ei];
      const Node &target = graph_.node(e.target);
      SimplifiedGraph child =
          (target.is_constant || expanded_[e.target.index])
              ? SimplifiedGraph{ConceptOf(e.target), {}}
              : Visit(e.target);
      out.children.push_back({e.RenderedLabel(), std::move(child)});
    }
    return out;
  }

 private:
  std::string ConceptOf(NodeId id) const {
    const Node &n = graph_.node(id);
    if (n.is_constant || mode_ == SimplifyMode::kGeneration) {
      return n.concept_name;
    }
    return n.Label();
  }

  const AmrGraph &graph_;
  SimplifyMode mode_;
  std::vector<bool> expanded_;
};

void AppendDebug(const SimplifiedGraph &tree, std::string &out) {
  out += tree.concept_name;
  for (const SimplifiedEdge &e : tree.children) {
    out += ' ';
    out += e.label;
    out += " (";
    AppendDebug(e.child, out);
    out += ')';
  }
}

// Canonical string that sorts children recursively.
std::string CanonicalForm(const SimplifiedGraph &tree) {
  std::vector<std::string> parts;
  for (const SimplifiedEdge &e : tree.children) {
    parts.push_back(e.label + "(" + CanonicalForm(e.child) + ")");
  }
  std::sort(parts.begin(), parts.end());
  std::string out = tree.concept_name;
  for (const std::string &p : parts) out += p;
  return out;
}

}  // namespace

SimplifiedGraph SimplifyGraph(const AmrGraph &graph, SimplifyMode mode) {
  return Simplifier(graph, mode).Visit(graph.root());
}

std::size_t NodeCount(const SimplifiedGraph &tree) {
  std::size_t n = 1;
  for (const SimplifiedEdge &e : tree.children) n += NodeCount(e.child);
  return n;
}

std::string DebugString(const SimplifiedGraph &tree) {
  std::string out;
  AppendDebug(tree, out);
  return out;
}

std::string ChildPath(std::string_view parent, std::size_t child_index) {
  return std::string(parent) + "." + std::to_string(child_index);
}

const SimplifiedGraph *FindPath(const SimplifiedGraph &tree,
                                std::string_view path) {
  if (path.empty() || path[0] != '0') return nullptr;
  const SimplifiedGraph *at = &tree;
  std::size_t pos = 1;
  while (pos < path.size()) {
    if (path[pos] != '.') return nullptr;
    ++pos;
    std::size_t index = 0;
    auto [end, ec] =
        std::from_chars(path.data() + pos, path.data() + path.size(), index);
    if (ec != std::errc() || end == path.data() + pos) return nullptr;
    pos = static_cast<std::size_t>(end - path.data());
    if (index >= at->children.size()) return nullptr;
    at = &at->children[index].child;
  }
  return at;
}

bool IsomorphicUnordered(const SimplifiedGraph &a, const SimplifiedGraph &b) {
  return CanonicalForm(a) == CanonicalForm(b);
}

}  // namespace amr
