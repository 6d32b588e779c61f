#include "support/oracles.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "amr/text.h"

namespace amr::testing {

namespace {

using Key = std::tuple<std::string, std::string, std::string>;

// Variables are written as "#<index into vars>", constants as "=literal".
std::vector<Key> Encode(const AmrGraph &g, std::vector<std::string> &vars) {
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    if (!g.nodes()[i].is_constant) {
      slot[i] = vars.size();
      vars.push_back(g.nodes()[i].variable);
    }
  }
  auto ref = [&](NodeId id) {
    const Node &n = g.node(id);
    return n.is_constant ? "=" + n.concept_name : "#" + std::to_string(slot[id.index]);
  };
  std::vector<Key> out;
  for (std::size_t i = 0; i < g.nodes().size(); ++i) {
    const Node &n = g.nodes()[i];
    if (n.is_constant) continue;
    std::string concept_label = n.concept_name;
    if (n.sense) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "-%02d", *n.sense);
      concept_label += buf;
    }
    out.emplace_back(ref(NodeId{i}), "instance", concept_label);
  }
  for (const Edge &e : g.edges()) {
    if (e.inverted) {
      out.emplace_back(ref(e.target), e.label, ref(e.source));
    } else {
      out.emplace_back(ref(e.source), e.label, ref(e.target));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Rename(const std::string &s, const std::vector<int> &map) {
  if (s.empty() || s[0] != '#') return s;
  const int to = map[std::stoul(s.substr(1))];
  return to < 0 ? "unmapped" + s : "#" + std::to_string(to);
}

}  // namespace

std::int64_t TripleCount(const AmrGraph &graph) {
  std::vector<std::string> vars;
  return static_cast<std::int64_t>(Encode(graph, vars).size());
}

std::int64_t SmatchOracleMatched(const AmrGraph &gold, const AmrGraph &pred) {
  std::vector<std::string> gv, pv;
  const std::vector<Key> g = Encode(gold, gv);
  const std::vector<Key> p = Encode(pred, pv);
  const std::set<Key> pset(p.begin(), p.end());
  std::int64_t best = 0;
  std::vector<int> map(gv.size(), -1);
  std::vector<bool> used(pv.size(), false);
  const std::size_t want = std::min(gv.size(), pv.size());
  auto score = [&] {
    std::int64_t n = 0;
    for (const auto &[s, r, o] : g) {
      n += pset.count({Rename(s, map), r, Rename(o, map)});
    }
    return n;
  };
  auto rec = [&](auto &self, std::size_t at, std::size_t mapped) -> void {
    if (at == gv.size()) {
      if (mapped == want) best = std::max(best, score());
      return;
    }
    // Leave this gold variable out only if enough remain to fill `want`.
    if (gv.size() - at - 1 >= want - mapped) self(self, at + 1, mapped);
    for (std::size_t j = 0; j < pv.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      map[at] = static_cast<int>(j);
      self(self, at + 1, mapped + 1);
      map[at] = -1;
      used[j] = false;
    }
  };
  rec(rec, 0, 0);
  return best;
}

SimplifiedGraph MergeNameOps(const SimplifiedGraph &tree) {
  SimplifiedGraph out{tree.concept_name, {}};
  if (tree.concept_name == "name") {
    std::vector<std::pair<int, std::string>> ops;
    for (const SimplifiedEdge &e : tree.children) {
      if (e.label.rfind(":op", 0) == 0 && e.child.children.empty()) {
        ops.emplace_back(std::stoi(e.label.substr(3)), Unquote(e.child.concept_name));
      } else {
        out.children.push_back({e.label, MergeNameOps(e.child)});
      }
    }
    std::sort(ops.begin(), ops.end());
    std::string joined;
    for (const auto &[k, v] : ops) joined += (joined.empty() ? "" : " ") + v;
    if (!ops.empty()) out.children.push_back({":op1", {"\"" + joined + "\"", {}}});
    return out;
  }
  for (const SimplifiedEdge &e : tree.children) {
    out.children.push_back({e.label, MergeNameOps(e.child)});
  }
  return out;
}

std::size_t ExpectedBrackets(const SimplifiedGraph &tree) {
  std::size_t n = tree.children.size() >= 2 ? 2 : 0;
  for (const SimplifiedEdge &e : tree.children) n += ExpectedBrackets(e.child);
  return n;
}

}  // namespace amr::testing
