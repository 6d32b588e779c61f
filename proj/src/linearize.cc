#include "amr/linearize.h"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>

#include "amr/error.h"
#include "amr/random.h"

namespace amr {

namespace {

void CollectLabels(const SimplifiedGraph &tree, std::set<std::string> &out) {
  for (const SimplifiedEdge &e : tree.children) {
    out.insert(e.label);
    CollectLabels(e.child, out);
  }
}

class Renderer {
 public:
  Renderer(const std::vector<std::string> &ranking, ScopeMarkers scope)
      : scope_(scope) {
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      rank_.emplace(ranking[i], i);
    }
  }

  void Render(const SimplifiedGraph &node, bool is_root, Tokens &out) const {
    const std::size_t n = node.children.size();
    bool wrap = false;
    switch (scope_) {
      case ScopeMarkers::kMultiChild: wrap = n >= 2; break;
      case ScopeMarkers::kNonLeaf: wrap = !is_root && n >= 1; break;
      case ScopeMarkers::kNone: break;
    }
    if (wrap) out.emplace_back(kOpenScope);
    out.push_back(node.concept_name);
    for (std::size_t i : ChildOrder(node)) {
      const SimplifiedEdge &e = node.children[i];
      out.push_back(e.label);
      Render(e.child, false, out);
    }
    if (wrap) out.emplace_back(kCloseScope);
  }

 private:
  std::vector<std::size_t> ChildOrder(const SimplifiedGraph &node) const {
    std::vector<std::size_t> order(node.children.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    if (rank_.empty()) return order;
    auto rank_of = [&](std::size_t i) {
      auto it = rank_.find(node.children[i].label);
      return it == rank_.end() ? rank_.size() : it->second;
    };
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return rank_of(a) < rank_of(b);
                     });
    return order;
  }

  ScopeMarkers scope_;
  std::unordered_map<std::string, std::size_t> rank_;
};

// Stack-based reader. Nodes are kept flat while the structure is being
// discovered and materialized into a tree at the end.
class Reader {
 public:
  explicit Reader(ScopeMarkers scope) : scope_(scope) {}

  DelinearizeResult Read(const Tokens &tokens) {
    for (const std::string &tok : tokens) {
      if (tok == kOpenScope) {
        Open();
      } else if (tok == kCloseScope) {
        Close();
      } else if (tok.size() > 1 && tok[0] == ':') {
        Label(tok);
      } else {
        Concept(tok);
      }
    }
    Finish();
    return {Materialize(0), report_};
  }

 private:
  struct BuildNode {
    std::string concept_name;
    std::vector<std::pair<std::string, std::size_t>> children;
  };
  struct Frame {
    std::size_t node;
    bool scoped;
  };

  void Open() {
    if (open_pending_) {
      ++report_.dropped_open;
    } else if (pending_label_ || nodes_.empty()) {
      open_pending_ = true;
    } else if (!stack_.back().scoped) {
      // "(" right after a concept: treat it as that concept's scope.
      stack_.back().scoped = true;
      if (stack_.size() == 1) root_explicit_ = true;
      ++report_.misplaced_open;
    } else {
      ++report_.dropped_open;
    }
  }

  void Close() {
    if (pending_label_) Placeholder();
    if (open_pending_) {
      ++report_.dropped_open;
      open_pending_ = false;
    }
    std::optional<std::size_t> s = InnermostScope();
    if (!s) {
      ++report_.dropped_close;
      return;
    }
    if (*s == 0) {
      // The root frame is never popped.
      if (root_explicit_) {
        root_explicit_ = false;
        stack_.resize(1);
        if (scope_ != ScopeMarkers::kNonLeaf) stack_[0].scoped = false;
      } else {
        ++report_.dropped_close;
      }
      return;
    }
    stack_.resize(*s);
  }

  void Label(const std::string &label) {
    if (nodes_.empty()) {
      ++report_.placeholder_concepts;
      Attach(std::string(kUnknownConcept));
    }
    if (pending_label_) Placeholder();
    pending_label_ = label;
  }

  void Concept(const std::string &concept_name) {
    if (!nodes_.empty() && !pending_label_) {
      ++report_.attached_concepts;
      pending_label_ = std::string(kAttachLabel);
    }
    Attach(concept_name);
  }

  void Placeholder() {
    ++report_.placeholder_concepts;
    Attach(std::string(kUnknownConcept));
  }

  void Attach(std::string concept_name) {
    const std::size_t id = nodes_.size();
    nodes_.push_back({std::move(concept_name), {}});
    if (id == 0) {
      root_explicit_ = open_pending_;
      stack_.push_back({0, open_pending_ || scope_ == ScopeMarkers::kNonLeaf});
    } else {
      std::size_t parent = ParentFrame();
      nodes_[stack_[parent].node].children.emplace_back(*pending_label_, id);
      stack_.push_back({id, open_pending_});
    }
    pending_label_.reset();
    open_pending_ = false;
  }

  // Index of the frame that receives the next child; pops frames that can
  // take no more children.
  std::size_t ParentFrame() {
    if (std::optional<std::size_t> s = InnermostScope()) {
      stack_.resize(*s + 1);
      return *s;
    }
    // No open scope: each unscoped node takes a single child.
    while (stack_.size() > 1 &&
           !nodes_[stack_.back().node].children.empty()) {
      stack_.pop_back();
    }
    if (!nodes_[stack_.back().node].children.empty()) {
      ++report_.root_overflow;
    }
    return stack_.size() - 1;
  }

  std::optional<std::size_t> InnermostScope() const {
    for (std::size_t i = stack_.size(); i > 0; --i) {
      if (stack_[i - 1].scoped) return i - 1;
    }
    return std::nullopt;
  }

  void Finish() {
    if (pending_label_) Placeholder();
    if (open_pending_) {
      ++report_.dropped_open;
      open_pending_ = false;
    }
    if (nodes_.empty()) {
      ++report_.placeholder_concepts;
      Attach(std::string(kUnknownConcept));
    }
    for (std::size_t i = 1; i < stack_.size(); ++i) {
      if (stack_[i].scoped) ++report_.inserted_close;
    }
    if (root_explicit_) ++report_.inserted_close;
  }

  SimplifiedGraph Materialize(std::size_t id) const {
    SimplifiedGraph out{nodes_[id].concept_name, {}};
    for (const auto &[label, child] : nodes_[id].children) {
      out.children.push_back({label, Materialize(child)});
    }
    return out;
  }

  ScopeMarkers scope_;
  std::vector<BuildNode> nodes_;
  std::vector<Frame> stack_;
  std::optional<std::string> pending_label_;
  bool open_pending_ = false;
  // The root carries an explicit "(" that has not been closed yet.
  bool root_explicit_ = false;
  RepairReport report_;
};

}  // namespace

LinearizationOrder LinearizationOrder::Human() {
  return LinearizationOrder(Kind::kHuman, 0, {});
}

LinearizationOrder LinearizationOrder::GlobalRandom(
    std::vector<std::string> ranking) {
  return LinearizationOrder(Kind::kGlobalRandom, 0, std::move(ranking));
}

LinearizationOrder LinearizationOrder::Random(std::uint64_t seed) {
  return LinearizationOrder(Kind::kRandom, seed, {});
}

std::vector<std::string> LinearizationOrder::RankingFor(
    const SimplifiedGraph &tree, std::string_view example_id) const {
  switch (kind_) {
    case Kind::kHuman:
      return {};
    case Kind::kGlobalRandom:
      return ranking_;
    case Kind::kRandom: {
      std::set<std::string> labels;
      CollectLabels(tree, labels);
      std::vector<std::string> ranking(labels.begin(), labels.end());
      Rng rng(MixSeed(seed_, Fnv1a64(example_id)));
      rng.Shuffle(ranking);
      return ranking;
    }
  }
  return {};
}

LinearizationOrder MakeGlobalOrder(const std::vector<std::string> &inventory,
                                   std::uint64_t seed) {
  std::set<std::string> distinct(inventory.begin(), inventory.end());
  if (distinct.empty()) {
    throw Error(ErrorCode::kEmptyInventory, "no edge labels to order");
  }
  std::vector<std::string> ranking(distinct.begin(), distinct.end());
  Rng rng(seed);
  rng.Shuffle(ranking);
  return LinearizationOrder::GlobalRandom(std::move(ranking));
}

std::vector<std::string> LabelInventory(
    const std::vector<SimplifiedGraph> &trees) {
  std::set<std::string> labels;
  for (const SimplifiedGraph &t : trees) CollectLabels(t, labels);
  return {labels.begin(), labels.end()};
}

Tokens Linearize(const SimplifiedGraph &tree, const LinearizationOrder &order,
                 const LinearizeOptions &options) {
  Tokens out;
  Renderer(order.RankingFor(tree, options.example_id), options.scope)
      .Render(tree, /*is_root=*/true, out);
  return out;
}

DelinearizeResult Delinearize(const Tokens &tokens, ScopeMarkers scope) {
  return Reader(scope).Read(tokens);
}

}  // namespace amr

namespace amr {

namespace {

bool IsConstantLiteral(std::string_view s) {
  return IsNumber(s) || s == "-" || s == "+" ||
         (s.size() >= 2 && s.front() == '"' && s.back() == '"');
}

class FullAmrBuilder {
 public:
  AmrGraph Build(const SimplifiedGraph &tree) {
    NodeId root = AddVariable(tree.concept_name);
    AddChildren(root, tree);
    return AmrGraph(std::move(nodes_), std::move(edges_), root);
  }

 private:
  void AddChildren(NodeId id, const SimplifiedGraph &tree) {
    for (const SimplifiedEdge &e : tree.children) {
      const SimplifiedGraph &child = e.child;
      if (child.children.empty() && IsConstantLiteral(child.concept_name)) {
        Node constant;
        constant.concept_name = child.concept_name;
        constant.is_constant = true;
        nodes_.push_back(std::move(constant));
        edges_.push_back({id, e.label, NodeId{nodes_.size() - 1}, false});
        continue;
      }
      NodeId child_id = AddVariable(child.concept_name);
      if (IsInverseRole(e.label)) {
        edges_.push_back(
            {id, e.label.substr(0, e.label.size() - 3), child_id, true});
      } else {
        edges_.push_back({id, e.label, child_id, false});
      }
      AddChildren(child_id, child);
    }
  }

  NodeId AddVariable(const std::string &concept_name) {
    Node node;
    std::tie(node.concept_name, node.sense) = SplitSense(concept_name);
    if (node.concept_name.empty()) node.concept_name = std::string(kUnknownConcept);
    char letter = 'x';
    for (char c : node.concept_name) {
      if (c >= 'a' && c <= 'z') { letter = c; break; }
      if (c >= 'A' && c <= 'Z') { letter = static_cast<char>(c - 'A' + 'a'); break; }
    }
    int n = ++used_[letter];
    node.variable = n == 1 ? std::string(1, letter)
                           : std::string(1, letter) + std::to_string(n);
    nodes_.push_back(std::move(node));
    return NodeId{nodes_.size() - 1};
  }

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<char, int> used_;
};

}  // namespace

AmrGraph ToFullAmr(const SimplifiedGraph &tree) {
  return FullAmrBuilder().Build(tree);
}

}  // namespace amr
