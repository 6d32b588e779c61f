#include "amr/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "amr/error.h"
#include "amr/random.h"

namespace amr {

namespace {

using Json = nlohmann::json;

constexpr int kUnmapped = -1;

// Variables, per-variable attribute sets and variable-variable relations of
// one graph, deduplicated the same way Triples() is.
struct MatchGraph {
  std::vector<std::string> variables;
  std::vector<std::set<std::pair<std::string, std::string>>> unary;
  std::set<std::tuple<int, std::string, int>> binary;
  std::int64_t triple_count = 0;

  explicit MatchGraph(const AmrGraph &g) {
    std::vector<int> var_of(g.nodes().size(), kUnmapped);
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
      const Node &n = g.nodes()[i];
      if (n.is_constant) continue;
      var_of[i] = static_cast<int>(variables.size());
      variables.push_back(n.variable);
      unary.push_back({{std::string(kInstanceRelation), n.Label()}});
    }
    for (const Edge &e : g.edges()) {
      NodeId from = e.inverted ? e.target : e.source;
      NodeId to = e.inverted ? e.source : e.target;
      const Node &target = g.node(to);
      if (target.is_constant) {
        unary[var_of[from.index]].insert({e.label, target.concept_name});
      } else {
        binary.insert({var_of[from.index], e.label, var_of[to.index]});
      }
    }
    for (const auto &u : unary) triple_count += static_cast<std::int64_t>(u.size());
    triple_count += static_cast<std::int64_t>(binary.size());
  }
};

class Matcher {
 public:
  Matcher(const MatchGraph &gold, const MatchGraph &pred)
      : gold_(gold), pred_(pred) {
    const std::size_t n = gold.variables.size(), m = pred.variables.size();
    unary_.assign(n, std::vector<int>(m, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        int shared = 0;
        for (const auto &attr : gold.unary[i]) shared += pred.unary[j].count(attr);
        unary_[i][j] = shared;
      }
    }
    std::unordered_map<std::string, int> relation_ids;
    auto rel = [&](const std::string &r) {
      return relation_ids.emplace(r, static_cast<int>(relation_ids.size()))
          .first->second;
    };
    for (const auto &[a, r, b] : gold.binary) gold_binary_.push_back({a, rel(r), b});
    for (const auto &[c, r, d] : pred.binary) {
      if (!relation_ids.count(r)) continue;
      pred_binary_.insert(Key(c, relation_ids[r], d));
      pred_binary_list_.push_back({c, relation_ids[r], d});
    }
    incident_.assign(n, {});
    for (std::size_t t = 0; t < gold_binary_.size(); ++t) {
      incident_[gold_binary_[t].a].push_back(t);
      if (gold_binary_[t].b != gold_binary_[t].a) {
        incident_[gold_binary_[t].b].push_back(t);
      }
    }
  }

  std::int64_t Score(const std::vector<int> &map) const {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < map.size(); ++i) {
      if (map[i] != kUnmapped) s += unary_[i][map[i]];
    }
    for (const BinaryTriple &t : gold_binary_) s += Holds(t, map);
    return s;
  }

  // Best mapping reached from `map` by greedy reassign and swap moves.
  std::int64_t Climb(std::vector<int> &map) const {
    const int n = static_cast<int>(map.size());
    const int m = static_cast<int>(pred_.variables.size());
    std::int64_t score = Score(map);
    while (true) {
      std::vector<char> used(m, 0);
      for (int v : map) {
        if (v != kUnmapped) used[v] = 1;
      }
      std::int64_t best_gain = 0;
      int best_i = -1, best_k = -1, best_target = kUnmapped;
      bool best_swap = false;
      for (int i = 0; i < n; ++i) {
        for (int j = kUnmapped; j < m; ++j) {
          if (j == map[i] || (j != kUnmapped && used[j])) continue;
          std::int64_t gain = MoveGain(map, i, j);
          if (gain > best_gain) {
            best_gain = gain;
            best_i = i;
            best_target = j;
            best_swap = false;
          }
        }
      }
      for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
          if (map[i] == map[k]) continue;
          std::int64_t gain = SwapGain(map, i, k);
          if (gain > best_gain) {
            best_gain = gain;
            best_i = i;
            best_k = k;
            best_swap = true;
          }
        }
      }
      if (best_gain <= 0) {
        // Plateau: try placing both ends of a relation at once.
        std::int64_t gain = BestPairMove(map, score);
        if (gain <= 0) return score;
        score += gain;
        continue;
      }
      if (best_swap) {
        std::swap(map[best_i], map[best_k]);
      } else {
        map[best_i] = best_target;
      }
      score += best_gain;
    }
  }

 private:
  struct BinaryTriple {
    int a, rel, b;
  };

  static std::uint64_t Key(int a, int rel, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 40) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(rel)) << 20) ^
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(b));
  }

  int Holds(const BinaryTriple &t, const std::vector<int> &map) const {
    if (map[t.a] == kUnmapped || map[t.b] == kUnmapped) return 0;
    return pred_binary_.count(Key(map[t.a], t.rel, map[t.b])) ? 1 : 0;
  }

  // Score of the triples touching the given gold variables.
  std::int64_t Local(const std::vector<int> &map, int i, int k) const {
    std::int64_t s = 0;
    if (map[i] != kUnmapped) s += unary_[i][map[i]];
    if (k >= 0 && map[k] != kUnmapped) s += unary_[k][map[k]];
    for (std::size_t t : incident_[i]) s += Holds(gold_binary_[t], map);
    if (k >= 0) {
      for (std::size_t t : incident_[k]) {
        const BinaryTriple &b = gold_binary_[t];
        if (b.a == i || b.b == i) continue;  // already counted
        s += Holds(b, map);
      }
    }
    return s;
  }

  // Applies the best move that maps a gold relation's endpoints onto a
  // predicted relation with the same label, evicting whatever held those
  // targets. Returns the gain, or 0 when nothing improves.
  std::int64_t BestPairMove(std::vector<int> &map, std::int64_t score) const {
    std::int64_t best_gain = 0;
    std::vector<int> best;
    for (const BinaryTriple &g : gold_binary_) {
      for (const BinaryTriple &p : pred_binary_list_) {
        if (p.rel != g.rel || (g.a == g.b) != (p.a == p.b)) continue;
        if (map[g.a] == p.a && map[g.b] == p.b) continue;
        std::vector<int> next = map;
        for (int &v : next) {
          if (v == p.a || v == p.b) v = kUnmapped;
        }
        next[g.a] = p.a;
        next[g.b] = p.b;
        std::int64_t gain = Score(next) - score;
        if (gain > best_gain) {
          best_gain = gain;
          best = std::move(next);
        }
      }
    }
    if (best_gain > 0) map = std::move(best);
    return best_gain;
  }

  std::int64_t MoveGain(std::vector<int> &map, int i, int j) const {
    std::int64_t before = Local(map, i, -1);
    int old = map[i];
    map[i] = j;
    std::int64_t after = Local(map, i, -1);
    map[i] = old;
    return after - before;
  }

  std::int64_t SwapGain(std::vector<int> &map, int i, int k) const {
    std::int64_t before = Local(map, i, k);
    std::swap(map[i], map[k]);
    std::int64_t after = Local(map, i, k);
    std::swap(map[i], map[k]);
    return after - before;
  }

  const MatchGraph &gold_;
  const MatchGraph &pred_;
  std::vector<std::vector<int>> unary_;
  std::vector<BinaryTriple> gold_binary_;
  std::unordered_set<std::uint64_t> pred_binary_;
  std::vector<BinaryTriple> pred_binary_list_;
  std::vector<std::vector<std::size_t>> incident_;
};

std::vector<int> SmartStart(const MatchGraph &gold, const MatchGraph &pred) {
  std::vector<int> map(gold.variables.size(), kUnmapped);
  std::vector<char> used(pred.variables.size(), 0);
  for (std::size_t i = 0; i < gold.variables.size(); ++i) {
    const auto &instance = *gold.unary[i].begin();
    for (std::size_t j = 0; j < pred.variables.size(); ++j) {
      if (!used[j] && pred.unary[j].count(instance)) {
        map[i] = static_cast<int>(j);
        used[j] = 1;
        break;
      }
    }
  }
  return map;
}

std::vector<int> RandomStart(std::size_t n, std::size_t m, Rng &rng) {
  std::vector<int> pool(m);
  std::iota(pool.begin(), pool.end(), 0);
  rng.Shuffle(pool);
  std::vector<int> map(n, kUnmapped);
  for (std::size_t i = 0; i < n && i < m; ++i) map[i] = pool[i];
  rng.Shuffle(map);
  return map;
}

SmatchResult Finish(std::int64_t matched, const MatchGraph &gold,
                    const MatchGraph &pred, const std::vector<int> &map) {
  SmatchResult r =
      SmatchResult::FromCounts(matched, gold.triple_count, pred.triple_count);
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] != kUnmapped) {
      r.best_mapping[gold.variables[i]] = pred.variables[map[i]];
    }
  }
  return r;
}

// Naive scorer for the oracle: renames gold variables through the mapping
// and intersects triple sets.
std::int64_t NaiveMatched(const AmrGraph &gold, const AmrGraph &pred,
                          const std::map<std::string, std::string> &mapping) {
  auto rename = [](const AmrGraph &g, auto &&name_of) {
    std::set<Triple> out;
    auto name = [&](NodeId id) {
      const Node &n = g.node(id);
      return n.is_constant ? "c:" + n.concept_name : name_of(n.variable);
    };
    for (std::size_t i = 0; i < g.nodes().size(); ++i) {
      const Node &n = g.nodes()[i];
      if (!n.is_constant) {
        out.insert({name(NodeId{i}), std::string(kInstanceRelation), n.Label()});
      }
    }
    for (const Edge &e : g.edges()) {
      if (e.inverted) {
        out.insert({name(e.target), e.label, name(e.source)});
      } else {
        out.insert({name(e.source), e.label, name(e.target)});
      }
    }
    return out;
  };
  std::set<Triple> g = rename(gold, [&](const std::string &v) {
    auto it = mapping.find(v);
    return it == mapping.end() ? "gold-only:" + v : "v:" + it->second;
  });
  std::set<Triple> p = rename(pred, [](const std::string &v) { return "v:" + v; });
  std::int64_t shared = 0;
  for (const Triple &t : g) shared += p.count(t);
  return shared;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

SmatchResult SmatchResult::FromCounts(std::int64_t matched, std::int64_t gold,
                                      std::int64_t pred) {
  SmatchResult r;
  r.matched = matched;
  r.gold_triples = gold;
  r.pred_triples = pred;
  r.precision = pred == 0 ? 0.0 : static_cast<double>(matched) / pred;
  r.recall = gold == 0 ? 0.0 : static_cast<double>(matched) / gold;
  const double sum = r.precision + r.recall;
  r.f1 = sum == 0 ? 0.0 : 2 * r.precision * r.recall / sum;
  return r;
}

SmatchResult Smatch(const AmrGraph &gold, const AmrGraph &pred,
                    const SmatchOptions &options) {
  if (options.exhaustive) return SmatchExhaustive(gold, pred);
  if (options.restarts < 1) {
    throw Error(ErrorCode::kInvalidArgument, "smatch needs at least one start");
  }
  MatchGraph g(gold), p(pred);
  Matcher matcher(g, p);
  Rng rng(options.seed);
  std::vector<int> best_map;
  std::int64_t best = -1;
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<int> map = r == 0 ? SmartStart(g, p)
                                  : RandomStart(g.variables.size(),
                                                p.variables.size(), rng);
    std::int64_t score = matcher.Climb(map);
    if (score > best) {
      best = score;
      best_map = map;
    }
  }
  return Finish(best, g, p, best_map);
}

SmatchResult SmatchExhaustive(const AmrGraph &gold, const AmrGraph &pred) {
  MatchGraph g(gold), p(pred);
  const std::size_t n = g.variables.size(), m = p.variables.size();
  if (n > kExhaustiveSmatchLimit || m > kExhaustiveSmatchLimit) {
    throw Error(ErrorCode::kInvalidArgument,
                "exhaustive smatch is limited to " +
                    std::to_string(kExhaustiveSmatchLimit) + " variables");
  }
  // Extra mapped pairs never lower the count, so only maximal injections
  // are enumerated: permute the larger side and pair it with the smaller.
  const bool gold_smaller = n <= m;
  std::vector<int> perm(gold_smaller ? m : n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = -1;
  std::map<std::string, std::string> best_mapping;
  std::set<std::vector<int>> tried;
  do {
    std::map<std::string, std::string> mapping;
    std::vector<int> prefix(perm.begin(), perm.begin() + std::min(n, m));
    if (!tried.insert(prefix).second) continue;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      const std::size_t gi = gold_smaller ? k : prefix[k];
      const std::size_t pj = gold_smaller ? prefix[k] : k;
      mapping[g.variables[gi]] = p.variables[pj];
    }
    std::int64_t score = NaiveMatched(gold, pred, mapping);
    if (score > best) {
      best = score;
      best_mapping = std::move(mapping);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  SmatchResult r = SmatchResult::FromCounts(std::max<std::int64_t>(best, 0),
                                            g.triple_count, p.triple_count);
  r.best_mapping = std::move(best_mapping);
  return r;
}

SmatchResult SmatchCorpus(const std::vector<AmrGraph> &gold,
                          const std::vector<AmrGraph> &pred,
                          const SmatchOptions &options) {
  if (gold.size() != pred.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(gold.size()) + " gold graphs but " +
                    std::to_string(pred.size()) + " predictions");
  }
  if (gold.empty()) throw Error(ErrorCode::kEmptyCorpus, "no graphs to score");
  std::int64_t matched = 0, g = 0, p = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    SmatchResult r = Smatch(gold[i], pred[i], options);
    matched += r.matched;
    g += r.gold_triples;
    p += r.pred_triples;
  }
  return SmatchResult::FromCounts(matched, g, p);
}

std::string FormatSmatch(const SmatchResult &r) {
  return "Prec " + Fixed(r.precision, 3) + " Rec " + Fixed(r.recall, 3) +
         " F1 " + Fixed(r.f1, 3);
}

std::string SmatchJson(const SmatchResult &r) {
  return Json{{"precision", r.precision},
              {"recall", r.recall},
              {"f1", r.f1},
              {"matched", r.matched},
              {"gold_triples", r.gold_triples},
              {"pred_triples", r.pred_triples}}
      .dump();
}

BleuResult Bleu(const std::vector<Tokens> &hypotheses,
                const std::vector<Tokens> &references) {
  if (hypotheses.size() != references.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(hypotheses.size()) + " hypotheses but " +
                    std::to_string(references.size()) + " references");
  }
  if (hypotheses.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences");
  BleuResult r;
  for (std::size_t s = 0; s < hypotheses.size(); ++s) {
    const Tokens &hyp = hypotheses[s];
    const Tokens &ref = references[s];
    r.hyp_length += static_cast<std::int64_t>(hyp.size());
    r.ref_length += static_cast<std::int64_t>(ref.size());
    for (std::size_t n = 1; n <= 4; ++n) {
      std::map<std::vector<std::string>, std::int64_t> ref_counts;
      for (std::size_t i = 0; i + n <= ref.size(); ++i) {
        ++ref_counts[{ref.begin() + i, ref.begin() + i + n}];
      }
      std::map<std::vector<std::string>, std::int64_t> hyp_counts;
      for (std::size_t i = 0; i + n <= hyp.size(); ++i) {
        ++hyp_counts[{hyp.begin() + i, hyp.begin() + i + n}];
        ++r.totals[n - 1];
      }
      for (const auto &[gram, count] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) r.matches[n - 1] += std::min(count, it->second);
      }
    }
  }
  double log_sum = 0;
  bool zero = false;
  for (int n = 0; n < 4; ++n) {
    r.precisions[n] =
        r.totals[n] == 0 ? 0.0 : static_cast<double>(r.matches[n]) / r.totals[n];
    if (r.precisions[n] == 0) {
      zero = true;
    } else {
      log_sum += std::log(r.precisions[n]);
    }
  }
  if (r.hyp_length == 0) {
    r.brevity_penalty = 0;
  } else if (r.hyp_length < r.ref_length) {
    r.brevity_penalty =
        std::exp(1.0 - static_cast<double>(r.ref_length) / r.hyp_length);
  } else {
    r.brevity_penalty = 1.0;
  }
  r.score = zero ? 0.0 : 100.0 * r.brevity_penalty * std::exp(log_sum / 4);
  return r;
}

std::string FormatBleu(const BleuResult &r) {
  const double ratio =
      r.ref_length == 0 ? 0.0 : static_cast<double>(r.hyp_length) / r.ref_length;
  std::string out = "BLEU = " + Fixed(r.score, 2) + ", ";
  for (int n = 0; n < 4; ++n) {
    if (n) out += "/";
    out += Fixed(100.0 * r.precisions[n], 1);
  }
  out += " (BP=" + Fixed(r.brevity_penalty, 3) + ", ratio=" + Fixed(ratio, 3) +
         ", hyp_len=" + std::to_string(r.hyp_length) +
         ", ref_len=" + std::to_string(r.ref_length) + ")";
  return out;
}

std::string BleuJson(const BleuResult &r) {
  return Json{{"bleu", r.score},
              {"precisions",
               {r.precisions[0], r.precisions[1], r.precisions[2], r.precisions[3]}},
              {"brevity_penalty", r.brevity_penalty},
              {"hyp_len", r.hyp_length},
              {"ref_len", r.ref_length}}
      .dump();
}

}  // namespace amr
