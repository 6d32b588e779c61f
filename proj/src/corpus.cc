#include "amr/corpus.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include <nlohmann/json.hpp>

#include "amr/error.h"
#include "amr/simplified.h"

namespace amr {

namespace {

using Json = nlohmann::json;

double Percent(double part, double whole) {
  return whole == 0 ? 0.0 : 100.0 * part / whole;
}

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool PathWithin(std::string_view path, std::string_view ancestor) {
  return path == ancestor ||
         (path.size() > ancestor.size() &&
          path.substr(0, ancestor.size()) == ancestor &&
          path[ancestor.size()] == '.');
}

struct Observation {
  std::pair<std::string, std::string> key;
  bool aligned;
  bool agrees;
};

class EdgeOrderCollector {
 public:
  EdgeOrderCollector(EdgeOrderStats &stats, std::vector<Observation> &obs)
      : stats_(stats), obs_(obs) {}

  void Visit(const SimplifiedGraph &node, const std::string &path,
             const AlignmentSet *alignments) {
    const std::size_t n = node.children.size();
    std::vector<std::optional<std::size_t>> position(n);
    if (alignments && n >= 2) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::string child = ChildPath(path, i);
        for (const Alignment &a : *alignments) {
          if (PathWithin(a.path, child) &&
              (!position[i] || a.start < *position[i])) {
            position[i] = a.start;
          }
        }
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::string &a = node.children[i].label;
        const std::string &b = node.children[j].label;
        if (a == b) continue;
        auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
        PairOrderCounts &c = stats_.pairs[key];
        (a < b ? c.first_before_second : c.second_before_first)++;
        const bool aligned =
            position[i] && position[j] && *position[i] != *position[j];
        obs_.push_back({key, aligned, aligned && *position[i] < *position[j]});
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      Visit(node.children[i].child, ChildPath(path, i), alignments);
    }
  }

 private:
  EdgeOrderStats &stats_;
  std::vector<Observation> &obs_;
};

}  // namespace

void Vocabulary::Add(const Tokens &tokens) {
  for (const std::string &t : tokens) {
    auto it = counts_.find(t);
    if (it == counts_.end()) {
      counts_.emplace(t, 1);
    } else {
      ++it->second;
    }
  }
  total_ += static_cast<std::int64_t>(tokens.size());
}

void Vocabulary::Merge(const Vocabulary &other) {
  for (const auto &[token, count] : other.counts_) counts_[token] += count;
  total_ += other.total_;
}

std::int64_t Vocabulary::Count(std::string_view token) const {
  auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

Vocabulary BuildVocabulary(const std::vector<Tokens> &corpus,
                           VocabularySide side, std::string built_from) {
  if (corpus.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "cannot build a vocabulary from nothing");
  }
  Vocabulary vocab(side, std::move(built_from));
  for (const Tokens &t : corpus) vocab.Add(t);
  return vocab;
}

double OovRate(const Vocabulary &train, const std::vector<Tokens> &heldout,
               std::int64_t threshold) {
  if (threshold < 1) {
    throw Error(ErrorCode::kInvalidArgument, "OOV threshold must be at least 1");
  }
  std::set<std::string_view> types;
  for (const Tokens &t : heldout) types.insert(t.begin(), t.end());
  std::size_t below = 0;
  for (std::string_view t : types) {
    if (train.Count(t) < threshold) ++below;
  }
  return Percent(static_cast<double>(below), static_cast<double>(types.size()));
}

std::set<std::string> SplitSet::Sentences() const {
  std::set<std::string> out;
  for (const auto *split : {&train, &dev, &test}) {
    for (const CorpusExample &ex : *split) out.insert(JoinTokens(ex.sentence));
  }
  return out;
}

void ValidateSplits(const SplitSet &splits) {
  std::map<std::string, std::string_view> ids;
  std::map<std::string, std::string_view> sentences;
  const std::pair<const std::vector<CorpusExample> *, std::string_view> named[] = {
      {&splits.train, "train"}, {&splits.dev, "dev"}, {&splits.test, "test"}};
  for (const auto &[split, name] : named) {
    std::set<std::string> local;
    for (const CorpusExample &ex : *split) {
      if (auto [it, fresh] = ids.emplace(ex.id, name); !fresh) {
        throw Error(ErrorCode::kInvalidArgument,
                    "example id " + ex.id + " appears in " +
                        std::string(it->second) + " and " + std::string(name));
      }
      const std::string s = JoinTokens(ex.sentence);
      if (!local.insert(s).second) continue;
      if (auto [it, fresh] = sentences.emplace(s, name); !fresh) {
        throw Error(ErrorCode::kInvalidArgument,
                    "sentence of " + ex.id + " also appears in " +
                        std::string(it->second));
      }
    }
  }
}

ExternalSampler::ExternalSampler(const Vocabulary &vocab,
                                 std::set<std::string> exclude,
                                 std::size_t target_size, std::uint64_t seed)
    : vocab_(vocab),
      exclude_(std::move(exclude)),
      target_(target_size),
      rng_(seed) {}

void ExternalSampler::Offer(std::string_view sentence) {
  if (target_ == 0) return;
  std::string normalized = NormalizeWhitespace(sentence);
  if (normalized.empty() || exclude_.count(normalized)) return;
  for (const std::string &t : SplitTokens(normalized)) {
    if (!vocab_.Contains(t)) return;
  }
  if (!seen_.insert(normalized).second) return;
  const std::size_t n = eligible_++;
  if (reservoir_.size() < target_) {
    reservoir_.emplace_back(n, std::move(normalized));
    return;
  }
  const std::uint64_t j = rng_.Below(n + 1);
  if (j < target_) reservoir_[j] = {n, std::move(normalized)};
}

SampleResult ExternalSampler::Finish() const {
  std::vector<std::pair<std::size_t, std::string>> kept = reservoir_;
  std::sort(kept.begin(), kept.end());
  SampleResult out;
  for (auto &[pos, s] : kept) out.sentences.push_back(std::move(s));
  out.insufficient = out.sentences.size() < target_;
  return out;
}

SampleResult SampleExternal(const std::vector<std::string> &stream,
                            const Vocabulary &vocab,
                            const std::set<std::string> &exclude,
                            std::size_t target_size, std::uint64_t seed) {
  ExternalSampler sampler(vocab, exclude, target_size, seed);
  for (const std::string &s : stream) sampler.Offer(s);
  return sampler.Finish();
}

std::size_t EdgeOrderStats::eligible_pairs() const {
  return static_cast<std::size_t>(std::count_if(
      pairs.begin(), pairs.end(),
      [](const auto &p) { return p.second.total() >= 2; }));
}

std::size_t EdgeOrderStats::consistent_pairs() const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [](const auto &p) {
        return p.second.total() >= 2 && p.second.consistent();
      }));
}

double EdgeOrderStats::ConsistencyPercent() const {
  return Percent(static_cast<double>(consistent_pairs()),
                 static_cast<double>(eligible_pairs()));
}

std::optional<double> EdgeOrderStats::RealizationAgreementPercent() const {
  std::int64_t aligned = 0, agreeing = 0;
  for (const auto &[key, c] : pairs) {
    if (c.consistent()) continue;
    aligned += c.aligned;
    agreeing += c.agreeing;
  }
  if (aligned == 0) return std::nullopt;
  return Percent(static_cast<double>(agreeing), static_cast<double>(aligned));
}

EdgeOrderStats ComputeEdgeOrderStats(const std::vector<AmrGraph> &graphs,
                                     const std::vector<AlignmentSet> *alignments) {
  if (alignments && alignments->size() != graphs.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                "alignments and graphs differ in length");
  }
  EdgeOrderStats stats;
  std::vector<Observation> obs;
  EdgeOrderCollector collector(stats, obs);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    collector.Visit(SimplifyGraph(graphs[i], SimplifyMode::kParsing), "0",
                    alignments ? &(*alignments)[i] : nullptr);
  }
  for (const Observation &o : obs) {
    if (!o.aligned) continue;
    PairOrderCounts &c = stats.pairs[o.key];
    ++c.aligned;
    if (o.agrees) ++c.agreeing;
  }
  return stats;
}

double OpenClassStats::TokenPercent() const {
  return Percent(static_cast<double>(open_class_tokens),
                 static_cast<double>(tokens));
}
double OpenClassStats::TypePercent() const {
  return Percent(static_cast<double>(open_class_types),
                 static_cast<double>(types));
}
double OpenClassStats::RarePercent() const {
  return Percent(static_cast<double>(rare_open_class_types),
                 static_cast<double>(open_class_types));
}

OpenClassStats ComputeOpenClassStats(const std::vector<SentenceSpans> &input) {
  OpenClassStats stats;
  std::map<std::string, std::int64_t> counts;
  std::set<std::string> open;
  for (const SentenceSpans &s : input) {
    std::vector<bool> covered(s.sentence.size(), false);
    for (const auto &[start, end] : s.spans) {
      for (std::size_t i = start; i < end && i < covered.size(); ++i) {
        covered[i] = true;
      }
    }
    for (std::size_t i = 0; i < s.sentence.size(); ++i) {
      ++counts[s.sentence[i]];
      ++stats.tokens;
      if (covered[i]) {
        ++stats.open_class_tokens;
        open.insert(s.sentence[i]);
      }
    }
  }
  stats.types = counts.size();
  stats.open_class_types = open.size();
  for (const std::string &t : open) {
    if (counts[t] < 5) ++stats.rare_open_class_types;
  }
  return stats;
}

std::string FormatOovTable(const std::vector<OovRow> &rows) {
  std::size_t width = 6;
  for (const OovRow &r : rows) width = std::max(width, r.name.size());
  auto pad = [](std::string s, std::size_t w, bool left) {
    if (s.size() >= w) return s;
    return left ? s + std::string(w - s.size(), ' ')
                : std::string(w - s.size(), ' ') + s;
  };
  std::string out = pad("Corpus", width, true) + "  " + pad("Vocab", 8, false) +
                    "  " + pad("OOV@1", 6, false) + "  " +
                    pad("OOV@5", 6, false) + "\n";
  for (const OovRow &r : rows) {
    out += pad(r.name, width, true) + "  " +
           pad(std::to_string(r.vocab_size), 8, false) + "  " +
           pad(Fixed(r.oov1, 1), 6, false) + "  " + pad(Fixed(r.oov5, 1), 6, false) +
           "\n";
  }
  return out;
}

std::string OovTableJson(const std::vector<OovRow> &rows) {
  Json arr = Json::array();
  for (const OovRow &r : rows) {
    arr.push_back({{"corpus", r.name},
                   {"vocab_size", r.vocab_size},
                   {"oov1", r.oov1},
                   {"oov5", r.oov5}});
  }
  return Json{{"oov", std::move(arr)}}.dump(2) + "\n";
}

std::string FormatEdgeOrderReport(const EdgeOrderStats &stats) {
  std::string out;
  out += "label pairs observed:     " + std::to_string(stats.pairs.size()) + "\n";
  out += "pairs seen at least twice: " + std::to_string(stats.eligible_pairs()) +
         "\n";
  out += "always same order:        " + std::to_string(stats.consistent_pairs()) +
         " (" + Fixed(stats.ConsistencyPercent(), 1) + "%)\n";
  if (std::optional<double> r = stats.RealizationAgreementPercent()) {
    out += "variable pairs matching sentence order: " + Fixed(*r, 1) + "%\n";
  }
  return out;
}

std::string EdgeOrderJson(const EdgeOrderStats &stats) {
  Json pairs = Json::array();
  for (const auto &[key, c] : stats.pairs) {
    pairs.push_back({{"first", key.first},
                     {"second", key.second},
                     {"first_before_second", c.first_before_second},
                     {"second_before_first", c.second_before_first},
                     {"consistent", c.consistent()},
                     {"aligned", c.aligned},
                     {"agreeing", c.agreeing}});
  }
  Json j = {{"pairs", std::move(pairs)},
            {"eligible_pairs", stats.eligible_pairs()},
            {"consistent_pairs", stats.consistent_pairs()},
            {"consistency_percent", stats.ConsistencyPercent()}};
  if (std::optional<double> r = stats.RealizationAgreementPercent()) {
    j["realization_agreement_percent"] = *r;
  } else {
    j["realization_agreement_percent"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace amr
