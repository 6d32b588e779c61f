#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "amr/anonymize.h"
#include "amr/graph.h"
#include "amr/random.h"
#include "amr/text.h"

namespace amr {

enum class VocabularySide { kNl, kAmr };

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(VocabularySide side, std::string built_from)
      : side_(side), built_from_(std::move(built_from)) {}

  void Add(const Tokens &tokens);
  void Merge(const Vocabulary &other);

  std::int64_t Count(std::string_view token) const;
  bool Contains(std::string_view token) const { return Count(token) > 0; }
  std::size_t size() const { return counts_.size(); }
  std::int64_t total() const { return total_; }

  VocabularySide side() const { return side_; }
  const std::string &built_from() const { return built_from_; }
  const std::map<std::string, std::int64_t, std::less<>> &counts() const {
    return counts_;
  }

  bool operator==(const Vocabulary &) const = default;

 private:
  VocabularySide side_ = VocabularySide::kNl;
  std::string built_from_;
  std::map<std::string, std::int64_t, std::less<>> counts_;
  std::int64_t total_ = 0;
};

// Throws Error(kEmptyCorpus) when `corpus` has no sequences.
Vocabulary BuildVocabulary(const std::vector<Tokens> &corpus,
                           VocabularySide side = VocabularySide::kNl,
                           std::string built_from = "");

// Percentage of held-out token types whose training count is below
// `threshold`. Zero for an empty held-out set.
double OovRate(const Vocabulary &train, const std::vector<Tokens> &heldout,
               std::int64_t threshold);

struct CorpusExample {
  std::string id;
  Tokens sentence;
  AmrGraph graph;
};

struct SplitSet {
  std::vector<CorpusExample> train, dev, test;

  // Whitespace-normalized sentences from every split.
  std::set<std::string> Sentences() const;
};

// Throws Error(kInvalidArgument) on an id repeated across splits or a
// sentence shared by two splits.
void ValidateSplits(const SplitSet &splits);

struct SampleResult {
  std::vector<std::string> sentences;  // stream order
  bool insufficient = false;
};

// Single-pass reservoir sampler over a sentence stream. Candidates must be
// fully in-vocabulary, absent from `exclude` and new; duplicates are judged
// on the whitespace-normalized string.
class ExternalSampler {
 public:
  ExternalSampler(const Vocabulary &vocab, std::set<std::string> exclude,
                  std::size_t target_size, std::uint64_t seed);

  void Offer(std::string_view sentence);
  SampleResult Finish() const;

  std::size_t eligible() const { return eligible_; }

 private:
  const Vocabulary &vocab_;
  std::set<std::string> exclude_;
  std::size_t target_;
  Rng rng_;
  std::unordered_set<std::string> seen_;
  std::size_t eligible_ = 0;
  // (stream position, sentence)
  std::vector<std::pair<std::size_t, std::string>> reservoir_;
};

SampleResult SampleExternal(const std::vector<std::string> &stream,
                            const Vocabulary &vocab,
                            const std::set<std::string> &exclude,
                            std::size_t target_size, std::uint64_t seed);

struct PairOrderCounts {
  std::int64_t first_before_second = 0;  // pair key order: first < second
  std::int64_t second_before_first = 0;
  // Observations of this pair whose children were both aligned, and how
  // many of those matched the sentence order.
  std::int64_t aligned = 0;
  std::int64_t agreeing = 0;

  std::int64_t total() const { return first_before_second + second_before_first; }
  bool consistent() const {
    return first_before_second == 0 || second_before_first == 0;
  }
};

struct EdgeOrderStats {
  std::map<std::pair<std::string, std::string>, PairOrderCounts> pairs;

  // Pairs observed at least twice.
  std::size_t eligible_pairs() const;
  std::size_t consistent_pairs() const;
  // Percent of eligible pairs that always kept one order.
  double ConsistencyPercent() const;
  // Percent of aligned observations of inconsistent pairs whose edge order
  // matches the sentence order; nullopt with no such observations.
  std::optional<double> RealizationAgreementPercent() const;
};

// Alignments, when given, are indexed like `graphs`; paths address the
// parsing-mode simplified tree.
EdgeOrderStats ComputeEdgeOrderStats(
    const std::vector<AmrGraph> &graphs,
    const std::vector<AlignmentSet> *alignments = nullptr);

struct OpenClassStats {
  std::int64_t tokens = 0;
  std::int64_t open_class_tokens = 0;
  std::size_t types = 0;
  std::size_t open_class_types = 0;
  std::size_t rare_open_class_types = 0;  // corpus count below 5

  double TokenPercent() const;
  double TypePercent() const;
  double RarePercent() const;
};

struct SentenceSpans {
  Tokens sentence;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
};

// Share of sentence material covered by anonymized spans.
OpenClassStats ComputeOpenClassStats(const std::vector<SentenceSpans> &input);

struct OovRow {
  std::string name;
  std::size_t vocab_size = 0;
  double oov1 = 0;
  double oov5 = 0;
};

std::string FormatOovTable(const std::vector<OovRow> &rows);
std::string OovTableJson(const std::vector<OovRow> &rows);
std::string FormatEdgeOrderReport(const EdgeOrderStats &stats);
std::string EdgeOrderJson(const EdgeOrderStats &stats);

}  // namespace amr
