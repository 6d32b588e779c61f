#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amr/graph.h"
#include "amr/text.h"

namespace amr {

struct SmatchResult {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::int64_t matched = 0;
  std::int64_t gold_triples = 0;
  std::int64_t pred_triples = 0;
  // Gold variable to predicted variable; unmapped variables are absent.
  std::map<std::string, std::string> best_mapping;

  static SmatchResult FromCounts(std::int64_t matched, std::int64_t gold,
                                 std::int64_t pred);
};

struct SmatchOptions {
  int restarts = 4;  // one concept-seeded start plus random ones
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

inline constexpr std::size_t kExhaustiveSmatchLimit = 8;

SmatchResult Smatch(const AmrGraph &gold, const AmrGraph &pred,
                    const SmatchOptions &options = {});

// Tries every maximal variable mapping. Throws Error(kInvalidArgument) when
// either graph has more than kExhaustiveSmatchLimit variables.
SmatchResult SmatchExhaustive(const AmrGraph &gold, const AmrGraph &pred);

// Micro-average over pairs. Throws Error(kLengthMismatch) and
// Error(kEmptyCorpus).
SmatchResult SmatchCorpus(const std::vector<AmrGraph> &gold,
                          const std::vector<AmrGraph> &pred,
                          const SmatchOptions &options = {});

// "Prec 0.667 Rec 0.667 F1 0.667"
std::string FormatSmatch(const SmatchResult &result);
std::string SmatchJson(const SmatchResult &result);

struct BleuResult {
  double score = 0;  // 0..100
  double precisions[4] = {0, 0, 0, 0};
  double brevity_penalty = 0;
  std::int64_t hyp_length = 0;
  std::int64_t ref_length = 0;
  std::int64_t matches[4] = {0, 0, 0, 0};
  std::int64_t totals[4] = {0, 0, 0, 0};
};

BleuResult Bleu(const std::vector<Tokens> &hypotheses,
                const std::vector<Tokens> &references);

// "BLEU = 77.88, 100.0/100.0/100.0/100.0 (BP=0.779, ratio=0.800,
// hyp_len=4, ref_len=5)"
std::string FormatBleu(const BleuResult &result);
std::string BleuJson(const BleuResult &result);

}  // namespace amr
