#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "amr/anonymize.h"
#include "amr/simplified.h"
#include "amr/text.h"

namespace amr {

// A generated sentence/graph pair with gold alignments and NER spans.
struct SyntheticExample {
  std::string id;
  Tokens sentence;
  SimplifiedGraph tree;  // parsing-mode simplification of the graph
  AlignmentSet alignments;
  std::vector<NerSpan> ner;
};

struct SyntheticOptions {
  std::size_t examples = 200;
  std::uint64_t seed = 1;
  std::string id_prefix = "synth";
};

// Deterministic for a given seed. Entity names within one example are
// distinct, so every (type, name) pair has a single surface.
std::vector<SyntheticExample> MakeSyntheticCorpus(const SyntheticOptions &options);

// Penman document with "# ::id" and "# ::snt" metadata.
std::string SyntheticAmrDocument(const std::vector<SyntheticExample> &examples);
std::string SyntheticAlignmentsJsonl(const std::vector<SyntheticExample> &examples);
std::string SyntheticNerJsonl(const std::vector<SyntheticExample> &examples);

// Unlabeled sentences drawn from the same generator, one per line.
std::vector<std::string> SyntheticSentences(std::size_t count,
                                            std::uint64_t seed);

}  // namespace amr
