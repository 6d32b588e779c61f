#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amr/text.h"

namespace amr {

struct SeqPair {
  Tokens src;
  Tokens tgt;

  bool operator==(const SeqPair &) const = default;
};

struct TrainJob {
  std::string phase;  // for diagnostics, e.g. "parser.pretrain.1"
  std::vector<SeqPair> train;
  std::vector<SeqPair> dev;
  std::optional<std::string> init_checkpoint;
  double learning_rate = 1.0;
  int epochs = 1;
  double lr_decay = 0.8;
  int beam = 5;
  int batch = 100;
  double dropout = 0.5;
  std::uint64_t seed = 0;
};

struct TrainOutcome {
  std::string checkpoint;  // opaque bytes
  std::vector<double> dev_scores;  // one per epoch
};

// A sequence-to-sequence learner. Implementations must be deterministic
// for a fixed job and must return one output per input from Predict.
class Model {
 public:
  virtual ~Model() = default;
  virtual TrainOutcome Train(const TrainJob &job) = 0;
  virtual std::vector<Tokens> Predict(const std::vector<Tokens> &inputs,
                                      const std::string &checkpoint,
                                      int beam) = 0;
};

enum class MockBehavior { kIdentity, kMemorize, kReverse };

std::optional<MockBehavior> ParseMockBehavior(std::string_view name);

// Deterministic stand-ins. Dev scores are exact-match fractions. The
// memorize mock keeps a source-to-target table in its checkpoint and adds
// to the table of the initial checkpoint.
std::unique_ptr<Model> MakeMockModel(MockBehavior behavior);

double ExactMatch(const std::vector<Tokens> &predicted,
                  const std::vector<Tokens> &gold);

// Sequence files: one example per line, tokens separated by spaces.
std::vector<Tokens> ReadSequences(const std::string &path);
void WriteSequences(const std::string &path, const std::vector<Tokens> &lines);

}  // namespace amr
