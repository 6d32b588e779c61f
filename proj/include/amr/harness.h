#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amr/linearize.h"
#include "amr/model.h"

namespace amr {

struct TrainingSchedule {
  std::int64_t k = 200000;  // first external sample size
  int iterations = 3;       // self-training rounds (N)
  double lr_initial_parser = 0.5;
  double lr_pretrain = 1.0;
  double lr_finetune = 0.1;
  double lr_decay = 0.8;
  int epochs_initial = 60;
  int epochs_pretrain = 20;
  int epochs_finetune = 10;
  int beam = 5;
  int batch = 100;
  double dropout = 0.5;

  // Throws Error(kInvalidArgument) when a field is out of range.
  void Validate() const;
};

enum class DevMetric { kSmatch, kBleu, kExactMatch };

struct HarnessOptions {
  DevMetric parser_metric = DevMetric::kSmatch;
  DevMetric generator_metric = DevMetric::kBleu;
  // How AMR sequences are read back for SMATCH.
  ScopeMarkers scope = ScopeMarkers::kMultiChild;
  bool fine_tune = true;
  // Keep only external sentences whose tokens all occur in the training
  // sentences.
  bool vocabulary_filter = true;
  std::uint64_t seed = 0;
};

// Sentence/AMR sequence pairs: src is the sentence, tgt the linearized
// graph. The generator is trained on the swapped pairs.
struct PairedData {
  std::vector<SeqPair> train;
  std::vector<SeqPair> dev;
};

// Append-only JSON-lines log. Keys are sorted and numbers printed the same
// way every run, so identical runs give identical bytes.
class RunLedger {
 public:
  void Append(const std::string &json_object_line);
  const std::vector<std::string> &lines() const { return lines_; }
  std::string Text() const;
  // Sample sizes recorded by "sample" entries, in order.
  std::vector<std::int64_t> SampleSizes() const;

 private:
  std::vector<std::string> lines_;
};

struct TrainingResult {
  std::string parser_checkpoint;
  std::string generator_checkpoint;
  double parser_dev = 0;
  double generator_dev = 0;
  RunLedger ledger;
};

// Stable short id for a checkpoint: 16 hex digits of its FNV-1a hash.
std::string CheckpointId(const std::string &bytes);

double ScoreSequences(DevMetric metric, const std::vector<Tokens> &predicted,
                      const std::vector<Tokens> &gold, ScopeMarkers scope);

// Paired training of parser and generator. `external` holds candidate
// sentences, whitespace tokenized. On failure the ledger gains an "error"
// entry naming the phase, and the error is rethrown wrapped in
// TrainingFailure.
TrainingResult PairedTraining(const PairedData &data,
                              const std::vector<std::string> &external,
                              Model &parser, Model &generator,
                              const TrainingSchedule &schedule,
                              const HarnessOptions &options = {});

class TrainingFailure : public std::exception {
 public:
  TrainingFailure(std::string phase, std::exception_ptr cause, RunLedger ledger,
                  std::string message)
      : phase_(std::move(phase)),
        cause_(std::move(cause)),
        ledger_(std::move(ledger)),
        message_(std::move(message)) {}

  const char *what() const noexcept override { return message_.c_str(); }
  const std::string &phase() const { return phase_; }
  std::exception_ptr cause() const { return cause_; }
  const RunLedger &ledger() const { return ledger_; }

 private:
  std::string phase_;
  std::exception_ptr cause_;
  RunLedger ledger_;
  std::string message_;
};

}  // namespace amr
