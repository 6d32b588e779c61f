#include "amr/harness.h"

#include <cstdio>
#include <set>

#include <nlohmann/json.hpp>

#include "amr/corpus.h"
#include "amr/error.h"
#include "amr/metrics.h"
#include "amr/random.h"

namespace amr {

namespace {

using Json = nlohmann::json;

std::vector<Tokens> Sources(const std::vector<SeqPair> &pairs) {
  std::vector<Tokens> out;
  for (const SeqPair &p : pairs) out.push_back(p.src);
  return out;
}

std::vector<Tokens> Targets(const std::vector<SeqPair> &pairs) {
  std::vector<Tokens> out;
  for (const SeqPair &p : pairs) out.push_back(p.tgt);
  return out;
}

std::vector<SeqPair> Swapped(const std::vector<SeqPair> &pairs) {
  std::vector<SeqPair> out;
  for (const SeqPair &p : pairs) out.push_back({p.tgt, p.src});
  return out;
}

std::string MetricName(DevMetric m) {
  switch (m) {
    case DevMetric::kSmatch: return "smatch";
    case DevMetric::kBleu: return "bleu";
    case DevMetric::kExactMatch: return "exact";
  }
  return "exact";
}

// Draws disjoint samples from the external pool.
class ExternalPool {
 public:
  ExternalPool(const std::vector<std::string> &sentences,
               const PairedData &data, bool vocabulary_filter,
               std::uint64_t seed)
      : sentences_(sentences), seed_(seed) {
    for (const SeqPair &p : data.train) {
      vocab_.Add(p.src);
      exclude_.insert(JoinTokens(p.src));
    }
    for (const SeqPair &p : data.dev) exclude_.insert(JoinTokens(p.src));
    if (!vocabulary_filter) {
      for (const std::string &s : sentences_) vocab_.Add(SplitTokens(s));
    }
  }

  SampleResult Draw(std::int64_t size) {
    ExternalSampler sampler(vocab_, exclude_, static_cast<std::size_t>(size),
                            MixSeed(seed_, ++draws_));
    for (const std::string &s : sentences_) sampler.Offer(s);
    SampleResult r = sampler.Finish();
    exclude_.insert(r.sentences.begin(), r.sentences.end());
    return r;
  }

 private:
  const std::vector<std::string> &sentences_;
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  Vocabulary vocab_;
  std::set<std::string> exclude_;
};

class Trainer {
 public:
  Trainer(const PairedData &data, const std::vector<std::string> &external,
          Model &parser, Model &generator, const TrainingSchedule &schedule,
          const HarnessOptions &options)
      : data_(data),
        parser_(parser),
        generator_(generator),
        schedule_(schedule),
        options_(options),
        pool_(external, data, options.vocabulary_filter, options.seed),
        gen_data_{Swapped(data.train), Swapped(data.dev)} {}

  TrainingResult Run() {
    TrainingResult result;
    // Line 1.
    Phase("parser.initial", 0);
    TrainJob initial = Job("parser.initial", data_.train, data_.dev, std::nullopt,
                           schedule_.lr_initial_parser, schedule_.epochs_initial);
    TrainOutcome first = parser_.Train(initial);
    std::string parser_ckpt = first.checkpoint;
    double parser_score = Evaluate(parser_, parser_ckpt, data_.dev,
                                   options_.parser_metric);
    Log({{"phase", "parser.initial"},
         {"epochs", schedule_.epochs_initial},
         {"dev_score", parser_score},
         {"metric", MetricName(options_.parser_metric)},
         {"checkpoint", CheckpointId(parser_ckpt)}});

    // Lines 2-8. Samples are drawn when they are consumed, so the sample
    // for round N+1 that line 7 would produce is the one line 9 draws.
    for (int i = 1; i <= schedule_.iterations; ++i) {
      std::vector<std::string> sample = Sample(Pow10(i - 1), i == 1 ? 2 : 7, i);
      Phase("parser.parse", i);
      std::vector<Tokens> sentences = Tokenized(sample);
      std::vector<Tokens> parsed = parser_.Predict(sentences, parser_ckpt,
                                                   schedule_.beam);
      CheckCount(parsed, sentences);
      std::vector<SeqPair> pseudo;
      for (std::size_t j = 0; j < sentences.size(); ++j) {
        pseudo.push_back({sentences[j], parsed[j]});
      }
      Selection s = PretrainAndFineTune("parser", i, parser_, pseudo, data_,
                                        options_.parser_metric);
      parser_ckpt = s.checkpoint;
      parser_score = s.score;
    }

    // Lines 9-11.
    std::vector<std::string> sample =
        Sample(Pow10(schedule_.iterations), 9, schedule_.iterations + 1);
    Phase("generator.parse", schedule_.iterations + 1);
    std::vector<Tokens> sentences = Tokenized(sample);
    std::vector<Tokens> parsed =
        parser_.Predict(sentences, parser_ckpt, schedule_.beam);
    CheckCount(parsed, sentences);
    std::vector<SeqPair> pseudo;
    for (std::size_t j = 0; j < sentences.size(); ++j) {
      pseudo.push_back({parsed[j], sentences[j]});
    }
    // Line 12.
    Selection g = PretrainAndFineTune("generator", schedule_.iterations + 1,
                                      generator_, pseudo, gen_data_,
                                      options_.generator_metric);
    result.parser_checkpoint = parser_ckpt;
    result.parser_dev = parser_score;
    result.generator_checkpoint = g.checkpoint;
    result.generator_dev = g.score;
    Log({{"phase", "done"},
         {"parser_checkpoint", CheckpointId(parser_ckpt)},
         {"parser_dev", parser_score},
         {"generator_checkpoint", CheckpointId(g.checkpoint)},
         {"generator_dev", g.score}});
    result.ledger = ledger_;
    return result;
  }

  const RunLedger &ledger() const { return ledger_; }
  const std::string &phase() const { return phase_; }

 private:
  struct Selection {
    std::string checkpoint;
    double score = 0;
  };

  std::int64_t Pow10(int e) const {
    std::int64_t v = schedule_.k;
    for (int i = 0; i < e; ++i) v *= 10;
    return v;
  }

  void Phase(const std::string &name, int iteration) {
    phase_ = name + "." + std::to_string(iteration);
  }

  void Log(Json entry) { ledger_.Append(entry.dump()); }

  std::vector<std::string> Sample(std::int64_t size, int line, int iteration) {
    Phase("sample", iteration);
    SampleResult r = pool_.Draw(size);
    Json entry = {{"phase", "sample"},
                  {"line", line},
                  {"iteration", iteration},
                  {"sample_size", size},
                  {"drawn", r.sentences.size()}};
    if (r.insufficient) entry["warning"] = "insufficient candidates";
    Log(entry);
    return r.sentences;
  }

  static std::vector<Tokens> Tokenized(const std::vector<std::string> &lines) {
    std::vector<Tokens> out;
    for (const std::string &l : lines) out.push_back(SplitTokens(l));
    return out;
  }

  static void CheckCount(const std::vector<Tokens> &out,
                         const std::vector<Tokens> &in) {
    if (out.size() != in.size()) {
      throw Error(ErrorCode::kProtocolViolation,
                  "model returned " + std::to_string(out.size()) +
                      " outputs for " + std::to_string(in.size()) + " inputs");
    }
  }

  TrainJob Job(const std::string &phase, const std::vector<SeqPair> &train,
               const std::vector<SeqPair> &dev,
               std::optional<std::string> init, double lr, int epochs) const {
    TrainJob job;
    job.phase = phase;
    job.train = train;
    job.dev = dev;
    job.init_checkpoint = std::move(init);
    job.learning_rate = lr;
    job.epochs = epochs;
    job.lr_decay = schedule_.lr_decay;
    job.beam = schedule_.beam;
    job.batch = schedule_.batch;
    job.dropout = schedule_.dropout;
    job.seed = MixSeed(options_.seed, Fnv1a64(phase));
    return job;
  }

  double Evaluate(Model &model, const std::string &checkpoint,
                  const std::vector<SeqPair> &dev, DevMetric metric) {
    if (dev.empty()) return 0.0;
    std::vector<Tokens> inputs = Sources(dev);
    std::vector<Tokens> out = model.Predict(inputs, checkpoint, schedule_.beam);
    CheckCount(out, inputs);
    return ScoreSequences(metric, out, Targets(dev), options_.scope);
  }

  // Pre-trains from scratch one epoch at a time; after each epoch a
  // fine-tuning attempt on the paired data is scored on dev. The best
  // attempt wins, the earliest among equals.
  Selection PretrainAndFineTune(const std::string &who, int iteration,
                                Model &model,
                                const std::vector<SeqPair> &pseudo,
                                const PairedData &paired, DevMetric metric) {
    double lr = schedule_.lr_pretrain;
    std::optional<std::string> pretrained;
    std::optional<double> last_pretrain_dev;
    std::optional<Selection> best;
    int best_epoch = 0;
    for (int epoch = 1; epoch <= schedule_.epochs_pretrain; ++epoch) {
      phase_ = who + ".pretrain." + std::to_string(iteration) + "." +
               std::to_string(epoch);
      TrainOutcome pre = model.Train(
          Job(phase_, pseudo, paired.dev, pretrained, lr, 1));
      pretrained = pre.checkpoint;
      Json pre_entry = {{"phase", who + ".pretrain"},
                        {"iteration", iteration},
                        {"epoch", epoch},
                        {"learning_rate", lr},
                        {"train_size", pseudo.size()},
                        {"checkpoint", CheckpointId(pre.checkpoint)}};
      if (!pre.dev_scores.empty()) pre_entry["model_dev_score"] = pre.dev_scores.back();
      Log(pre_entry);
      if (!pre.dev_scores.empty()) {
        const double now = pre.dev_scores.back();
        if (last_pretrain_dev && now <= *last_pretrain_dev) lr *= schedule_.lr_decay;
        last_pretrain_dev = now;
      }

      Selection attempt;
      if (options_.fine_tune) {
        phase_ = who + ".finetune." + std::to_string(iteration) + "." +
                 std::to_string(epoch);
        TrainOutcome fine = model.Train(Job(phase_, paired.train, paired.dev,
                                            pre.checkpoint, schedule_.lr_finetune,
                                            schedule_.epochs_finetune));
        attempt.checkpoint = fine.checkpoint;
      } else {
        attempt.checkpoint = pre.checkpoint;
      }
      phase_ = who + ".evaluate." + std::to_string(iteration) + "." +
               std::to_string(epoch);
      attempt.score = Evaluate(model, attempt.checkpoint, paired.dev, metric);
      Log({{"phase", options_.fine_tune ? who + ".finetune" : who + ".pretrain_only"},
           {"iteration", iteration},
           {"epoch", epoch},
           {"epochs", options_.fine_tune ? schedule_.epochs_finetune : 0},
           {"dev_score", attempt.score},
           {"metric", MetricName(metric)},
           {"checkpoint", CheckpointId(attempt.checkpoint)}});
      if (!best || attempt.score > best->score) {
        best = attempt;
        best_epoch = epoch;
      }
    }
    if (!best) {
      // No pre-training epochs: keep whatever fine-tuning alone gives.
      phase_ = who + ".finetune." + std::to_string(iteration) + ".0";
      TrainOutcome fine = model.Train(Job(phase_, paired.train, paired.dev,
                                          std::nullopt, schedule_.lr_finetune,
                                          schedule_.epochs_finetune));
      best = Selection{fine.checkpoint,
                       Evaluate(model, fine.checkpoint, paired.dev, metric)};
    }
    Log({{"phase", who + ".select"},
         {"iteration", iteration},
         {"epoch", best_epoch},
         {"dev_score", best->score},
         {"checkpoint", CheckpointId(best->checkpoint)}});
    return *best;
  }

  const PairedData &data_;
  Model &parser_;
  Model &generator_;
  const TrainingSchedule &schedule_;
  const HarnessOptions &options_;
  ExternalPool pool_;
  PairedData gen_data_;
  RunLedger ledger_;
  std::string phase_ = "start";
};

}  // namespace

void TrainingSchedule::Validate() const {
  auto fail = [](const std::string &what) {
    throw Error(ErrorCode::kInvalidArgument, "schedule: " + what);
  };
  if (k < 1) fail("k must be at least 1");
  if (iterations < 0) fail("iterations must be non-negative");
  if (!(lr_decay > 0 && lr_decay < 1)) fail("lr_decay must lie in (0, 1)");
  if (epochs_initial < 1 || epochs_pretrain < 0 || epochs_finetune < 1) {
    fail("epoch counts out of range");
  }
  if (beam < 1 || batch < 1) fail("beam and batch must be positive");
  if (!(dropout >= 0 && dropout < 1)) fail("dropout must lie in [0, 1)");
  if (!(lr_initial_parser > 0 && lr_pretrain > 0 && lr_finetune > 0)) {
    fail("learning rates must be positive");
  }
}

void RunLedger::Append(const std::string &line) { lines_.push_back(line); }

std::string RunLedger::Text() const {
  std::string out;
  for (const std::string &l : lines_) out += l + "\n";
  return out;
}

std::vector<std::int64_t> RunLedger::SampleSizes() const {
  std::vector<std::int64_t> out;
  for (const std::string &l : lines_) {
    Json j = Json::parse(l);
    if (j.value("phase", "") == "sample") out.push_back(j.at("sample_size"));
  }
  return out;
}

std::string CheckpointId(const std::string &bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(Fnv1a64(bytes)));
  return buf;
}

double ScoreSequences(DevMetric metric, const std::vector<Tokens> &predicted,
                      const std::vector<Tokens> &gold, ScopeMarkers scope) {
  switch (metric) {
    case DevMetric::kExactMatch:
      return ExactMatch(predicted, gold);
    case DevMetric::kBleu:
      return Bleu(predicted, gold).score;
    case DevMetric::kSmatch: {
      std::vector<AmrGraph> g, p;
      for (const Tokens &t : gold) g.push_back(ToFullAmr(Delinearize(t, scope).tree));
      for (const Tokens &t : predicted) {
        p.push_back(ToFullAmr(Delinearize(t, scope).tree));
      }
      return SmatchCorpus(g, p).f1;
    }
  }
  return 0.0;
}

TrainingResult PairedTraining(const PairedData &data,
                              const std::vector<std::string> &external,
                              Model &parser, Model &generator,
                              const TrainingSchedule &schedule,
                              const HarnessOptions &options) {
  schedule.Validate();
  if (data.train.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, "no paired training examples");
  }
  Trainer trainer(data, external, parser, generator, schedule, options);
  try {
    return trainer.Run();
  } catch (const std::exception &ex) {
    RunLedger ledger = trainer.ledger();
    ledger.Append(Json{{"phase", "error"},
                       {"during", trainer.phase()},
                       {"message", ex.what()}}
                      .dump());
    throw TrainingFailure(trainer.phase(), std::current_exception(), ledger,
                          trainer.phase() + ": " + ex.what());
  }
}

}  // namespace amr
