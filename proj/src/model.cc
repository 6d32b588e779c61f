#include "amr/model.h"

#include <algorithm>
#include <map>

#include <nlohmann/json.hpp>

#include "amr/error.h"

namespace amr {

namespace {

using Json = nlohmann::json;

class MockModel : public Model {
 public:
  explicit MockModel(MockBehavior behavior) : behavior_(behavior) {}

  TrainOutcome Train(const TrainJob &job) override {
    TrainOutcome out;
    out.checkpoint = Checkpoint(job);
    std::vector<Tokens> inputs, gold;
    for (const SeqPair &p : job.dev) {
      inputs.push_back(p.src);
      gold.push_back(p.tgt);
    }
    const double score = ExactMatch(Predict(inputs, out.checkpoint, job.beam), gold);
    out.dev_scores.assign(static_cast<std::size_t>(std::max(job.epochs, 0)), score);
    return out;
  }

  std::vector<Tokens> Predict(const std::vector<Tokens> &inputs,
                              const std::string &checkpoint, int) override {
    std::vector<Tokens> out;
    out.reserve(inputs.size());
    if (behavior_ == MockBehavior::kMemorize) {
      std::map<std::string, std::string> memory = Memory(checkpoint);
      for (const Tokens &in : inputs) {
        auto it = memory.find(JoinTokens(in));
        out.push_back(it == memory.end() ? Tokens{} : SplitTokens(it->second));
      }
      return out;
    }
    for (const Tokens &in : inputs) {
      out.push_back(in);
      if (behavior_ == MockBehavior::kReverse) {
        std::reverse(out.back().begin(), out.back().end());
      }
    }
    return out;
  }

 private:
  std::string Checkpoint(const TrainJob &job) const {
    switch (behavior_) {
      case MockBehavior::kIdentity: return "identity\n";
      case MockBehavior::kReverse: return "reverse\n";
      case MockBehavior::kMemorize: break;
    }
    std::map<std::string, std::string> memory;
    if (job.init_checkpoint) memory = Memory(*job.init_checkpoint);
    for (const SeqPair &p : job.train) memory[JoinTokens(p.src)] = JoinTokens(p.tgt);
    return Json(memory).dump() + "\n";
  }

  static std::map<std::string, std::string> Memory(const std::string &checkpoint) {
    try {
      return Json::parse(checkpoint).get<std::map<std::string, std::string>>();
    } catch (const Json::exception &ex) {
      throw Error(ErrorCode::kProtocolViolation,
                  std::string("unreadable memorize checkpoint: ") + ex.what());
    }
  }

  MockBehavior behavior_;
};

}  // namespace

std::optional<MockBehavior> ParseMockBehavior(std::string_view name) {
  if (name == "identity") return MockBehavior::kIdentity;
  if (name == "memorize") return MockBehavior::kMemorize;
  if (name == "reverse") return MockBehavior::kReverse;
  return std::nullopt;
}

std::unique_ptr<Model> MakeMockModel(MockBehavior behavior) {
  return std::make_unique<MockModel>(behavior);
}

double ExactMatch(const std::vector<Tokens> &predicted,
                  const std::vector<Tokens> &gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::kLengthMismatch, "prediction count differs from gold");
  }
  if (gold.empty()) return 0.0;
  std::size_t same = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) same += predicted[i] == gold[i];
  return static_cast<double>(same) / static_cast<double>(gold.size());
}

std::vector<Tokens> ReadSequences(const std::string &path) {
  std::vector<Tokens> out;
  for (const std::string &line : ReadLines(path)) out.push_back(SplitTokens(line));
  return out;
}

void WriteSequences(const std::string &path, const std::vector<Tokens> &lines) {
  std::string text;
  for (const Tokens &t : lines) text += JoinTokens(t) + "\n";
  WriteFile(path, text);
}

}  // namespace amr
