#include "amr/external_model.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <thread>

#include <nlohmann/json.hpp>

#include "amr/error.h"

namespace amr {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr auto kPoll = std::chrono::milliseconds(10);

void WritePairs(const fs::path &dir, const std::string &stem,
                const std::vector<SeqPair> &pairs) {
  std::vector<Tokens> src, tgt;
  for (const SeqPair &p : pairs) {
    src.push_back(p.src);
    tgt.push_back(p.tgt);
  }
  WriteSequences((dir / (stem + ".src")).string(), src);
  WriteSequences((dir / (stem + ".tgt")).string(), tgt);
}

std::string Tail(const std::string &text, std::size_t max = 2000) {
  return text.size() <= max ? text : "..." + text.substr(text.size() - max);
}

std::string ReadRequired(const fs::path &path) {
  if (!fs::exists(path)) {
    throw Error(ErrorCode::kProtocolViolation,
                "endpoint did not write " + path.filename().string());
  }
  return ReadFile(path.string());
}

// Shared job marshalling; subclasses decide how a prepared job runs.
class ExternalModel : public Model {
 public:
  explicit ExternalModel(ExternalModelOptions options)
      : options_(std::move(options)) {}

  TrainOutcome Train(const TrainJob &job) override {
    fs::path dir = NewJobDir();
    WritePairs(dir, "train", job.train);
    WritePairs(dir, "dev", job.dev);
    Json config = {{"mode", "train"},
                   {"phase", job.phase},
                   {"learning_rate", job.learning_rate},
                   {"epochs", job.epochs},
                   {"lr_decay", job.lr_decay},
                   {"beam", job.beam},
                   {"batch", job.batch},
                   {"dropout", job.dropout},
                   {"seed", job.seed},
                   {"init_checkpoint", nullptr}};
    if (job.init_checkpoint) {
      WriteFile((dir / "init_checkpoint").string(), *job.init_checkpoint);
      config["init_checkpoint"] = fs::absolute(dir / "init_checkpoint").string();
    }
    WriteFile((dir / "config.json").string(), config.dump(2) + "\n");
    Run(dir);

    TrainOutcome out;
    out.checkpoint = ReadRequired(dir / "checkpoint");
    try {
      Json scores = Json::parse(ReadRequired(dir / "dev_scores.json"));
      if (scores.is_object()) scores = scores.at("dev_scores");
      out.dev_scores = scores.get<std::vector<double>>();
    } catch (const Json::exception &ex) {
      throw Error(ErrorCode::kProtocolViolation,
                  std::string("bad dev_scores.json: ") + ex.what());
    }
    Cleanup(dir);
    return out;
  }

  std::vector<Tokens> Predict(const std::vector<Tokens> &inputs,
                              const std::string &checkpoint, int beam) override {
    fs::path dir = NewJobDir();
    WriteSequences((dir / "pred.src").string(), inputs);
    WriteFile((dir / "init_checkpoint").string(), checkpoint);
    Json config = {{"mode", "predict"},
                   {"beam", beam},
                   {"init_checkpoint",
                    fs::absolute(dir / "init_checkpoint").string()}};
    WriteFile((dir / "config.json").string(), config.dump(2) + "\n");
    Run(dir);
    ReadRequired(dir / "pred.tgt");
    std::vector<Tokens> out = ReadSequences((dir / "pred.tgt").string());
    if (out.size() != inputs.size()) {
      throw Error(ErrorCode::kProtocolViolation,
                  "pred.tgt has " + std::to_string(out.size()) +
                      " lines for " + std::to_string(inputs.size()) + " inputs");
    }
    Cleanup(dir);
    return out;
  }

 protected:
  virtual fs::path JobRoot() const { return options_.work_dir; }
  virtual void Run(const fs::path &dir) = 0;

  const ExternalModelOptions &options() const { return options_; }

 private:
  fs::path NewJobDir() {
    fs::path root = JobRoot();
    fs::create_directories(root);
    while (true) {
      char name[32];
      std::snprintf(name, sizeof name, "job-%04d", ++jobs_);
      fs::path dir = root / name;
      if (fs::create_directory(dir)) return dir;
    }
  }

  void Cleanup(const fs::path &dir) const {
    if (!options_.keep_jobs) {
      std::error_code ec;
      fs::remove_all(dir, ec);
    }
  }

  ExternalModelOptions options_;
  int jobs_ = 0;
};

class SubprocessModel : public ExternalModel {
 public:
  SubprocessModel(std::string command, ExternalModelOptions options)
      : ExternalModel(std::move(options)), command_(std::move(command)) {}

 protected:
  void Run(const fs::path &dir) override {
    const std::string stderr_path = (dir / "stderr.log").string();
    const std::string script = command_ + " \"$1\"";
    const std::string dir_arg = fs::absolute(dir).string();

    pid_t pid = fork();
    if (pid < 0) throw Error(ErrorCode::kProtocolViolation, "fork failed");
    if (pid == 0) {
      setpgid(0, 0);
      int fd = open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
      if (fd >= 0) {
        dup2(fd, STDERR_FILENO);
        close(fd);
      }
      int devnull = open("/dev/null", O_RDONLY);
      if (devnull >= 0) {
        dup2(devnull, STDIN_FILENO);
        close(devnull);
      }
      execl("/bin/sh", "sh", "-c", script.c_str(), "sh", dir_arg.c_str(),
            static_cast<char *>(nullptr));
      _exit(127);
    }
    setpgid(pid, pid);

    const auto deadline = Clock::now() + options().timeout;
    int status = 0;
    while (true) {
      pid_t done = waitpid(pid, &status, WNOHANG);
      if (done == pid) break;
      if (done < 0) {
        throw Error(ErrorCode::kProtocolViolation, "lost track of endpoint process");
      }
      if (Clock::now() >= deadline) {
        kill(-pid, SIGKILL);
        waitpid(pid, &status, 0);
        throw Error(ErrorCode::kTimeout,
                    "endpoint exceeded " +
                        std::to_string(options().timeout.count()) + " ms: " +
                        command_);
      }
      std::this_thread::sleep_for(kPoll);
    }
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      std::string diag;
      if (fs::exists(stderr_path)) diag = Tail(ReadFile(stderr_path));
      const std::string how =
          WIFEXITED(status) ? "exited with status " + std::to_string(WEXITSTATUS(status))
                            : "was killed by signal " + std::to_string(WTERMSIG(status));
      throw Error(ErrorCode::kProtocolViolation,
                  "endpoint " + how + (diag.empty() ? "" : ": " + diag));
    }
  }

 private:
  std::string command_;
};

class MailboxModel : public ExternalModel {
 public:
  MailboxModel(std::string mailbox, ExternalModelOptions options)
      : ExternalModel(std::move(options)), mailbox_(std::move(mailbox)) {}

 protected:
  fs::path JobRoot() const override { return mailbox_; }

  void Run(const fs::path &dir) override {
    WriteFile((dir / "READY").string(), "");
    const auto deadline = Clock::now() + options().timeout;
    while (true) {
      if (fs::exists(dir / "DONE")) return;
      if (fs::exists(dir / "FAILED")) {
        throw Error(ErrorCode::kProtocolViolation,
                    "endpoint reported failure: " +
                        Tail(ReadFile((dir / "FAILED").string())));
      }
      if (Clock::now() >= deadline) {
        throw Error(ErrorCode::kTimeout,
                    "no answer in " + dir.string() + " after " +
                        std::to_string(options().timeout.count()) + " ms");
      }
      std::this_thread::sleep_for(kPoll);
    }
  }

 private:
  fs::path mailbox_;
};

}  // namespace

std::unique_ptr<Model> MakeSubprocessModel(std::string command,
                                           ExternalModelOptions options) {
  return std::make_unique<SubprocessModel>(std::move(command), std::move(options));
}

std::unique_ptr<Model> MakeMailboxModel(std::string mailbox,
                                        ExternalModelOptions options) {
  return std::make_unique<MailboxModel>(std::move(mailbox), std::move(options));
}

}  // namespace amr
