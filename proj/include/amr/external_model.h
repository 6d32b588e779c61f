#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "amr/model.h"

namespace amr {

// Job directory layout shared by both endpoint kinds:
//   config.json          mode ("train" | "predict"), learning_rate, epochs,
//                        lr_decay, beam, batch, dropout, seed, init_checkpoint
//   train.src train.tgt  training pairs (train jobs)
//   dev.src dev.tgt      development pairs (train jobs)
//   pred.src             inputs (predict jobs)
// The endpoint answers with
//   checkpoint           opaque bytes (train jobs)
//   dev_scores.json      JSON array of numbers, one per epoch (train jobs)
//   pred.tgt             one output line per input line (predict jobs)
struct ExternalModelOptions {
  // Directory under which job directories are created.
  std::string work_dir;
  std::chrono::milliseconds timeout{std::chrono::minutes(60)};
  bool keep_jobs = false;
};

// Runs `command` through /bin/sh with the job directory appended as its
// last argument. A nonzero exit raises Error(kProtocolViolation) carrying
// the tail of the command's stderr; overrunning the timeout kills the
// process group and raises Error(kTimeout).
std::unique_ptr<Model> MakeSubprocessModel(std::string command,
                                           ExternalModelOptions options);

// Drops each job into `mailbox`/job-NNNN, then creates a READY marker. The
// endpoint signals completion with DONE, or FAILED (whose contents become
// the error message).
std::unique_ptr<Model> MakeMailboxModel(std::string mailbox,
                                        ExternalModelOptions options);

}  // namespace amr
