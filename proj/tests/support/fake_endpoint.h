#pragma once

#include <string>

namespace amr::testing {

// Answers one job directory the way an identity model would: the
// checkpoint is "identity\n", dev scores are exact match of dev.src
// against dev.tgt, predictions copy pred.src. Checks the job layout on the
// way and returns an error description, or "" on success.
std::string ServeIdentityJob(const std::string &job_dir);

}  // namespace amr::testing
