#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "amr/anonymize.h"

namespace amr {

// JSONL, one object per example:
//   {"id": "...", "alignments": [{"path": "0.1", "start": 3, "end": 5}]}
// Throws Error(kFormat) naming the 1-based line.
std::map<std::string, AlignmentSet> ParseAlignmentsJsonl(std::string_view text);
std::string AlignmentsToJsonl(const std::map<std::string, AlignmentSet> &sets);

// JSONL: {"id": "...", "spans": [{"start": 0, "end": 2, "type": "PERSON"}]}
std::map<std::string, std::vector<NerSpan>> ParseNerJsonl(std::string_view text);
std::string NerToJsonl(const std::map<std::string, std::vector<NerSpan>> &sets);

}  // namespace amr
