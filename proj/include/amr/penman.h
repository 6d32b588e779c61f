#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "amr/graph.h"

namespace amr {

// Parses one Penman expression. Lines starting with '#' are skipped.
// Throws ParseError naming the byte offset of the problem.
AmrGraph ParsePenman(std::string_view text);

// Single-line Penman; re-entrant nodes are expanded on first visit and
// written as a bare variable afterwards.
std::string SerializePenman(const AmrGraph &graph);

// Multi-line Penman indented six spaces per level, as in AMR releases.
std::string SerializePenmanIndented(const AmrGraph &graph);

// One graph of a multi-graph file together with its '#' metadata lines.
struct AmrEntry {
  std::vector<std::string> metadata;
  AmrGraph graph;
  // Byte offset of the graph's opening parenthesis within the file.
  std::size_t offset = 0;

  // Value of a "# ::key value" metadata field.
  std::optional<std::string> Field(std::string_view key) const;
};

// Reads a file of blank-line separated graphs. Error offsets are relative
// to the start of `text`.
std::vector<AmrEntry> ParsePenmanDocument(std::string_view text);

std::string SerializePenmanDocument(const std::vector<AmrEntry> &entries);

// 1-based line number of a byte offset, for diagnostics.
std::size_t LineOfOffset(std::string_view text, std::size_t offset);

}  // namespace amr
