#pragma once

#include <cstdint>

#include "amr/graph.h"
#include "amr/simplified.h"

namespace amr::testing {

// Best matched-triple count over every maximal variable injection, scored
// by plain set intersection of renamed triples. Exponential; keep graphs
// small.
std::int64_t SmatchOracleMatched(const AmrGraph &gold, const AmrGraph &pred);

// Number of instance plus relation triples.
std::int64_t TripleCount(const AmrGraph &graph);

// Copy where every "name" node's :opN leaves are merged into one :op1 leaf
// holding the space-joined unquoted values.
SimplifiedGraph MergeNameOps(const SimplifiedGraph &tree);

// Parenthesis tokens a scope-marked rendering should contain.
std::size_t ExpectedBrackets(const SimplifiedGraph &tree);

}  // namespace amr::testing
