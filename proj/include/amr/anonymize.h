#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amr/entity_registry.h"
#include "amr/simplified.h"
#include "amr/text.h"

namespace amr {

enum class AnonymizationGroup { kNamedEntity, kDate, kNumber };

std::string_view GroupName(AnonymizationGroup group);
AnonymizationGroup ParseGroup(std::string_view name);

struct AnonymizationRecord {
  std::string token;  // e.g. "country_0"
  AnonymizationGroup group = AnonymizationGroup::kNamedEntity;
  int index = 0;
  // Fine-grained type for named entities and quantities; the date
  // category ("year", "month-name", ...) or "date-entity" for dates.
  std::string fine_type;
  std::string surface;  // empty when unaligned
  SimplifiedGraph subgraph;
  // Where the removed material sat in the tree before anonymization;
  // empty for records that come from NER rather than a graph.
  std::string path;

  bool operator==(const AnonymizationRecord &) const = default;
};

using Records = std::vector<AnonymizationRecord>;

struct AnonymizedGraph {
  SimplifiedGraph tree;
  Records records;
};

// Named entities and quantities. Dates are left to AnonymizeDates.
AnonymizedGraph AnonymizeGraph(const SimplifiedGraph &tree,
                               const EntityTypeRegistry &registry);

// Year, month and day components of every date-entity become category
// tokens. Each date-entity also yields a whole-date record (fine type
// "date-entity") that is not placed in the tree but can absorb a sentence
// span written in one of the compact formats.
AnonymizedGraph AnonymizeDates(const SimplifiedGraph &tree);

// Rewrites named-entity tokens to their coarse cluster, renumbering per
// cluster in traversal order. Records are updated in place.
SimplifiedGraph ClusterEntities(const SimplifiedGraph &tree, Records &records,
                                const EntityTypeRegistry &registry);

struct Alignment {
  std::string path;  // node address, see ChildPath()
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Alignment &) const = default;
};

using AlignmentSet = std::vector<Alignment>;

struct AnonymizedSentence {
  Tokens tokens;
  // Tokens of records that live in the tree but had no aligned span.
  std::vector<std::string> unaligned;
  // Replaced [start, end) spans of the input sentence, left to right.
  std::vector<std::pair<std::size_t, std::size_t>> spans;
};

// Replaces each aligned span with its record's token and fills in
// record.surface. An alignment belongs to the record whose path is the
// longest prefix of the alignment path; alignments that reach no record are
// ignored, and several alignments for one record are merged into the
// covering span. Throws Error(kSpanOutOfRange) and Error(kOverlappingSpans).
AnonymizedSentence AnonymizeSentence(const Tokens &sentence,
                                     const AlignmentSet &alignments,
                                     Records &records);

// Text name of the entity a record stands for: joined :name ops, quantity
// and unit, or a date value.
std::string EntityName(const AnonymizationRecord &record);

// Corpus-level realization counts keyed by (fine type, entity name).
class AnonymizationTable {
 public:
  void Add(const std::string &fine_type, const std::string &name,
           const std::string &surface, std::int64_t count = 1);
  // Adds every aligned record.
  void AddRecords(const Records &records);
  void Merge(const AnonymizationTable &other);

  // Most frequent surface; ties go to the lexicographically smallest.
  std::optional<std::string> Lookup(const std::string &fine_type,
                                    const std::string &name) const;
  // Fine type under which a surface was seen most often.
  std::optional<std::string> ReverseLookup(const std::string &surface) const;

  std::string ToJson() const;
  static AnonymizationTable FromJson(std::string_view json);

  bool empty() const { return counts_.empty(); }
  bool operator==(const AnonymizationTable &) const = default;

  const std::map<std::pair<std::string, std::string>,
                 std::map<std::string, std::int64_t>> &
  counts() const {
    return counts_;
  }

 private:
  std::map<std::pair<std::string, std::string>,
           std::map<std::string, std::int64_t>>
      counts_;
};

struct Deanonymized {
  Tokens tokens;
  std::vector<std::string> unresolved;
};

Deanonymized DeanonymizeOutput(const Tokens &tokens, const Records &records,
                               const AnonymizationTable &table);

struct NerSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string type;  // coarse NER label, e.g. "LOCATION"

  bool operator==(const NerSpan &) const = default;
};

struct NerNormalized {
  Tokens tokens;
  Records records;
};

NerNormalized NerNormalize(const Tokens &sentence,
                           const std::vector<NerSpan> &spans,
                           const AnonymizationTable &table);

struct RecoveredGraph {
  SimplifiedGraph tree;
  std::vector<std::string> unmatched;
};

RecoveredGraph RecoverAmrEntities(const SimplifiedGraph &parsed,
                                  const Records &records);

// True for strings shaped like an anonymization token ("person_0",
// "month-name_2", "YYYY-MM-DD_0").
bool LooksLikeAnonToken(std::string_view token);

// JSON interchange for records; trees use {"concept", "children": [{"label",
// "child"}]}.
std::string RecordsToJson(const Records &records);
Records RecordsFromJson(std::string_view json);

}  // namespace amr
