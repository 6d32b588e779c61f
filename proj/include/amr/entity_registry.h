#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace amr {

enum class CoarseType { kPerson, kLocation, kOrganization, kMisc };

std::string_view CoarseTypeName(CoarseType type);
// Accepts "person", "PERSON", "PER", "location", "LOC", ... Unknown names
// map to kMisc.
CoarseType ParseCoarseType(std::string_view name);

// Fine-grained AMR entity types and their coarse NER cluster. Entries are
// exact types ("country") or suffix patterns ("*-entity"). Lookups try the
// exact type first, then the longest matching pattern; anything else is
// unregistered and clusters to misc.
class EntityTypeRegistry {
 public:
  EntityTypeRegistry() = default;

  // Built-in table covering common AMR named-entity types.
  static EntityTypeRegistry Default();

  // Two tab-separated columns, fine type then coarse type; '#' starts a
  // comment line. Throws Error(kFormat) naming the line.
  static EntityTypeRegistry FromTsv(std::string_view text);
  static EntityTypeRegistry Load(const std::string &path);

  void Add(std::string fine_type, CoarseType coarse);

  bool Contains(std::string_view fine_type) const;
  CoarseType Coarse(std::string_view fine_type) const;

  std::string ToTsv() const;
  std::size_t size() const { return exact_.size() + patterns_.size(); }

 private:
  const CoarseType *Find(std::string_view fine_type) const;

  std::map<std::string, CoarseType, std::less<>> exact_;
  // Suffix (without the leading '*') to coarse type.
  std::map<std::string, CoarseType, std::less<>> patterns_;
};

}  // namespace amr
