#include "amr/entity_registry.h"

#include <algorithm>
#include <cctype>

#include "amr/error.h"
#include "amr/text.h"

namespace amr {

namespace {

struct DefaultEntry {
  const char *fine;
  CoarseType coarse;
};

// Types follow the AMR guidelines' named-entity list, grouped by the
// cluster a Stanford-style NER tagger would assign.
constexpr DefaultEntry kDefaults[] = {
    // person
    {"person", CoarseType::kPerson},
    {"family", CoarseType::kPerson},
    {"animal", CoarseType::kPerson},
    // organization
    {"organization", CoarseType::kOrganization},
    {"company", CoarseType::kOrganization},
    {"government-organization", CoarseType::kOrganization},
    {"military", CoarseType::kOrganization},
    {"criminal-organization", CoarseType::kOrganization},
    {"political-party", CoarseType::kOrganization},
    {"market-sector", CoarseType::kOrganization},
    {"school", CoarseType::kOrganization},
    {"university", CoarseType::kOrganization},
    {"research-institute", CoarseType::kOrganization},
    {"team", CoarseType::kOrganization},
    {"league", CoarseType::kOrganization},
    {"newspaper", CoarseType::kOrganization},
    // location
    {"location", CoarseType::kLocation},
    {"city", CoarseType::kLocation},
    {"city-district", CoarseType::kLocation},
    {"county", CoarseType::kLocation},
    {"state", CoarseType::kLocation},
    {"province", CoarseType::kLocation},
    {"territory", CoarseType::kLocation},
    {"country", CoarseType::kLocation},
    {"local-region", CoarseType::kLocation},
    {"country-region", CoarseType::kLocation},
    {"world-region", CoarseType::kLocation},
    {"continent", CoarseType::kLocation},
    {"ocean", CoarseType::kLocation},
    {"sea", CoarseType::kLocation},
    {"lake", CoarseType::kLocation},
    {"river", CoarseType::kLocation},
    {"gulf", CoarseType::kLocation},
    {"bay", CoarseType::kLocation},
    {"strait", CoarseType::kLocation},
    {"canal", CoarseType::kLocation},
    {"peninsula", CoarseType::kLocation},
    {"mountain", CoarseType::kLocation},
    {"volcano", CoarseType::kLocation},
    {"valley", CoarseType::kLocation},
    {"canyon", CoarseType::kLocation},
    {"island", CoarseType::kLocation},
    {"desert", CoarseType::kLocation},
    {"forest", CoarseType::kLocation},
    {"moon", CoarseType::kLocation},
    {"planet", CoarseType::kLocation},
    {"star", CoarseType::kLocation},
    {"constellation", CoarseType::kLocation},
    {"facility", CoarseType::kLocation},
    {"airport", CoarseType::kLocation},
    {"station", CoarseType::kLocation},
    {"port", CoarseType::kLocation},
    {"tunnel", CoarseType::kLocation},
    {"bridge", CoarseType::kLocation},
    {"road", CoarseType::kLocation},
    {"railway-line", CoarseType::kLocation},
    {"building", CoarseType::kLocation},
    {"theater", CoarseType::kLocation},
    {"museum", CoarseType::kLocation},
    {"palace", CoarseType::kLocation},
    {"hotel", CoarseType::kLocation},
    {"worship-place", CoarseType::kLocation},
    {"market", CoarseType::kLocation},
    {"sports-facility", CoarseType::kLocation},
    {"park", CoarseType::kLocation},
    {"zoo", CoarseType::kLocation},
    {"amusement-park", CoarseType::kLocation},
    // misc
    {"language", CoarseType::kMisc},
    {"nationality", CoarseType::kMisc},
    {"ethnic-group", CoarseType::kMisc},
    {"regional-group", CoarseType::kMisc},
    {"religious-group", CoarseType::kMisc},
    {"political-movement", CoarseType::kMisc},
    {"event", CoarseType::kMisc},
    {"incident", CoarseType::kMisc},
    {"natural-disaster", CoarseType::kMisc},
    {"earthquake", CoarseType::kMisc},
    {"war", CoarseType::kMisc},
    {"conference", CoarseType::kMisc},
    {"game", CoarseType::kMisc},
    {"festival", CoarseType::kMisc},
    {"product", CoarseType::kMisc},
    {"vehicle", CoarseType::kMisc},
    {"ship", CoarseType::kMisc},
    {"aircraft", CoarseType::kMisc},
    {"aircraft-type", CoarseType::kMisc},
    {"spaceship", CoarseType::kMisc},
    {"car-make", CoarseType::kMisc},
    {"work-of-art", CoarseType::kMisc},
    {"picture", CoarseType::kMisc},
    {"music", CoarseType::kMisc},
    {"show", CoarseType::kMisc},
    {"broadcast-program", CoarseType::kMisc},
    {"publication", CoarseType::kMisc},
    {"book", CoarseType::kMisc},
    {"magazine", CoarseType::kMisc},
    {"journal", CoarseType::kMisc},
    {"natural-object", CoarseType::kMisc},
    {"award", CoarseType::kMisc},
    {"law", CoarseType::kMisc},
    {"court-decision", CoarseType::kMisc},
    {"treaty", CoarseType::kMisc},
    {"music-key", CoarseType::kMisc},
    {"food-dish", CoarseType::kMisc},
    {"writing-script", CoarseType::kMisc},
    {"program", CoarseType::kMisc},
    {"disease", CoarseType::kMisc},
    {"species", CoarseType::kMisc},
    {"thing", CoarseType::kMisc},
    {"date-entity", CoarseType::kMisc},
    {"*-entity", CoarseType::kMisc},
    {"*-quantity", CoarseType::kMisc},
};

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

}  // namespace

std::string_view CoarseTypeName(CoarseType type) {
  switch (type) {
    case CoarseType::kPerson: return "person";
    case CoarseType::kLocation: return "location";
    case CoarseType::kOrganization: return "organization";
    case CoarseType::kMisc: return "misc";
  }
  return "misc";
}

CoarseType ParseCoarseType(std::string_view name) {
  std::string lower = Lower(name);
  if (lower == "person" || lower == "per") return CoarseType::kPerson;
  if (lower == "location" || lower == "loc") return CoarseType::kLocation;
  if (lower == "organization" || lower == "org") {
    return CoarseType::kOrganization;
  }
  return CoarseType::kMisc;
}

EntityTypeRegistry EntityTypeRegistry::Default() {
  EntityTypeRegistry registry;
  for (const DefaultEntry &e : kDefaults) registry.Add(e.fine, e.coarse);
  return registry;
}

EntityTypeRegistry EntityTypeRegistry::FromTsv(std::string_view text) {
  EntityTypeRegistry registry;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 == line.size() ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kFormat,
                  "registry line " + std::to_string(line_no) +
                      ": expected fine_type<TAB>coarse_type");
    }
    std::string coarse = Lower(line.substr(tab + 1));
    if (coarse != "person" && coarse != "location" &&
        coarse != "organization" && coarse != "misc") {
      throw Error(ErrorCode::kFormat, "registry line " +
                                          std::to_string(line_no) +
                                          ": unknown coarse type " + coarse);
    }
    registry.Add(std::string(line.substr(0, tab)), ParseCoarseType(coarse));
  }
  return registry;
}

EntityTypeRegistry EntityTypeRegistry::Load(const std::string &path) {
  return FromTsv(ReadFile(path));
}

void EntityTypeRegistry::Add(std::string fine_type, CoarseType coarse) {
  if (!fine_type.empty() && fine_type[0] == '*') {
    patterns_[fine_type.substr(1)] = coarse;
  } else {
    exact_[std::move(fine_type)] = coarse;
  }
}

const CoarseType *EntityTypeRegistry::Find(std::string_view fine_type) const {
  if (auto it = exact_.find(fine_type); it != exact_.end()) return &it->second;
  const CoarseType *best = nullptr;
  std::size_t best_len = 0;
  for (const auto &[suffix, coarse] : patterns_) {
    if (fine_type.size() > suffix.size() && suffix.size() >= best_len &&
        fine_type.substr(fine_type.size() - suffix.size()) == suffix) {
      best = &coarse;
      best_len = suffix.size();
    }
  }
  return best;
}

bool EntityTypeRegistry::Contains(std::string_view fine_type) const {
  return Find(fine_type) != nullptr;
}

CoarseType EntityTypeRegistry::Coarse(std::string_view fine_type) const {
  const CoarseType *found = Find(fine_type);
  return found ? *found : CoarseType::kMisc;
}

std::string EntityTypeRegistry::ToTsv() const {
  std::string out;
  for (const auto &[fine, coarse] : exact_) {
    out += fine + "\t" + std::string(CoarseTypeName(coarse)) + "\n";
  }
  for (const auto &[suffix, coarse] : patterns_) {
    out += "*" + suffix + "\t" + std::string(CoarseTypeName(coarse)) + "\n";
  }
  return out;
}

}  // namespace amr
