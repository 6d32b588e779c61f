#include "amr/anonymize.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <regex>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "amr/error.h"

namespace amr {

namespace {

using Json = nlohmann::json;

constexpr std::string_view kDateEntity = "date-entity";

const SimplifiedGraph *ChildByLabel(const SimplifiedGraph &node,
                                    std::string_view label) {
  for (const SimplifiedEdge &e : node.children) {
    if (e.label == label) return &e.child;
  }
  return nullptr;
}

bool HasLabel(const SimplifiedGraph &node, std::string_view label) {
  return ChildByLabel(node, label) != nullptr;
}

bool IsAlphabetic(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
}

bool IsQuantityType(std::string_view concept_name) {
  constexpr std::string_view kSuffix = "-quantity";
  return concept_name.size() > kSuffix.size() &&
         concept_name.substr(concept_name.size() - kSuffix.size()) == kSuffix;
}

std::string MakeToken(std::string_view category, int index) {
  return std::string(category) + "_" + std::to_string(index);
}

class EntityAnonymizer {
 public:
  explicit EntityAnonymizer(const EntityTypeRegistry &registry)
      : registry_(registry) {}

  AnonymizedGraph Run(const SimplifiedGraph &tree) {
    AnonymizedGraph out{tree, {}};
    Visit(out.tree, "0", out.records);
    return out;
  }

 private:
  void Visit(SimplifiedGraph &node, const std::string &path, Records &records) {
    const std::string &head = node.concept_name;
    if (IsQuantityType(head)) {
      Replace(node, path, AnonymizationGroup::kNumber, number_count_++, records);
      return;
    }
    if (head != kDateEntity && registry_.Contains(head) &&
        HasLabel(node, ":name")) {
      Replace(node, path, AnonymizationGroup::kNamedEntity, ne_count_++,
              records);
      return;
    }
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      Visit(node.children[i].child, ChildPath(path, i), records);
    }
  }

  static void Replace(SimplifiedGraph &node, const std::string &path,
                      AnonymizationGroup group, int index, Records &records) {
    AnonymizationRecord r;
    r.token = MakeToken(node.concept_name, index);
    r.group = group;
    r.index = index;
    r.fine_type = node.concept_name;
    r.subgraph = node;
    r.path = path;
    node = SimplifiedGraph{r.token, {}};
    records.push_back(std::move(r));
  }

  const EntityTypeRegistry &registry_;
  int ne_count_ = 0;
  int number_count_ = 0;
};

// Category token for one date component, or nullopt when the role is not
// anonymized.
std::optional<std::string> DateCategory(const std::string &label,
                                        const SimplifiedGraph &value) {
  const std::string v = Unquote(value.concept_name);
  if (label == ":year") {
    if (!IsNumber(v)) {
      throw Error(ErrorCode::kMalformedDateEntity,
                  "non-numeric :year value " + value.concept_name);
    }
    return "year";
  }
  std::string_view base;
  if (label == ":month") {
    base = "month";
  } else if (label == ":day" || label == ":weekday") {
    base = "day";
  } else {
    return std::nullopt;
  }
  if (IsNumber(v)) return std::string(base) + "-number";
  if (IsAlphabetic(v)) return std::string(base) + "-name";
  throw Error(ErrorCode::kMalformedDateEntity,
              "unreadable " + label + " value " + value.concept_name);
}

class DateAnonymizer {
 public:
  AnonymizedGraph Run(const SimplifiedGraph &tree) {
    AnonymizedGraph out{tree, {}};
    Visit(out.tree, "0", out.records);
    return out;
  }

 private:
  void Visit(SimplifiedGraph &node, const std::string &path, Records &records) {
    if (node.concept_name != kDateEntity) {
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        Visit(node.children[i].child, ChildPath(path, i), records);
      }
      return;
    }
    const int index = count_++;
    AnonymizationRecord whole;
    whole.token = MakeToken(kDateEntity, index);
    whole.group = AnonymizationGroup::kDate;
    whole.index = index;
    whole.fine_type = std::string(kDateEntity);
    whole.subgraph = node;
    whole.path = path;
    records.push_back(std::move(whole));
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      SimplifiedEdge &e = node.children[i];
      std::optional<std::string> category = DateCategory(e.label, e.child);
      if (!category) continue;
      AnonymizationRecord r;
      r.token = MakeToken(*category, index);
      r.group = AnonymizationGroup::kDate;
      r.index = index;
      r.fine_type = *category;
      r.subgraph = e.child;
      r.path = ChildPath(path, i);
      e.child = SimplifiedGraph{r.token, {}};
      records.push_back(std::move(r));
    }
  }

  int count_ = 0;
};

bool IsWholeDate(const AnonymizationRecord &r) {
  return r.group == AnonymizationGroup::kDate &&
         r.subgraph.concept_name == kDateEntity;
}

struct DateParts {
  std::optional<long> year, month, day;
};

DateParts ReadDate(const SimplifiedGraph &date) {
  DateParts parts;
  auto read = [&](std::string_view label) -> std::optional<long> {
    const SimplifiedGraph *v = ChildByLabel(date, label);
    if (!v) return std::nullopt;
    std::string s = Unquote(v->concept_name);
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) {
          return std::isdigit(c) != 0;
        })) {
      return std::nullopt;
    }
    return std::stol(s);
  };
  parts.year = read(":year");
  parts.month = read(":month");
  parts.day = read(":day");
  return parts;
}

struct DateFormat {
  std::string_view marker;
  std::regex pattern;
};

const std::vector<DateFormat> &DateFormats() {
  static const std::vector<DateFormat> formats = {
      {"YYYYMMDD", std::regex(R"(\d{8})")},
      {"YYMMDD", std::regex(R"(\d{6})")},
      {"YYYY-MM-DD", std::regex(R"(\d{4}-\d{2}-\d{2})")},
  };
  return formats;
}

std::optional<std::string> RenderDate(std::string_view marker,
                                      const SimplifiedGraph &date) {
  DateParts p = ReadDate(date);
  if (!p.year || !p.month || !p.day) return std::nullopt;
  char buf[32];
  if (marker == "YYYYMMDD") {
    std::snprintf(buf, sizeof buf, "%04ld%02ld%02ld", *p.year, *p.month,
                  *p.day);
  } else if (marker == "YYMMDD") {
    std::snprintf(buf, sizeof buf, "%02ld%02ld%02ld", *p.year % 100, *p.month,
                  *p.day);
  } else if (marker == "YYYY-MM-DD") {
    std::snprintf(buf, sizeof buf, "%04ld-%02ld-%02ld", *p.year, *p.month,
                  *p.day);
  } else {
    return std::nullopt;
  }
  return std::string(buf);
}

// Marker whose rendering of the date reproduces `surface` exactly.
std::optional<std::string_view> MatchDateFormat(const std::string &surface,
                                                const SimplifiedGraph &date) {
  for (const DateFormat &f : DateFormats()) {
    if (!std::regex_match(surface, f.pattern)) continue;
    if (RenderDate(f.marker, date) == surface) return f.marker;
  }
  return std::nullopt;
}

std::string_view TokenCategory(std::string_view token) {
  std::size_t us = token.rfind('_');
  return us == std::string_view::npos ? token : token.substr(0, us);
}

bool PathWithin(std::string_view path, std::string_view ancestor) {
  return path == ancestor ||
         (path.size() > ancestor.size() &&
          path.substr(0, ancestor.size()) == ancestor &&
          path[ancestor.size()] == '.');
}

std::string Quote(std::string_view s) { return "\"" + std::string(s) + "\""; }

SimplifiedGraph NameNode(const std::string &surface) {
  SimplifiedGraph name{"name", {}};
  Tokens words = SplitTokens(surface);
  for (std::size_t i = 0; i < words.size(); ++i) {
    name.children.push_back(
        {":op" + std::to_string(i + 1), SimplifiedGraph{Quote(words[i]), {}}});
  }
  return name;
}

Json TreeToJson(const SimplifiedGraph &tree) {
  Json children = Json::array();
  for (const SimplifiedEdge &e : tree.children) {
    children.push_back({{"label", e.label}, {"child", TreeToJson(e.child)}});
  }
  return {{"concept", tree.concept_name}, {"children", std::move(children)}};
}

SimplifiedGraph TreeFromJson(const Json &j) {
  SimplifiedGraph tree{j.at("concept").get<std::string>(), {}};
  if (j.contains("children")) {
    for (const Json &c : j.at("children")) {
      tree.children.push_back(
          {c.at("label").get<std::string>(), TreeFromJson(c.at("child"))});
    }
  }
  return tree;
}

}  // namespace

std::string_view GroupName(AnonymizationGroup group) {
  switch (group) {
    case AnonymizationGroup::kNamedEntity: return "NE";
    case AnonymizationGroup::kDate: return "DATE";
    case AnonymizationGroup::kNumber: return "NUMBER";
  }
  return "NE";
}

AnonymizationGroup ParseGroup(std::string_view name) {
  if (name == "NE") return AnonymizationGroup::kNamedEntity;
  if (name == "DATE") return AnonymizationGroup::kDate;
  if (name == "NUMBER") return AnonymizationGroup::kNumber;
  throw Error(ErrorCode::kFormat,
              "unknown anonymization group " + std::string(name));
}

AnonymizedGraph AnonymizeGraph(const SimplifiedGraph &tree,
                               const EntityTypeRegistry &registry) {
  return EntityAnonymizer(registry).Run(tree);
}

AnonymizedGraph AnonymizeDates(const SimplifiedGraph &tree) {
  return DateAnonymizer().Run(tree);
}

SimplifiedGraph ClusterEntities(const SimplifiedGraph &tree, Records &records,
                                const EntityTypeRegistry &registry) {
  std::unordered_map<std::string, std::size_t> by_token;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].group == AnonymizationGroup::kNamedEntity) {
      by_token.emplace(records[i].token, i);
    }
  }
  std::map<std::string, int> next;
  SimplifiedGraph out = tree;
  auto visit = [&](auto &self, SimplifiedGraph &node) -> void {
    if (auto it = by_token.find(node.concept_name); it != by_token.end()) {
      AnonymizationRecord &r = records[it->second];
      std::string cluster(CoarseTypeName(registry.Coarse(r.fine_type)));
      r.index = next[cluster]++;
      r.token = MakeToken(cluster, r.index);
      node.concept_name = r.token;
      by_token.erase(it);
    }
    for (SimplifiedEdge &e : node.children) self(self, e.child);
  };
  visit(visit, out);
  return out;
}

AnonymizedSentence AnonymizeSentence(const Tokens &sentence,
                                     const AlignmentSet &alignments,
                                     Records &records) {
  struct Span {
    std::size_t start, end;
  };
  std::map<std::size_t, Span> spans;  // record index -> merged span
  for (const Alignment &a : alignments) {
    if (a.start >= a.end || a.end > sentence.size()) {
      throw Error(ErrorCode::kSpanOutOfRange,
                  "span [" + std::to_string(a.start) + ", " +
                      std::to_string(a.end) + ") outside sentence of " +
                      std::to_string(sentence.size()) + " tokens");
    }
    std::optional<std::size_t> owner;
    for (std::size_t i = 0; i < records.size(); ++i) {
      const std::string &p = records[i].path;
      if (p.empty() || !PathWithin(a.path, p)) continue;
      if (!owner || p.size() > records[*owner].path.size()) owner = i;
    }
    if (!owner) continue;
    auto [it, inserted] = spans.emplace(*owner, Span{a.start, a.end});
    if (!inserted) {
      it->second.start = std::min(it->second.start, a.start);
      it->second.end = std::max(it->second.end, a.end);
    }
  }

  std::vector<std::pair<Span, std::size_t>> ordered;
  for (const auto &[rec, span] : spans) ordered.push_back({span, rec});
  std::sort(ordered.begin(), ordered.end(), [](const auto &a, const auto &b) {
    return a.first.start < b.first.start;
  });
  for (std::size_t i = 1; i < ordered.size(); ++i) {
    if (ordered[i].first.start < ordered[i - 1].first.end) {
      throw Error(ErrorCode::kOverlappingSpans,
                  "spans for " + records[ordered[i - 1].second].token +
                      " and " + records[ordered[i].second].token + " overlap");
    }
  }

  AnonymizedSentence out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    AnonymizationRecord &r = records[i];
    if (r.path.empty()) continue;
    auto it = spans.find(i);
    if (it == spans.end()) {
      r.surface.clear();
      if (!IsWholeDate(r)) out.unaligned.push_back(r.token);
      continue;
    }
    Tokens span(sentence.begin() + it->second.start,
                sentence.begin() + it->second.end);
    r.surface = JoinTokens(span);
    if (IsWholeDate(r)) {
      std::optional<std::string_view> marker;
      if (span.size() == 1) marker = MatchDateFormat(span[0], r.subgraph);
      r.token = MakeToken(marker ? *marker : kDateEntity, r.index);
    }
  }

  for (const auto &[span, rec] : ordered) {
    out.spans.emplace_back(span.start, span.end);
  }
  out.tokens = sentence;
  for (auto it = ordered.rbegin(); it != ordered.rend(); ++it) {
    const auto &[span, rec] = *it;
    out.tokens.erase(out.tokens.begin() + span.start,
                     out.tokens.begin() + span.end);
    out.tokens.insert(out.tokens.begin() + span.start, records[rec].token);
  }
  return out;
}

std::string EntityName(const AnonymizationRecord &record) {
  const SimplifiedGraph &g = record.subgraph;
  if (IsWholeDate(record)) {
    std::vector<std::string> parts;
    for (const SimplifiedEdge &e : g.children) {
      if (e.child.children.empty()) parts.push_back(Unquote(e.child.concept_name));
    }
    return JoinTokens(parts, "-");
  }
  switch (record.group) {
    case AnonymizationGroup::kNamedEntity: {
      const SimplifiedGraph *name = ChildByLabel(g, ":name");
      if (!name) return "";
      std::vector<std::pair<int, std::string>> ops;
      for (const SimplifiedEdge &e : name->children) {
        if (e.label.rfind(":op", 0) == 0 && IsNumber(e.label.substr(3))) {
          ops.emplace_back(std::stoi(e.label.substr(3)),
                           Unquote(e.child.concept_name));
        }
      }
      std::stable_sort(ops.begin(), ops.end(), [](const auto &a, const auto &b) {
        return a.first < b.first;
      });
      Tokens words;
      for (auto &[k, w] : ops) words.push_back(std::move(w));
      return JoinTokens(words);
    }
    case AnonymizationGroup::kNumber: {
      Tokens parts;
      if (const SimplifiedGraph *q = ChildByLabel(g, ":quant")) {
        parts.push_back(Unquote(q->concept_name));
      }
      if (const SimplifiedGraph *u = ChildByLabel(g, ":unit")) {
        parts.push_back(u->concept_name);
      }
      return JoinTokens(parts);
    }
    case AnonymizationGroup::kDate:
      return Unquote(g.concept_name);
  }
  return "";
}

void AnonymizationTable::Add(const std::string &fine_type,
                             const std::string &name,
                             const std::string &surface, std::int64_t count) {
  if (count < 1) {
    throw Error(ErrorCode::kInvalidArgument, "table counts must be positive");
  }
  counts_[{fine_type, name}][surface] += count;
}

void AnonymizationTable::AddRecords(const Records &records) {
  for (const AnonymizationRecord &r : records) {
    if (!r.surface.empty()) Add(r.fine_type, EntityName(r), r.surface);
  }
}

void AnonymizationTable::Merge(const AnonymizationTable &other) {
  for (const auto &[key, surfaces] : other.counts_) {
    for (const auto &[surface, count] : surfaces) {
      counts_[key][surface] += count;
    }
  }
}

std::optional<std::string> AnonymizationTable::Lookup(
    const std::string &fine_type, const std::string &name) const {
  auto it = counts_.find({fine_type, name});
  if (it == counts_.end() || it->second.empty()) return std::nullopt;
  // std::map iterates surfaces in lexicographic order, so a strict
  // comparison keeps the smallest among equal counts.
  const std::pair<const std::string, std::int64_t> *best = nullptr;
  for (const auto &entry : it->second) {
    if (!best || entry.second > best->second) best = &entry;
  }
  return best->first;
}

std::optional<std::string> AnonymizationTable::ReverseLookup(
    const std::string &surface) const {
  std::map<std::string, std::int64_t> by_type;
  for (const auto &[key, surfaces] : counts_) {
    if (auto it = surfaces.find(surface); it != surfaces.end()) {
      by_type[key.first] += it->second;
    }
  }
  const std::pair<const std::string, std::int64_t> *best = nullptr;
  for (const auto &entry : by_type) {
    if (!best || entry.second > best->second) best = &entry;
  }
  if (!best) return std::nullopt;
  return best->first;
}

std::string AnonymizationTable::ToJson() const {
  Json entries = Json::array();
  for (const auto &[key, surfaces] : counts_) {
    Json s = Json::object();
    for (const auto &[surface, count] : surfaces) s[surface] = count;
    entries.push_back(
        {{"fine_type", key.first}, {"name", key.second}, {"surfaces", s}});
  }
  return Json{{"entries", std::move(entries)}}.dump(2) + "\n";
}

AnonymizationTable AnonymizationTable::FromJson(std::string_view text) {
  AnonymizationTable table;
  try {
    Json j = Json::parse(text);
    for (const Json &e : j.at("entries")) {
      const std::string fine = e.at("fine_type").get<std::string>();
      const std::string name = e.at("name").get<std::string>();
      for (const auto &[surface, count] : e.at("surfaces").items()) {
        table.Add(fine, name, surface, count.get<std::int64_t>());
      }
    }
  } catch (const Json::exception &ex) {
    throw Error(ErrorCode::kFormat,
                std::string("anonymization table: ") + ex.what());
  } catch (const Error &ex) {
    throw Error(ErrorCode::kFormat,
                std::string("anonymization table: ") + ex.what());
  }
  return table;
}

Deanonymized DeanonymizeOutput(const Tokens &tokens, const Records &records,
                               const AnonymizationTable &table) {
  std::unordered_map<std::string, const AnonymizationRecord *> by_token;
  for (const AnonymizationRecord &r : records) by_token.emplace(r.token, &r);

  Deanonymized out;
  for (const std::string &tok : tokens) {
    auto it = by_token.find(tok);
    if (it == by_token.end()) {
      out.tokens.push_back(tok);
      if (LooksLikeAnonToken(tok)) out.unresolved.push_back(tok);
      continue;
    }
    const AnonymizationRecord &r = *it->second;
    std::optional<std::string> text;
    if (IsWholeDate(r)) text = RenderDate(TokenCategory(r.token), r.subgraph);
    const std::string name = EntityName(r);
    if (!text) text = table.Lookup(r.fine_type, name);
    if (!text && !name.empty()) text = name;
    if (!text && !r.surface.empty()) text = r.surface;
    if (!text) {
      out.tokens.push_back(tok);
      out.unresolved.push_back(tok);
      continue;
    }
    for (std::string &w : SplitTokens(*text)) out.tokens.push_back(std::move(w));
  }
  return out;
}

NerNormalized NerNormalize(const Tokens &sentence,
                           const std::vector<NerSpan> &spans,
                           const AnonymizationTable &table) {
  std::vector<NerSpan> ordered = spans;
  std::sort(ordered.begin(), ordered.end(),
            [](const NerSpan &a, const NerSpan &b) { return a.start < b.start; });
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const NerSpan &s = ordered[i];
    if (s.start >= s.end || s.end > sentence.size()) {
      throw Error(ErrorCode::kSpanOutOfRange,
                  "NER span [" + std::to_string(s.start) + ", " +
                      std::to_string(s.end) + ") outside sentence");
    }
    if (i > 0 && s.start < ordered[i - 1].end) {
      throw Error(ErrorCode::kOverlappingSpans, "NER spans overlap");
    }
  }

  NerNormalized out;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const NerSpan &s = ordered[i];
    AnonymizationRecord r;
    r.surface = JoinTokens(Tokens(sentence.begin() + s.start,
                                  sentence.begin() + s.end));
    std::optional<std::string> fine = table.ReverseLookup(r.surface);
    r.fine_type = fine ? *fine
                       : std::string(CoarseTypeName(ParseCoarseType(s.type)));
    r.group = AnonymizationGroup::kNamedEntity;
    r.index = static_cast<int>(i);
    r.token = MakeToken(r.fine_type, r.index);
    out.records.push_back(std::move(r));
  }
  out.tokens = sentence;
  for (std::size_t i = ordered.size(); i > 0; --i) {
    const NerSpan &s = ordered[i - 1];
    out.tokens.erase(out.tokens.begin() + s.start, out.tokens.begin() + s.end);
    out.tokens.insert(out.tokens.begin() + s.start, out.records[i - 1].token);
  }
  return out;
}

RecoveredGraph RecoverAmrEntities(const SimplifiedGraph &parsed,
                                  const Records &records) {
  std::unordered_map<std::string, const AnonymizationRecord *> by_token;
  for (const AnonymizationRecord &r : records) by_token.emplace(r.token, &r);

  RecoveredGraph out{parsed, {}};
  auto visit = [&](auto &self, SimplifiedGraph &node) -> void {
    auto it = by_token.find(node.concept_name);
    if (it == by_token.end()) {
      if (LooksLikeAnonToken(node.concept_name)) {
        out.unmatched.push_back(node.concept_name);
      }
      for (SimplifiedEdge &e : node.children) self(self, e.child);
      return;
    }
    const AnonymizationRecord &r = *it->second;
    SimplifiedGraph expanded;
    const bool named = r.group == AnonymizationGroup::kNamedEntity &&
                       !r.surface.empty();
    if (named && !r.subgraph.empty()) {
      expanded = r.subgraph;
      bool replaced = false;
      for (SimplifiedEdge &e : expanded.children) {
        if (e.label == ":name" && !replaced) {
          e.child = NameNode(r.surface);
          replaced = true;
        }
      }
      if (!replaced) expanded.children.push_back({":name", NameNode(r.surface)});
    } else if (named) {
      expanded = SimplifiedGraph{r.fine_type, {{":name", NameNode(r.surface)}}};
    } else if (!r.subgraph.empty()) {
      expanded = r.subgraph;
    } else {
      out.unmatched.push_back(node.concept_name);
      for (SimplifiedEdge &e : node.children) self(self, e.child);
      return;
    }
    // Children the model attached to the token itself are kept.
    for (SimplifiedEdge &e : node.children) {
      self(self, e.child);
      expanded.children.push_back(std::move(e));
    }
    node = std::move(expanded);
  };
  visit(visit, out.tree);
  return out;
}

bool LooksLikeAnonToken(std::string_view token) {
  static const std::regex pattern(R"([A-Za-z][A-Za-z-]*_\d+)");
  return std::regex_match(token.begin(), token.end(), pattern);
}

std::string RecordsToJson(const Records &records) {
  Json arr = Json::array();
  for (const AnonymizationRecord &r : records) {
    arr.push_back({{"token", r.token},
                   {"group", GroupName(r.group)},
                   {"index", r.index},
                   {"fine_type", r.fine_type},
                   {"surface", r.surface},
                   {"path", r.path},
                   {"subgraph", TreeToJson(r.subgraph)}});
  }
  return arr.dump();
}

Records RecordsFromJson(std::string_view text) {
  Records records;
  try {
    for (const Json &j : Json::parse(text)) {
      AnonymizationRecord r;
      r.token = j.at("token").get<std::string>();
      r.group = ParseGroup(j.at("group").get<std::string>());
      r.index = j.at("index").get<int>();
      r.fine_type = j.at("fine_type").get<std::string>();
      r.surface = j.value("surface", "");
      r.path = j.value("path", "");
      if (j.contains("subgraph")) r.subgraph = TreeFromJson(j.at("subgraph"));
      records.push_back(std::move(r));
    }
  } catch (const Json::exception &ex) {
    throw Error(ErrorCode::kFormat, std::string("records: ") + ex.what());
  }
  return records;
}

}  // namespace amr
