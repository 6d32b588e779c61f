#include "amr/synthetic.h"

#include <array>
#include <cstdio>
#include <set>
#include <string_view>

#include "amr/alignment_io.h"
#include "amr/linearize.h"
#include "amr/penman.h"
#include "amr/random.h"

namespace amr {

namespace {

struct EntityKind {
  std::string_view type;
  std::string_view ner;
  std::vector<std::string_view> names;
};

const std::vector<EntityKind> &Kinds() {
  static const std::vector<EntityKind> kinds = {
      {"person", "PERSON",
       {"John Smith", "Mary", "Obama", "Ban Ki-moon", "Angela Merkel", "Li Wei",
        "Pedro", "Sarah Jones", "Ahmed", "Yuki Tanaka"}},
      {"country", "LOCATION",
       {"South Korea", "Burundi", "France", "Brazil", "United States", "Japan",
        "Kenya", "Norway", "Iran", "New Zealand"}},
      {"city", "LOCATION",
       {"New York", "Paris", "Seoul", "Nairobi", "Lima", "Oslo", "Hong Kong",
        "Cairo"}},
      {"organization", "ORGANIZATION",
       {"United Nations", "NATO", "Red Cross", "World Bank", "Interpol"}},
      {"company", "ORGANIZATION",
       {"Google", "Samsung", "Acme Corp", "Nokia", "Toyota"}},
  };
  return kinds;
}

struct Predicate {
  std::string_view concept_name;
  std::string_view word;
};

constexpr std::array<Predicate, 8> kPredicates = {{
    {"visit-01", "visited"},
    {"meet-03", "met"},
    {"criticize-01", "criticized"},
    {"support-01", "supports"},
    {"warn-01", "warned"},
    {"praise-01", "praised"},
    {"sue-01", "sued"},
    {"thank-01", "thanked"},
}};

constexpr std::array<std::string_view, 6> kNouns = {
    "official", "minister", "group", "team", "company", "government"};

constexpr std::array<std::string_view, 12> kMonths = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

class Builder {
 public:
  explicit Builder(Rng &rng) : rng_(rng) {}

  SyntheticExample Make(std::string id) {
    SyntheticExample ex;
    ex.id = std::move(id);
    const Predicate &pred = kPredicates[rng_.Below(kPredicates.size())];
    ex.tree.concept_name = std::string(pred.concept_name);

    AddArgument(ex, ":ARG0");
    Emit(ex, pred.word);
    AddArgument(ex, ":ARG1");
    if (rng_.Unit() < 0.4) {
      Emit(ex, "in");
      AddEntity(ex, ":location", PickKind({"city", "country"}));
    }
    if (rng_.Unit() < 0.5) AddDate(ex);
    if (rng_.Unit() < 0.35) AddQuantity(ex);
    if (rng_.Unit() < 0.25) AddPurpose(ex);
    Emit(ex, ".");
    return ex;
  }

 private:
  void Emit(SyntheticExample &ex, std::string_view word) {
    ex.sentence.emplace_back(word);
  }

  void EmitPhrase(SyntheticExample &ex, const std::string &phrase) {
    for (std::string &w : SplitTokens(phrase)) ex.sentence.push_back(std::move(w));
  }

  const EntityKind &PickKind(std::initializer_list<std::string_view> types) {
    std::vector<const EntityKind *> pool;
    for (const EntityKind &k : Kinds()) {
      for (std::string_view t : types) {
        if (k.type == t) pool.push_back(&k);
      }
    }
    return *pool[rng_.Below(pool.size())];
  }

  void AddArgument(SyntheticExample &ex, const std::string &label) {
    if (rng_.Unit() < 0.75) {
      AddEntity(ex, label,
                PickKind({"person", "country", "city", "organization",
                          "company"}));
      return;
    }
    // Common noun, optionally modified by a nationality-style entity.
    std::string_view noun = kNouns[rng_.Below(kNouns.size())];
    SimplifiedGraph node{std::string(noun), {}};
    const std::size_t index = ex.tree.children.size();
    Emit(ex, "the");
    if (rng_.Unit() < 0.5) {
      const EntityKind &kind = PickKind({"country"});
      std::string name = FreshName(kind);
      if (name.empty()) {
        ex.tree.children.push_back({label, std::move(node)});
        Emit(ex, noun);
        return;
      }
      node.children.push_back({":mod", EntityTree(kind.type, name)});
      const std::string path = ChildPath(ChildPath("0", index), 0);
      AlignPhrase(ex, path, name, kind.ner);
    }
    Emit(ex, noun);
    ex.tree.children.push_back({label, std::move(node)});
  }

  void AddEntity(SyntheticExample &ex, const std::string &label,
                 const EntityKind &kind) {
    std::string name = FreshName(kind);
    if (name.empty()) {
      Emit(ex, "someone");
      ex.tree.children.push_back({label, SimplifiedGraph{"someone", {}}});
      return;
    }
    const std::size_t index = ex.tree.children.size();
    ex.tree.children.push_back({label, EntityTree(kind.type, name)});
    AlignPhrase(ex, ChildPath("0", index), name, kind.ner);
  }

  void AddPurpose(SyntheticExample &ex) {
    // Nested event with its own entity argument.
    Emit(ex, "to");
    const EntityKind &kind = PickKind({"country", "city"});
    std::string name = FreshName(kind);
    SimplifiedGraph help{"help-01", {}};
    const std::size_t index = ex.tree.children.size();
    Emit(ex, "help");
    if (name.empty()) {
      help.children.push_back({":ARG1", SimplifiedGraph{"they", {}}});
      Emit(ex, "them");
    } else {
      help.children.push_back({":ARG1", EntityTree(kind.type, name)});
      AlignPhrase(ex, ChildPath(ChildPath("0", index), 0), name, kind.ner);
    }
    ex.tree.children.push_back({":purpose", std::move(help)});
  }

  void AddDate(SyntheticExample &ex) {
    const int year = 1990 + static_cast<int>(rng_.Below(30));
    const int month = 1 + static_cast<int>(rng_.Below(12));
    const int day = 1 + static_cast<int>(rng_.Below(28));
    SimplifiedGraph date{"date-entity", {}};
    const std::size_t index = ex.tree.children.size();
    const std::string date_path = ChildPath("0", index);
    const double style = rng_.Unit();
    if (style < 0.3) {
      // "on 2008-04-05": one token aligned to the whole date.
      date.children = {{":year", Leaf(year)}, {":month", Leaf(month)},
                       {":day", Leaf(day)}};
      Emit(ex, "on");
      char buf[40];
      if (rng_.Unit() < 0.5) {
        std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
      } else {
        std::snprintf(buf, sizeof buf, "%04d%02d%02d", year, month, day);
      }
      ex.alignments.push_back({date_path, ex.sentence.size(),
                               ex.sentence.size() + 1});
      Emit(ex, buf);
    } else if (style < 0.75) {
      // "on April 5 2008": month by name, each component aligned.
      date.children = {{":month", Leaf(month)}, {":day", Leaf(day)},
                       {":year", Leaf(year)}};
      Emit(ex, "on");
      AlignWord(ex, ChildPath(date_path, 0), std::string(kMonths[month - 1]));
      AlignWord(ex, ChildPath(date_path, 1), std::to_string(day));
      AlignWord(ex, ChildPath(date_path, 2), std::to_string(year));
    } else {
      date.children = {{":year", Leaf(year)}};
      Emit(ex, "in");
      AlignWord(ex, ChildPath(date_path, 0), std::to_string(year));
    }
    ex.tree.children.push_back({":time", std::move(date)});
  }

  void AddQuantity(SyntheticExample &ex) {
    const int amount = 2 + static_cast<int>(rng_.Below(500));
    const bool money = rng_.Unit() < 0.5;
    SimplifiedGraph q{money ? "monetary-quantity" : "distance-quantity", {}};
    q.children = {{":quant", Leaf(amount)},
                  {":unit", SimplifiedGraph{money ? "dollar" : "kilometer", {}}}};
    const std::size_t index = ex.tree.children.size();
    Emit(ex, money ? "for" : "over");
    const std::size_t start = ex.sentence.size();
    Emit(ex, std::to_string(amount));
    Emit(ex, money ? "dollars" : "kilometers");
    ex.alignments.push_back({ChildPath("0", index), start, ex.sentence.size()});
    ex.tree.children.push_back({money ? ":compensation" : ":extent", std::move(q)});
  }

  static SimplifiedGraph Leaf(int value) {
    return SimplifiedGraph{std::to_string(value), {}};
  }

  static SimplifiedGraph EntityTree(std::string_view type,
                                    const std::string &name) {
    SimplifiedGraph n{"name", {}};
    Tokens words = SplitTokens(name);
    for (std::size_t i = 0; i < words.size(); ++i) {
      n.children.push_back({":op" + std::to_string(i + 1),
                            SimplifiedGraph{"\"" + words[i] + "\"", {}}});
    }
    return SimplifiedGraph{std::string(type), {{":name", std::move(n)}}};
  }

  void AlignPhrase(SyntheticExample &ex, const std::string &path,
                   const std::string &phrase, std::string_view ner) {
    const std::size_t start = ex.sentence.size();
    EmitPhrase(ex, phrase);
    ex.alignments.push_back({path, start, ex.sentence.size()});
    ex.ner.push_back({start, ex.sentence.size(), std::string(ner)});
  }

  void AlignWord(SyntheticExample &ex, const std::string &path,
                 const std::string &word) {
    ex.alignments.push_back({path, ex.sentence.size(), ex.sentence.size() + 1});
    Emit(ex, word);
  }

  // Empty when every name of the kind is already used in this example.
  std::string FreshName(const EntityKind &kind) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      std::string_view name = kind.names[rng_.Below(kind.names.size())];
      if (used_.insert(std::string(name)).second) return std::string(name);
    }
    return "";
  }

  Rng &rng_;
  std::set<std::string> used_;
};

}  // namespace

std::vector<SyntheticExample> MakeSyntheticCorpus(
    const SyntheticOptions &options) {
  Rng rng(options.seed);
  std::vector<SyntheticExample> out;
  out.reserve(options.examples);
  for (std::size_t i = 0; i < options.examples; ++i) {
    Builder builder(rng);
    out.push_back(builder.Make(options.id_prefix + "." + std::to_string(i + 1)));
  }
  return out;
}

std::string SyntheticAmrDocument(const std::vector<SyntheticExample> &examples) {
  std::string out;
  for (const SyntheticExample &ex : examples) {
    out += "# ::id " + ex.id + "\n";
    out += "# ::snt " + JoinTokens(ex.sentence) + "\n";
    out += SerializePenmanIndented(ToFullAmr(ex.tree)) + "\n\n";
  }
  return out;
}

std::string SyntheticAlignmentsJsonl(
    const std::vector<SyntheticExample> &examples) {
  std::map<std::string, AlignmentSet> sets;
  for (const SyntheticExample &ex : examples) sets[ex.id] = ex.alignments;
  return AlignmentsToJsonl(sets);
}

std::string SyntheticNerJsonl(const std::vector<SyntheticExample> &examples) {
  std::map<std::string, std::vector<NerSpan>> sets;
  for (const SyntheticExample &ex : examples) sets[ex.id] = ex.ner;
  return NerToJsonl(sets);
}

std::vector<std::string> SyntheticSentences(std::size_t count,
                                            std::uint64_t seed) {
  SyntheticOptions options;
  options.examples = count;
  options.seed = seed;
  options.id_prefix = "u";
  std::vector<std::string> out;
  for (const SyntheticExample &ex : MakeSyntheticCorpus(options)) {
    out.push_back(JoinTokens(ex.sentence));
  }
  return out;
}

}  // namespace amr
