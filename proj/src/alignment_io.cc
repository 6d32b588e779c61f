#include "amr/alignment_io.h"

#include <nlohmann/json.hpp>

#include "amr/error.h"

namespace amr {

namespace {

using Json = nlohmann::json;

// Calls fn(json, line_no) for every non-blank line.
template <typename Fn>
void ForEachJsonLine(std::string_view text, std::string_view what, Fn fn) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      fn(Json::parse(line));
    } catch (const Json::exception &ex) {
      throw Error(ErrorCode::kFormat, std::string(what) + " line " +
                                          std::to_string(line_no) + ": " +
                                          ex.what());
    }
  }
}

std::size_t Index(const Json &j, const char *key) {
  long long v = j.at(key).get<long long>();
  if (v < 0) throw Json::other_error::create(501, "negative offset", &j);
  return static_cast<std::size_t>(v);
}

}  // namespace

std::map<std::string, AlignmentSet> ParseAlignmentsJsonl(std::string_view text) {
  std::map<std::string, AlignmentSet> out;
  ForEachJsonLine(text, "alignments", [&](const Json &j) {
    AlignmentSet &set = out[j.at("id").get<std::string>()];
    for (const Json &a : j.at("alignments")) {
      set.push_back({a.at("path").get<std::string>(), Index(a, "start"),
                     Index(a, "end")});
    }
  });
  return out;
}

std::string AlignmentsToJsonl(const std::map<std::string, AlignmentSet> &sets) {
  std::string out;
  for (const auto &[id, set] : sets) {
    Json arr = Json::array();
    for (const Alignment &a : set) {
      arr.push_back({{"path", a.path}, {"start", a.start}, {"end", a.end}});
    }
    out += Json{{"id", id}, {"alignments", std::move(arr)}}.dump() + "\n";
  }
  return out;
}

std::map<std::string, std::vector<NerSpan>> ParseNerJsonl(std::string_view text) {
  std::map<std::string, std::vector<NerSpan>> out;
  ForEachJsonLine(text, "NER spans", [&](const Json &j) {
    std::vector<NerSpan> &spans = out[j.at("id").get<std::string>()];
    for (const Json &s : j.at("spans")) {
      spans.push_back(
          {Index(s, "start"), Index(s, "end"), s.at("type").get<std::string>()});
    }
  });
  return out;
}

std::string NerToJsonl(const std::map<std::string, std::vector<NerSpan>> &sets) {
  std::string out;
  for (const auto &[id, spans] : sets) {
    Json arr = Json::array();
    for (const NerSpan &s : spans) {
      arr.push_back({{"start", s.start}, {"end", s.end}, {"type", s.type}});
    }
    out += Json{{"id", id}, {"spans", std::move(arr)}}.dump() + "\n";
  }
  return out;
}

}  // namespace amr
