#include "amr/penman.h"

#include <algorithm>
#include <unordered_map>

#include "amr/error.h"

namespace amr {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsDelimiter(char c) {
  return IsSpace(c) || c == '(' || c == ')' || c == '"' || c == '/';
}

// Bare symbols of this shape are taken to be variable references; anything
// else that is not a defined variable becomes a constant.
bool LooksLikeVariable(std::string_view s) {
  if (s.empty() || s[0] < 'a' || s[0] > 'z') return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

enum class TokenKind { kOpen, kClose, kSlash, kRole, kString, kSymbol, kEnd };

struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t offset;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::size_t pos) : text_(text), pos_(pos) {}

  Token Peek() {
    if (!peeked_) peeked_ = Scan();
    return *peeked_;
  }

  Token Next() {
    Token t = Peek();
    peeked_.reset();
    return t;
  }

  std::size_t pos() const { return peeked_ ? peeked_->offset : pos_; }

 private:
  Token Scan() {
    SkipSpaceAndComments();
    if (pos_ >= text_.size()) return {TokenKind::kEnd, {}, text_.size()};
    const std::size_t start = pos_;
    const char c = text_[pos_];
    switch (c) {
      case '(':
        ++pos_;
        return {TokenKind::kOpen, text_.substr(start, 1), start};
      case ')':
        ++pos_;
        return {TokenKind::kClose, text_.substr(start, 1), start};
      case '/':
        ++pos_;
        return {TokenKind::kSlash, text_.substr(start, 1), start};
      case '"': {
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
          if (text_[pos_] == '\\') ++pos_;
          ++pos_;
        }
        if (pos_ >= text_.size()) {
          throw ParseError(ErrorCode::kUnexpectedToken, start,
                           "unterminated string");
        }
        ++pos_;
        return {TokenKind::kString, text_.substr(start, pos_ - start), start};
      }
      default:
        break;
    }
    while (pos_ < text_.size() && !IsDelimiter(text_[pos_])) ++pos_;
    std::string_view word = text_.substr(start, pos_ - start);
    if (c == ':') {
      if (word.size() < 2) {
        throw ParseError(ErrorCode::kUnexpectedToken, start, "empty role");
      }
      return {TokenKind::kRole, word, start};
    }
    return {TokenKind::kSymbol, word, start};
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      if (IsSpace(text_[pos_])) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_;
  std::optional<Token> peeked_;
};

class GraphReader {
 public:
  explicit GraphReader(Lexer &lexer) : lexer_(lexer) {}

  AmrGraph Read() {
    Token open = lexer_.Next();
    if (open.kind != TokenKind::kOpen) {
      throw ParseError(ErrorCode::kUnexpectedToken, open.offset,
                       "expected '('");
    }
    NodeId root = ReadNode(open.offset);
    ResolveSymbols();
    return AmrGraph(std::move(nodes_), std::move(edges_), root);
  }

 private:
  struct PendingSymbol {
    std::size_t edge;
    std::string role;
    std::string symbol;
    std::size_t offset;
  };

  // Called after the node's '(' has been consumed.
  NodeId ReadNode(std::size_t open_offset) {
    Token var = lexer_.Next();
    if (var.kind == TokenKind::kEnd) Unbalanced(open_offset);
    if (var.kind != TokenKind::kSymbol) {
      throw ParseError(ErrorCode::kUnexpectedToken, var.offset,
                       "expected variable");
    }
    std::string variable(var.text);
    if (defined_.contains(variable)) {
      throw ParseError(ErrorCode::kDuplicateVariableDefinition, var.offset,
                       "variable '" + variable + "' defined twice");
    }

    Token slash = lexer_.Next();
    if (slash.kind == TokenKind::kEnd) Unbalanced(open_offset);
    if (slash.kind == TokenKind::kClose || slash.kind == TokenKind::kRole) {
      throw ParseError(ErrorCode::kEmptyConcept, slash.offset,
                       "node '" + variable + "' has no concept");
    }
    if (slash.kind != TokenKind::kSlash) {
      throw ParseError(ErrorCode::kUnexpectedToken, slash.offset,
                       "expected '/'");
    }
    Token concept_token = lexer_.Next();
    if (concept_token.kind == TokenKind::kEnd) Unbalanced(open_offset);
    if (concept_token.kind != TokenKind::kSymbol) {
      throw ParseError(ErrorCode::kEmptyConcept, concept_token.offset,
                       "node '" + variable + "' has no concept");
    }

    Node node;
    node.variable = variable;
    std::tie(node.concept_name, node.sense) = SplitSense(concept_token.text);
    const NodeId id{nodes_.size()};
    nodes_.push_back(std::move(node));
    defined_.emplace(variable, id);

    while (true) {
      Token t = lexer_.Next();
      switch (t.kind) {
        case TokenKind::kClose:
          return id;
        case TokenKind::kEnd:
          Unbalanced(open_offset);
        case TokenKind::kRole:
          ReadRelation(id, t, open_offset);
          break;
        default:
          throw ParseError(ErrorCode::kUnexpectedToken, t.offset,
                           "expected role or ')'");
      }
    }
  }

  void ReadRelation(NodeId source, const Token &role_token,
                    std::size_t open_offset) {
    std::string role(role_token.text);
    Token target = lexer_.Next();
    switch (target.kind) {
      case TokenKind::kOpen: {
        // Reserve the edge slot first so edge order is textual order.
        std::size_t slot = edges_.size();
        edges_.push_back({});
        NodeId child = ReadNode(target.offset);
        edges_[slot] = MakeEdge(source, role, child, /*to_variable=*/true);
        break;
      }
      case TokenKind::kString: {
        NodeId constant = AddConstant(std::string(target.text));
        edges_.push_back(MakeEdge(source, role, constant, false));
        break;
      }
      case TokenKind::kSymbol:
        pending_.push_back(
            {edges_.size(), role, std::string(target.text), target.offset});
        edges_.push_back({source, role, source, false});
        break;
      case TokenKind::kEnd:
        Unbalanced(open_offset);
      default:
        throw ParseError(ErrorCode::kUnexpectedToken, target.offset,
                         "role " + role + " has no target");
    }
  }

  void ResolveSymbols() {
    for (const PendingSymbol &p : pending_) {
      const NodeId source = edges_[p.edge].source;
      auto it = defined_.find(p.symbol);
      if (it != defined_.end()) {
        edges_[p.edge] = MakeEdge(source, p.role, it->second, true);
      } else if (LooksLikeVariable(p.symbol)) {
        throw ParseError(ErrorCode::kUndefinedVariableReference, p.offset,
                         "variable '" + p.symbol + "' is never defined");
      } else {
        edges_[p.edge] = MakeEdge(source, p.role, AddConstant(p.symbol), false);
      }
    }
  }

  static Edge MakeEdge(NodeId source, const std::string &role, NodeId target,
                       bool to_variable) {
    if (to_variable && IsInverseRole(role)) {
      return {source, role.substr(0, role.size() - 3), target, true};
    }
    return {source, role, target, false};
  }

  NodeId AddConstant(std::string literal) {
    Node node;
    node.concept_name = std::move(literal);
    node.is_constant = true;
    nodes_.push_back(std::move(node));
    return NodeId{nodes_.size() - 1};
  }

  [[noreturn]] static void Unbalanced(std::size_t open_offset) {
    throw ParseError(ErrorCode::kUnbalancedParens, open_offset,
                     "'(' is never closed");
  }

  Lexer &lexer_;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, NodeId> defined_;
  std::vector<PendingSymbol> pending_;
};

void ExpectOnlyTrailingSpace(Lexer &lexer) {
  Token t = lexer.Next();
  if (t.kind == TokenKind::kEnd) return;
  if (t.kind == TokenKind::kClose) {
    throw ParseError(ErrorCode::kUnbalancedParens, t.offset,
                     "unmatched ')'");
  }
  throw ParseError(ErrorCode::kUnexpectedToken, t.offset,
                   "trailing content after graph");
}

class Writer {
 public:
  Writer(const AmrGraph &graph, bool indent)
      : graph_(graph), indent_(indent), expanded_(graph.nodes().size()) {}

  std::string Write() {
    WriteNode(graph_.root(), 0);
    return std::move(out_);
  }

 private:
  void WriteNode(NodeId id, int depth) {
    const Node &node = graph_.node(id);
    expanded_[id.index] = true;
    out_ += '(';
    out_ += node.variable;
    out_ += " / ";
    out_ += node.Label();
    for (std::size_t ei : graph_.OutgoingEdges(id)) {
      const Edge &e = graph_.edges()[ei];
      if (indent_) {
        out_ += '\n';
        out_.append(static_cast<std::size_t>(6 * (depth + 1)), ' ');
      } else {
        out_ += ' ';
      }
      out_ += e.RenderedLabel();
      out_ += ' ';
      const Node &target = graph_.node(e.target);
      if (target.is_constant) {
        out_ += target.concept_name;
      } else if (expanded_[e.target.index]) {
        out_ += target.variable;
      } else {
        WriteNode(e.target, depth + 1);
      }
    }
    out_ += ')';
  }

  const AmrGraph &graph_;
  bool indent_;
  std::vector<bool> expanded_;
  std::string out_;
};

}  // namespace

AmrGraph ParsePenman(std::string_view text) {
  Lexer lexer(text, 0);
  if (lexer.Peek().kind == TokenKind::kEnd) {
    throw ParseError(ErrorCode::kUnexpectedToken, 0, "no graph in input");
  }
  GraphReader reader(lexer);
  AmrGraph graph = reader.Read();
  ExpectOnlyTrailingSpace(lexer);
  return graph;
}

std::string SerializePenman(const AmrGraph &graph) {
  return Writer(graph, false).Write();
}

std::string SerializePenmanIndented(const AmrGraph &graph) {
  return Writer(graph, true).Write();
}

std::optional<std::string> AmrEntry::Field(std::string_view key) const {
  const std::string marker = "::" + std::string(key);
  for (const std::string &line : metadata) {
    std::size_t at = line.find(marker);
    while (at != std::string::npos) {
      std::size_t end = at + marker.size();
      if (end == line.size() || line[end] == ' ' || line[end] == '\t') {
        std::size_t value_start = line.find_first_not_of(" \t", end);
        if (value_start == std::string::npos) return std::string();
        std::size_t value_end = line.find(" ::", value_start);
        std::string value = line.substr(
            value_start, value_end == std::string::npos
                             ? std::string::npos
                             : value_end - value_start);
        while (!value.empty() && IsSpace(value.back())) value.pop_back();
        return value;
      }
      at = line.find(marker, end);
    }
  }
  return std::nullopt;
}

std::vector<AmrEntry> ParsePenmanDocument(std::string_view text) {
  std::vector<AmrEntry> entries;
  std::vector<std::string> metadata;
  std::size_t pos = 0;
  while (pos < text.size()) {
    char c = text[pos];
    if (IsSpace(c)) {
      ++pos;
    } else if (c == '#') {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string line(text.substr(pos, end - pos));
      if (!line.empty() && line.back() == '\r') line.pop_back();
      metadata.push_back(std::move(line));
      pos = end;
    } else if (c == '(') {
      Lexer lexer(text, pos);
      GraphReader reader(lexer);
      AmrGraph graph = reader.Read();
      entries.push_back({std::move(metadata), std::move(graph), pos});
      metadata.clear();
      pos = lexer.pos();
    } else if (c == ')') {
      throw ParseError(ErrorCode::kUnbalancedParens, pos, "unmatched ')'");
    } else {
      throw ParseError(ErrorCode::kUnexpectedToken, pos,
                       "expected '(' or metadata");
    }
  }
  return entries;
}

std::string SerializePenmanDocument(const std::vector<AmrEntry> &entries) {
  std::string out;
  for (const AmrEntry &entry : entries) {
    for (const std::string &line : entry.metadata) {
      out += line;
      out += '\n';
    }
    out += SerializePenmanIndented(entry.graph);
    out += "\n\n";
  }
  return out;
}

std::size_t LineOfOffset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace amr
