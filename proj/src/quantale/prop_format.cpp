// Copyright 2026 The Quantale Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

#include "quantale/dsl.hpp"
#include "quantale/dsl_detail.hpp"
#include "quantale/error.hpp"

namespace quantale {

namespace {

enum class TokenKind { Open, Close, Atom, Ref, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t offset;
};

struct SyntaxError {
  std::size_t offset;
  std::string message;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto delimiter = [&](char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ';' ||
           c == '#';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '(') {
      out.push_back({TokenKind::Open, "(", i++});
    } else if (c == ')') {
      out.push_back({TokenKind::Close, ")", i++});
    } else {
      const std::size_t start = i;
      const bool ref = c == '#';
      if (ref) ++i;
      while (i < text.size() && !delimiter(text[i])) ++i;
      std::string word(text.substr(start + (ref ? 1 : 0), i - start - (ref ? 1 : 0)));
      if (ref && word.empty()) throw SyntaxError{start, "expected a name after '#'"};
      out.push_back({ref ? TokenKind::Ref : TokenKind::Atom, std::move(word), start});
    }
  }
  out.push_back({TokenKind::End, "", text.size()});
  return out;
}

class PropParser {
 public:
  explicit PropParser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  void parse();

  ScopeGraph graph;
  std::vector<std::pair<std::string, std::size_t>> bindings;  // name, offset

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  void expect(TokenKind kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    next();
  }
  [[noreturn]] void fail(const Token& at, std::string message) const {
    if (at.kind == TokenKind::End) message += " before end of input";
    throw SyntaxError{at.offset, std::move(message)};
  }
  std::string name(const char* what);
  bool binding_ahead() const;
  NodeId node();
  NodeId located(NodeId id, std::size_t offset);

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::map<std::string, NodeId> scope_;
  std::vector<std::pair<NodeId, std::size_t>> offsets_;

 public:
  const std::vector<std::pair<NodeId, std::size_t>>& offsets() const { return offsets_; }
};

std::string PropParser::name(const char* what) {
  const Token& t = peek();
  if (t.kind != TokenKind::Atom) fail(t, std::string("expected ") + what);
  if (detail::is_reserved(t.text)) fail(t, "'" + t.text + "' is a keyword, not " + what);
  if (!detail::is_identifier(t.text)) fail(t, "'" + t.text + "' is not a valid " + what);
  return next().text;
}

bool PropParser::binding_ahead() const {
  // Every parenthesized item of a let except the last is a binding.
  if (peek().kind != TokenKind::Open) return false;
  std::size_t depth = 0;
  for (std::size_t i = pos_; i < tokens_.size(); ++i) {
    if (tokens_[i].kind == TokenKind::Open) ++depth;
    if (tokens_[i].kind == TokenKind::Close && --depth == 0)
      return i + 1 < tokens_.size() && tokens_[i + 1].kind != TokenKind::Close;
    if (tokens_[i].kind == TokenKind::End) return false;
  }
  return false;
}

NodeId PropParser::located(NodeId id, std::size_t offset) {
  offsets_.emplace_back(id, offset);
  return id;
}

void PropParser::parse() {
  if (peek().kind == TokenKind::Open && peek(1).kind == TokenKind::Atom && peek(1).text == "let") {
    next();
    next();
    while (binding_ahead()) {
      next();
      const Token& at = peek();
      std::string bound = name("a binding name");
      if (scope_.count(bound)) fail(at, "duplicate let name '" + bound + "'");
      const NodeId id = node();
      expect(TokenKind::Close, "')' closing the binding");
      scope_[bound] = id;
      graph.set_alias(bound, id);
      bindings.emplace_back(bound, at.offset);
    }
    graph.set_root(node());
    expect(TokenKind::Close, "')' closing let");
  } else {
    graph.set_root(node());
  }
  if (peek().kind != TokenKind::End) fail(peek(), "unexpected input after the proposition");
}

NodeId PropParser::node() {
  const Token& t = peek();
  if (t.kind == TokenKind::Atom) {
    if (t.text == "true") {
      next();
      return located(graph.add_tautology(), t.offset);
    }
    fail(t, "expected a proposition, found '" + t.text + "'");
  }
  if (t.kind == TokenKind::Ref) {
    auto it = scope_.find(t.text);
    if (it == scope_.end()) fail(t, "unknown reference '#" + t.text + "'");
    next();
    return it->second;
  }
  if (t.kind != TokenKind::Open) fail(t, "expected a proposition");
  const std::size_t open = t.offset;
  next();
  const Token& head = peek();
  if (head.kind != TokenKind::Atom) fail(head, "expected an operator or predicate name");

  if (head.text == "and") {
    next();
    std::vector<NodeId> children;
    while (peek().kind != TokenKind::Close) {
      if (peek().kind == TokenKind::End) fail(peek(), "expected ')'");
      children.push_back(node());
    }
    if (children.empty()) fail(peek(), "'and' needs at least one operand");
    next();
    return located(graph.add_conjunction(std::move(children)), open);
  }
  if (head.text == "let") fail(head, "'let' is only allowed at the top level");
  if (head.text == "true") fail(head, "'true' takes no arguments");

  if (auto kind = parse_quantifier_keyword(head.text)) {
    next();
    expect(TokenKind::Open, "'(' starting the bound variables");
    std::vector<std::string> bound;
    while (peek().kind != TokenKind::Close) bound.push_back(name("a variable"));
    if (bound.empty()) fail(peek(), "a quantifier binds at least one variable");
    next();
    const NodeId restriction = node();
    const NodeId body = node();
    expect(TokenKind::Close, "')' after the quantifier body");
    return located(graph.add_quantifier(*kind, std::move(bound), restriction, body), open);
  }

  if (peek(1).kind == TokenKind::Open) fail(head, "unknown quantifier keyword '" + head.text + "'");
  std::string predicate = name("a predicate name");
  std::string variable = name("a variable");
  expect(TokenKind::Close, "')' after the predicate argument");
  return located(graph.add_application(std::move(predicate), std::move(variable)), open);
}

/// Keeps only nodes reachable from the root, renumbered in creation order.
ScopeGraph compact(const ScopeGraph& g, const std::vector<bool>& keep) {
  ScopeGraph out;
  std::vector<NodeId> remap(g.size(), 0);
  for (NodeId id = 0; id < g.size(); ++id) {
    if (!keep[id]) continue;
    ScopeNode n = g.node(id);
    if (auto* c = std::get_if<Conjunction>(&n.value)) {
      for (auto& child : c->children) child = remap[child];
    } else if (auto* q = std::get_if<Quantifier>(&n.value)) {
      q->restriction = remap[q->restriction];
      q->body = remap[q->body];
    }
    remap[id] = out.add(std::move(n));
  }
  out.set_root(remap[g.root()]);
  for (const auto& [name, id] : g.aliases()) {
    if (keep[id]) out.set_alias(name, remap[id]);
  }
  return out;
}

}  // namespace

ParseResult<ScopeGraph> parse_prop(std::string_view text) {
  ParseResult<ScopeGraph> result;
  try {
    PropParser parser(tokenize(text));
    parser.parse();
    const ScopeGraph& g = parser.graph;
    // Attach locations, then drop bindings the root never reaches.
    ScopeGraph located;
    {
      std::map<NodeId, std::size_t> where(parser.offsets().begin(), parser.offsets().end());
      for (NodeId id = 0; id < g.size(); ++id) {
        ScopeNode n = g.node(id);
        if (auto it = where.find(id); it != where.end())
          n.location = detail::offset_location(text, it->second);
        located.add(std::move(n));
      }
      located.set_root(g.root());
      for (const auto& [name, id] : g.aliases()) located.set_alias(name, id);
    }
    const ScopeAnalysis a = analyze(located);
    for (const auto& [name, offset] : parser.bindings) {
      if (!a.reachable[located.aliases().at(name)])
        result.diagnostics.push_back(detail::make_diagnostic(
            text, detail::offset_location(text, offset),
            "let binding '" + name + "' is never used", Severity::Warning));
    }
    result.value = compact(located, a.reachable);
  } catch (const SyntaxError& e) {
    result.diagnostics.push_back(
        detail::make_diagnostic(text, detail::offset_location(text, e.offset), e.message));
  }
  return result;
}

std::string serialize_prop(const ScopeGraph& graph) {
  const ScopeAnalysis a = analyze(graph);

  std::vector<NodeId> shared;
  for (NodeId id : a.order) {
    if (a.parent_edges[id] >= 2) shared.push_back(id);
  }
  std::map<NodeId, std::string> names;
  std::set<std::string> used;
  for (const auto& [name, id] : graph.aliases()) {
    if (a.parent_edges[id] < 2 || names.count(id)) continue;
    if (!detail::is_identifier(name) || detail::is_reserved(name)) continue;
    names[id] = name;
    used.insert(name);
  }
  std::size_t counter = 0;
  for (NodeId id : shared) {
    if (names.count(id)) continue;
    std::string candidate;
    do {
      candidate = "n" + std::to_string(++counter);
    } while (used.count(candidate));
    names[id] = candidate;
    used.insert(candidate);
  }

  std::function<std::string(NodeId, bool)> expr = [&](NodeId id, bool top) -> std::string {
    if (!top) {
      if (auto it = names.find(id); it != names.end()) return "#" + it->second;
    }
    const auto& value = graph.node(id).value;
    if (std::holds_alternative<Tautology>(value)) return "true";
    if (const auto* app = std::get_if<Application>(&value))
      return "(" + app->predicate + " " + app->variable + ")";
    if (const auto* c = std::get_if<Conjunction>(&value)) {
      std::string out = "(and";
      for (NodeId child : c->children) out += " " + expr(child, false);
      return out + ")";
    }
    const auto& q = std::get<Quantifier>(value);
    if (q.shape.kind() == QuantifierKind::Custom)
      throw Error(ErrorCode::InvalidArgument,
                  "custom quantifier '" + q.shape.name() + "' has no surface syntax");
    std::string out = std::string("(") + keyword(q.shape.kind()) + " (";
    for (std::size_t i = 0; i < q.bound.size(); ++i) out += (i ? " " : "") + q.bound[i];
    return out + ") " + expr(q.restriction, false) + " " + expr(q.body, false) + ")";
  };

  if (shared.empty()) return expr(graph.root(), true) + "\n";
  std::string out = "(let\n";
  for (NodeId id : shared) out += "  (" + names[id] + " " + expr(id, true) + ")\n";
  return out + "  " + expr(graph.root(), true) + ")\n";
}

bool structurally_equal(const ScopeGraph& a, const ScopeGraph& b) {
  if (a.size() == 0 || b.size() == 0) return a.size() == b.size();
  std::map<NodeId, NodeId> forward, backward;
  std::function<bool(NodeId, NodeId)> same = [&](NodeId x, NodeId y) -> bool {
    if (x >= a.size() || y >= b.size()) return false;
    if (auto it = forward.find(x); it != forward.end()) return it->second == y;
    if (backward.count(y)) return false;
    forward[x] = y;
    backward[y] = x;
    const auto& vx = a.node(x).value;
    const auto& vy = b.node(y).value;
    if (vx.index() != vy.index()) return false;
    if (std::holds_alternative<Tautology>(vx)) return true;
    if (const auto* app = std::get_if<Application>(&vx)) return *app == std::get<Application>(vy);
    if (const auto* cx = std::get_if<Conjunction>(&vx)) {
      const auto& cy = std::get<Conjunction>(vy);
      if (cx->children.size() != cy.children.size()) return false;
      for (std::size_t i = 0; i < cx->children.size(); ++i) {
        if (!same(cx->children[i], cy.children[i])) return false;
      }
      return true;
    }
    const auto& qx = std::get<Quantifier>(vx);
    const auto& qy = std::get<Quantifier>(vy);
    return qx.shape == qy.shape && qx.bound == qy.bound && same(qx.restriction, qy.restriction) &&
           same(qx.body, qy.body);
  };
  return same(a.root(), b.root());
}

}  // namespace quantale
