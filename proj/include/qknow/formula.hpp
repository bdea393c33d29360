#pragma once

#include <qknow/errors.hpp>
#include <qknow/knowledge.hpp>
#include <qknow/linalg.hpp>
#include <qknow/model.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qknow {

/// Epistemic event formula. Immutable; subtrees are shared.
class Formula {
 public:
  enum class Kind { atom, top, bot, negation, conjunction, disjunction, knows, everyone, mutual, common };

  static Formula atom(std::string name) { return Formula(Kind::atom, std::move(name), 0, {}); }
  static Formula top() { return Formula(Kind::top, {}, 0, {}); }
  static Formula bot() { return Formula(Kind::bot, {}, 0, {}); }
  static Formula negation(Formula f) { return Formula(Kind::negation, {}, 0, {std::move(f)}); }
  static Formula conjunction(Formula a, Formula b) { return Formula(Kind::conjunction, {}, 0, {std::move(a), std::move(b)}); }
  static Formula disjunction(Formula a, Formula b) { return Formula(Kind::disjunction, {}, 0, {std::move(a), std::move(b)}); }
  /// Agent index is 1-based.
  static Formula knows(std::size_t agent, Formula f) { return Formula(Kind::knows, {}, agent, {std::move(f)}); }
  static Formula everyone(Formula f) { return Formula(Kind::everyone, {}, 0, {std::move(f)}); }
  static Formula mutual(std::size_t depth, Formula f) { return Formula(Kind::mutual, {}, depth, {std::move(f)}); }
  static Formula common(Formula f) { return Formula(Kind::common, {}, 0, {std::move(f)}); }

  Kind kind() const { return node_->kind; }
  /// Event name of an atom.
  const std::string& name() const { return node_->name; }
  /// Agent index of `knows`, depth of `mutual`.
  std::size_t index() const { return node_->index; }
  const Formula& operand() const { return node_->children.at(0); }
  const Formula& lhs() const { return node_->children.at(0); }
  const Formula& rhs() const { return node_->children.at(1); }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    return a.node_->kind == b.node_->kind && a.node_->name == b.node_->name && a.node_->index == b.node_->index &&
           a.node_->children == b.node_->children;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::size_t index;
    std::vector<Formula> children;
  };

  Formula(Kind kind, std::string name, std::size_t index, std::vector<Formula> children)
      : node_(std::make_shared<const Node>(Node{kind, std::move(name), index, std::move(children)})) {}

  std::shared_ptr<const Node> node_;
};

/// Byte offsets [start, end) into the parsed text.
struct SourceSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, const std::string& message)
      : std::runtime_error("syntax error at " + std::to_string(span.start) + ".." + std::to_string(span.end) + ": " +
                           message),
        span_(span) {}

  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// "K" followed only by digits, e.g. "K12".
inline bool is_knows_token(std::string_view s) {
  if (s.size() < 2 || s[0] != 'K') return false;
  for (char c : s.substr(1))
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace detail

/// Identifiers usable as atoms: [A-Za-z_][A-Za-z0-9_]* minus the keywords
/// top, bot, EK, C and the agent-operator spellings K<digits>.
inline bool is_valid_atom_name(std::string_view s) {
  if (s.empty() || !detail::is_ident_start(s[0])) return false;
  for (char c : s)
    if (!detail::is_ident_char(c)) return false;
  if (s == "top" || s == "bot" || s == "EK" || s == "C") return false;
  return !detail::is_knows_token(s);
}

namespace detail {

struct Token {
  enum class Kind { ident, integer, tilde, amp, bar, lparen, rparen, lbracket, rbracket, end };
  Kind kind;
  std::string_view text;
  SourceSpan span;
};

inline std::string describe(const Token& t) {
  return t.kind == Token::Kind::end ? "end of input" : "'" + std::string(t.text) + "'";
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
      continue;
    }
    const std::size_t start = pos;
    Token::Kind kind;
    if (is_ident_start(c)) {
      while (pos < text.size() && is_ident_char(text[pos])) ++pos;
      kind = Token::Kind::ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      kind = Token::Kind::integer;
    } else {
      ++pos;
      switch (c) {
        case '~': kind = Token::Kind::tilde; break;
        case '&': kind = Token::Kind::amp; break;
        case '|': kind = Token::Kind::bar; break;
        case '(': kind = Token::Kind::lparen; break;
        case ')': kind = Token::Kind::rparen; break;
        case '[': kind = Token::Kind::lbracket; break;
        case ']': kind = Token::Kind::rbracket; break;
        default: throw ParseError({start, pos}, "unexpected character '" + std::string(1, c) + "'");
      }
    }
    out.push_back({kind, text.substr(start, pos - start), {start, pos}});
  }
  out.push_back({Token::Kind::end, {}, {text.size(), text.size()}});
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  Formula parse() {
    Formula f = parse_or();
    if (peek().kind != Token::Kind::end) fail(peek(), "'&', '|' or end of input");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)]; }
  const Token& advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const Token& t, const std::string& expected) {
    throw ParseError(t.span, "expected " + expected + ", found " + describe(t));
  }

  const Token& expect(Token::Kind kind, const std::string& what) {
    if (peek().kind != kind) fail(peek(), what);
    return advance();
  }

  static std::size_t to_index(const Token& t, std::string_view digits) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size())
      throw ParseError(t.span, "integer '" + std::string(digits) + "' out of range");
    return value;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (peek().kind == Token::Kind::bar) {
      advance();
      f = Formula::disjunction(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek().kind == Token::Kind::amp) {
      advance();
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    const Token& t = peek();
    if (++depth_ > max_depth) throw ParseError(t.span, "formula nested deeper than " + std::to_string(max_depth));
    struct Unwind {
      std::size_t& depth;
      ~Unwind() { --depth; }
    } unwind{depth_};
    switch (t.kind) {
      case Token::Kind::tilde:
        advance();
        return Formula::negation(parse_unary());
      case Token::Kind::lparen: {
        advance();
        Formula f = parse_or();
        expect(Token::Kind::rparen, "')'");
        return f;
      }
      case Token::Kind::ident:
        return parse_word();
      default:
        fail(t, "formula");
    }
  }

  Formula parse_word() {
    const Token& t = advance();
    const std::string_view word = t.text;
    if (word == "top") return Formula::top();
    if (word == "bot") return Formula::bot();
    if (word == "EK") return Formula::everyone(parse_unary());
    if (word == "C") return Formula::common(parse_unary());
    if (is_knows_token(word)) {
      const std::size_t agent = to_index(t, word.substr(1));
      return Formula::knows(agent, parse_unary());
    }
    if (word == "K" && peek().kind == Token::Kind::integer) {
      const Token& n = advance();
      return Formula::knows(to_index(n, n.text), parse_unary());
    }
    if (word == "M" && peek().kind == Token::Kind::lbracket) {
      advance();
      const Token& n = expect(Token::Kind::integer, "integer depth");
      const std::size_t depth = to_index(n, n.text);
      expect(Token::Kind::rbracket, "']'");
      return Formula::mutual(depth, parse_unary());
    }
    return Formula::atom(std::string(word));
  }

  static constexpr std::size_t max_depth = 512;

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

// Binding strength: prefix operators and atoms 3, "&" 2, "|" 1.
inline int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::disjunction: return 1;
    case Formula::Kind::conjunction: return 2;
    default: return 3;
  }
}

inline void print(const Formula& f, std::string& out);

inline void print_wrapped(const Formula& f, bool parens, std::string& out) {
  if (parens) out += '(';
  print(f, out);
  if (parens) out += ')';
}

inline void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom: out += f.name(); return;
    case K::top: out += "top"; return;
    case K::bot: out += "bot"; return;
    case K::negation:
      out += '~';
      print_wrapped(f.operand(), precedence(f.operand()) < 3, out);
      return;
    case K::knows:
      out += "K" + std::to_string(f.index()) + " ";
      print_wrapped(f.operand(), precedence(f.operand()) < 3, out);
      return;
    case K::everyone:
      out += "EK ";
      print_wrapped(f.operand(), precedence(f.operand()) < 3, out);
      return;
    case K::mutual:
      out += "M[" + std::to_string(f.index()) + "] ";
      print_wrapped(f.operand(), precedence(f.operand()) < 3, out);
      return;
    case K::common:
      out += "C ";
      print_wrapped(f.operand(), precedence(f.operand()) < 3, out);
      return;
    case K::conjunction:
    case K::disjunction: {
      const int p = precedence(f);
      print_wrapped(f.lhs(), precedence(f.lhs()) < p, out);
      out += f.kind() == K::conjunction ? " & " : " | ";
      // Both operators associate to the left, so an equal-precedence right child needs parentheses.
      print_wrapped(f.rhs(), precedence(f.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace detail

inline Formula parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Minimal parenthesization; parse(pretty_print(f)) == f for every formula
/// whose atoms satisfy is_valid_atom_name.
inline std::string pretty_print(const Formula& f) {
  std::string out;
  detail::print(f, out);
  return out;
}

namespace detail {
inline const SpectralFamily& single_family(const Model& m, std::size_t agent_index) {
  const Agent& agent = m.agent(agent_index);
  if (!agent.single_question())
    throw MultiQuestionAgent("agent " + std::to_string(agent_index) + " ('" + agent.id +
                             "') has several question families; K is defined for single-question agents only");
  return agent.questions.front();
}
}  // namespace detail

/// Maps a formula to the event (subspace) it denotes in m.
inline Subspace evaluate(const Model& m, const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::atom: return m.event(f.name());
    case K::top: return Subspace::full(m.dimension());
    case K::bot: return Subspace::zero(m.dimension());
    case K::negation: return orthocomplement(evaluate(m, f.operand()));
    case K::conjunction: return meet(evaluate(m, f.lhs()), evaluate(m, f.rhs()));
    case K::disjunction: return join(evaluate(m, f.lhs()), evaluate(m, f.rhs()));
    case K::knows: {
      const SpectralFamily& family = detail::single_family(m, f.index());
      return knowledge_operator(family, evaluate(m, f.operand()));
    }
    case K::everyone: return mutual_knowledge(m, evaluate(m, f.operand()), 1);
    case K::mutual: return mutual_knowledge(m, evaluate(m, f.operand()), f.index());
    case K::common: return common_knowledge(m, evaluate(m, f.operand())).fixed_point;
  }
  throw std::logic_error("unhandled formula kind");
}

}  // namespace qknow
