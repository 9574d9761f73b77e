#include "tabformula/formula.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <utility>

#include "tabformula/errors.hpp"

namespace tabformula {

std::string_view to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Op: return "OP";
    case TokenKind::Func: return "FUNC";
    case TokenKind::Cell: return "CELL";
    case TokenKind::Const: return "CONST";
    case TokenKind::LParen: return "LPAREN";
    case TokenKind::RParen: return "RPAREN";
    case TokenKind::Comma: return "COMMA";
    case TokenKind::RangeSep: return "RANGESEP";
  }
  return "OP";
}

std::string_view to_string(ConstKind k) {
  switch (k) {
    case ConstKind::Str: return "str";
    case ConstKind::Num: return "num";
    case ConstKind::Bool: return "bool";
  }
  return "num";
}

std::string_view to_string(FilterReason r) {
  switch (r) {
    case FilterReason::Ok: return "Ok";
    case FilterReason::CrossSheet: return "CrossSheet";
    case FilterReason::CrossFile: return "CrossFile";
    case FilterReason::ArrayFormula: return "ArrayFormula";
    case FilterReason::UserDefinedFunction: return "UserDefinedFunction";
    case FilterReason::ParseError: return "ParseError";
  }
  return "Ok";
}

std::string_view to_string(FormulaKind k) {
  switch (k) {
    case FormulaKind::Op: return "OP";
    case FormulaKind::Func: return "FUNC";
    case FormulaKind::Cell: return "CELL";
    case FormulaKind::Const: return "CONST";
    case FormulaKind::Special: return "SPECIAL";
  }
  return "SPECIAL";
}

std::string_view to_string(RangeCounting c) { return c == RangeCounting::Cell1 ? "cell1" : "cell3"; }

FormulaAst FormulaAst::op(std::string symbol, std::vector<FormulaAst> children) {
  FormulaAst n;
  n.kind = NodeKind::Op;
  n.text = std::move(symbol);
  n.children = std::move(children);
  return n;
}

FormulaAst FormulaAst::func(std::string name, std::vector<FormulaAst> args) {
  FormulaAst n;
  n.kind = NodeKind::Func;
  n.text = std::move(name);
  n.children = std::move(args);
  return n;
}

FormulaAst FormulaAst::cell(CellAddress a) {
  FormulaAst n;
  n.kind = NodeKind::CellRef;
  n.start = n.end = a;
  n.text = format_address(a);
  return n;
}

FormulaAst FormulaAst::range(CellAddress a, CellAddress b) {
  FormulaAst n;
  n.kind = NodeKind::RangeRef;
  n.start = {std::min(a.col, b.col), std::min(a.row, b.row)};
  n.end = {std::max(a.col, b.col), std::max(a.row, b.row)};
  n.text = format_address(n.start) + ":" + format_address(n.end);
  return n;
}

FormulaAst FormulaAst::constant(ConstKind kind, std::string text) {
  FormulaAst n;
  n.kind = NodeKind::Const;
  n.const_kind = kind;
  n.text = std::move(text);
  return n;
}

bool operator==(const FormulaAst& a, const FormulaAst& b) {
  if (a.kind != b.kind || a.text != b.text || a.children.size() != b.children.size()) return false;
  if (a.kind == NodeKind::Const && a.const_kind != b.const_kind) return false;
  if ((a.kind == NodeKind::CellRef || a.kind == NodeKind::RangeRef) && (a.start != b.start || a.end != b.end)) {
    return false;
  }
  return std::equal(a.children.begin(), a.children.end(), b.children.begin());
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

constexpr std::array<std::string_view, 8> kErrorLiterals = {
    "#DIV/0!", "#GETTING_DATA", "#N/A", "#NAME?", "#NULL!", "#NUM!", "#REF!", "#VALUE!",
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\' || c == '$';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$';
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::optional<std::string_view> match_error_literal(std::string_view rest) {
  for (auto lit : kErrorLiterals) {
    if (rest.size() >= lit.size() && upper(rest.substr(0, lit.size())) == lit) return lit;
  }
  return std::nullopt;
}

std::optional<CellAddress> as_cell(std::string_view ident) {
  try {
    return parse_address(ident);
  } catch (const AddressParseError&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<FormulaToken> lex(std::string_view s) {
  std::vector<FormulaToken> out;
  std::size_t i = 0;
  auto push = [&](TokenKind k, std::string lexeme, std::size_t b, std::size_t e, ConstKind ck = ConstKind::Num) {
    out.push_back(FormulaToken{k, std::move(lexeme), {b, e}, ck});
  };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t b = i;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '"') {
      ++i;
      for (;;) {
        if (i >= s.size()) throw ParseError("unterminated string literal", b, s.size());
        if (s[i] == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        ++i;
      }
      push(TokenKind::Const, std::string(s.substr(b, i - b)), b, i, ConstKind::Str);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
          i = j;
        }
      }
      if (i < s.size() && is_ident_start(s[i])) throw ParseError("malformed number", b, i + 1);
      push(TokenKind::Const, upper(s.substr(b, i - b)), b, i, ConstKind::Num);
      continue;
    }
    if (c == '#') {
      auto lit = match_error_literal(s.substr(i));
      if (!lit) throw ParseError("unknown error literal", b, b + 1);
      i += lit->size();
      push(TokenKind::Const, std::string(*lit), b, i, ConstKind::Str);
      continue;
    }
    if (is_ident_start(c)) {
      while (i < s.size() && is_ident_char(s[i])) ++i;
      const std::string ident = upper(s.substr(b, i - b));
      if (i < s.size() && s[i] == '(') {
        if (ident.find('$') != std::string::npos) throw ParseError("invalid function name", b, i);
        push(TokenKind::Func, ident, b, i);
      } else if (auto cell = as_cell(ident)) {
        push(TokenKind::Cell, format_address(*cell), b, i);
      } else if (ident == "TRUE" || ident == "FALSE") {
        push(TokenKind::Const, ident, b, i, ConstKind::Bool);
      } else {
        throw ParseError("unsupported name '" + ident + "'", b, i);
      }
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "<>" || two == "<=" || two == ">=") {
      i += 2;
      push(TokenKind::Op, std::string(two), b, i);
      continue;
    }
    ++i;
    switch (c) {
      case '+': case '-': case '*': case '/': case '^': case '&': case '=': case '<': case '>': case '%':
        push(TokenKind::Op, std::string(1, c), b, i);
        break;
      case '(': push(TokenKind::LParen, "(", b, i); break;
      case ')': push(TokenKind::RParen, ")", b, i); break;
      case ',': push(TokenKind::Comma, ",", b, i); break;
      case ':': push(TokenKind::RangeSep, ":", b, i); break;
      default: throw ParseError(std::string("unexpected character '") + c + "'", b, i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::vector<FormulaToken> tokens) : text_(text), toks_(std::move(tokens)) {}

  FormulaAst parse_formula() {
    if (toks_.empty()) throw ParseError("empty formula", 0, text_.size());
    FormulaAst root = comparison();
    if (pos_ != toks_.size()) fail("unexpected token '" + toks_[pos_].lexeme + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    if (pos_ < toks_.size()) throw ParseError(what, toks_[pos_].span.begin, toks_[pos_].span.end);
    throw ParseError(what, text_.size(), text_.size());
  }

  const FormulaToken* peek() const { return pos_ < toks_.size() ? &toks_[pos_] : nullptr; }

  bool peek_op(std::initializer_list<std::string_view> symbols) const {
    const auto* t = peek();
    if (!t || t->kind != TokenKind::Op) return false;
    return std::find(symbols.begin(), symbols.end(), t->lexeme) != symbols.end();
  }

  FormulaAst binary(std::string symbol, FormulaAst lhs, FormulaAst rhs) {
    Span span{lhs.span.begin, rhs.span.end};
    FormulaAst n = FormulaAst::op(std::move(symbol), {});
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    n.span = span;
    return n;
  }

  FormulaAst unary(std::string symbol, FormulaAst operand, Span span) {
    FormulaAst n = FormulaAst::op(std::move(symbol), {});
    n.children.push_back(std::move(operand));
    n.span = span;
    return n;
  }

  template <typename Next>
  FormulaAst left_assoc(std::initializer_list<std::string_view> symbols, Next next) {
    FormulaAst lhs = (this->*next)();
    while (peek_op(symbols)) {
      std::string sym = toks_[pos_++].lexeme;
      FormulaAst rhs = (this->*next)();
      lhs = binary(std::move(sym), std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  FormulaAst comparison() { return left_assoc({"=", "<>", "<", ">", "<=", ">="}, &Parser::concat); }
  FormulaAst concat() { return left_assoc({"&"}, &Parser::additive); }
  FormulaAst additive() { return left_assoc({"+", "-"}, &Parser::multiplicative); }
  FormulaAst multiplicative() { return left_assoc({"*", "/"}, &Parser::prefix_unary); }

  FormulaAst prefix_unary() {
    if (peek_op({"-", "+"})) {
      const FormulaToken& t = toks_[pos_++];
      FormulaAst operand = prefix_unary();
      if (t.lexeme == "+") return operand;
      Span span{t.span.begin, operand.span.end};
      return unary("-", std::move(operand), span);
    }
    return power();
  }

  FormulaAst power() {
    FormulaAst lhs = postfix();
    while (peek_op({"^"})) {
      ++pos_;
      FormulaAst rhs = power_operand();
      lhs = binary("^", std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  FormulaAst power_operand() {
    if (peek_op({"-", "+"})) {
      const FormulaToken& t = toks_[pos_++];
      FormulaAst operand = power_operand();
      if (t.lexeme == "+") return operand;
      Span span{t.span.begin, operand.span.end};
      return unary("-", std::move(operand), span);
    }
    return postfix();
  }

  FormulaAst postfix() {
    FormulaAst node = primary();
    while (peek_op({"%"})) {
      Span span{node.span.begin, toks_[pos_].span.end};
      ++pos_;
      node = unary("%", std::move(node), span);
    }
    return node;
  }

  FormulaAst primary() {
    const FormulaToken* t = peek();
    if (!t) fail("unexpected end of formula");
    switch (t->kind) {
      case TokenKind::Const: {
        ++pos_;
        FormulaAst n = FormulaAst::constant(t->const_kind, t->lexeme);
        n.span = t->span;
        return n;
      }
      case TokenKind::Cell: {
        ++pos_;
        const CellAddress a = parse_address(t->lexeme);
        const FormulaToken* sep = peek();
        if (sep && sep->kind == TokenKind::RangeSep) {
          ++pos_;
          const FormulaToken* rhs = peek();
          if (!rhs || rhs->kind != TokenKind::Cell) fail("expected cell after ':'");
          ++pos_;
          FormulaAst n = FormulaAst::range(a, parse_address(rhs->lexeme));
          n.span = {t->span.begin, rhs->span.end};
          return n;
        }
        FormulaAst n = FormulaAst::cell(a);
        n.span = t->span;
        return n;
      }
      case TokenKind::Func: return call();
      case TokenKind::LParen: {
        ++pos_;
        FormulaAst inner = comparison();
        const FormulaToken* close = peek();
        if (!close || close->kind != TokenKind::RParen) fail("expected ')'");
        ++pos_;
        return inner;
      }
      default: fail("unexpected token '" + t->lexeme + "'");
    }
  }

  FormulaAst call() {
    const FormulaToken& name = toks_[pos_++];
    const FormulaToken* open = peek();
    if (!open || open->kind != TokenKind::LParen) fail("expected '(' after function name");
    ++pos_;
    FormulaAst n = FormulaAst::func(name.lexeme, {});
    const FormulaToken* t = peek();
    if (t && t->kind == TokenKind::RParen) {
      n.span = {name.span.begin, t->span.end};
      ++pos_;
      return n;
    }
    for (;;) {
      n.children.push_back(comparison());
      t = peek();
      if (t && t->kind == TokenKind::Comma) {
        ++pos_;
        continue;
      }
      if (t && t->kind == TokenKind::RParen) {
        n.span = {name.span.begin, t->span.end};
        ++pos_;
        return n;
      }
      fail("expected ',' or ')' in argument list");
    }
  }

  std::string_view text_;
  std::vector<FormulaToken> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

FormulaAst parse(std::string_view normalized) { return Parser(normalized, lex(normalized)).parse_formula(); }

// ---------------------------------------------------------------------------
// Normalization

namespace {

// Scans outside string literals and error literals for reference shapes the
// single-table setting cannot handle.
std::optional<FilterVerdict> screen_references(std::string_view s) {
  bool has_bang = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') {
      ++i;
      while (i < s.size()) {
        if (s[i] == '"' && !(i + 1 < s.size() && s[i + 1] == '"')) break;
        i += s[i] == '"' ? 2 : 1;
      }
      continue;
    }
    if (c == '#') {
      if (auto lit = match_error_literal(s.substr(i))) i += lit->size() - 1;
      continue;
    }
    if (c == '{' || c == '}') return FilterVerdict{false, FilterReason::ArrayFormula, "array constant"};
    if (c == '[') return FilterVerdict{false, FilterReason::CrossFile, "external workbook reference"};
    if (c == '!') has_bang = true;
  }
  if (has_bang) return FilterVerdict{false, FilterReason::CrossSheet, "sheet-qualified reference"};
  return std::nullopt;
}

std::string strip_absolute_and_upcase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '"') {
      if (in_string && i + 1 < s.size() && s[i + 1] == '"') {
        out += "\"\"";
        ++i;
        continue;
      }
      in_string = !in_string;
      out.push_back(c);
      continue;
    }
    if (in_string) {
      out.push_back(c);
    } else if (c != '$') {
      out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

}  // namespace

NormalizedFormula normalize(std::string_view raw) {
  std::size_t b = 0;
  while (b < raw.size() && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
  std::string_view body = raw.substr(b);
  if (body.starts_with("{=") || body.starts_with("{")) {
    return {std::string(body), {false, FilterReason::ArrayFormula, "array-entered formula"}};
  }
  if (body.starts_with("=")) body.remove_prefix(1);

  if (auto rejected = screen_references(body)) return {std::string(body), *rejected};

  std::string text = strip_absolute_and_upcase(body);
  try {
    auto tokens = lex(text);
    for (const auto& t : tokens) {
      if (t.kind == TokenKind::Func && !is_builtin_function(t.lexeme)) {
        return {text, {false, FilterReason::UserDefinedFunction, "unknown function " + t.lexeme}};
      }
    }
    Parser(text, std::move(tokens)).parse_formula();
  } catch (const ParseError& e) {
    return {text, {false, FilterReason::ParseError, e.what()}};
  }
  return {text, {true, FilterReason::Ok, {}}};
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

enum Level : int { kCmp = 0, kConcat, kAdd, kMul, kUnary, kPow, kPostfix, kPrimary };

int binary_level(std::string_view sym) {
  if (sym == "^") return kPow;
  if (sym == "*" || sym == "/") return kMul;
  if (sym == "+" || sym == "-") return kAdd;
  if (sym == "&") return kConcat;
  return kCmp;
}

int level_of(const FormulaAst& n) {
  if (n.kind != NodeKind::Op) return kPrimary;
  if (n.is_unary()) return n.text == "%" ? kPostfix : kUnary;
  return binary_level(n.text);
}

void render(const FormulaAst& n, int min_level, std::string& out);

void render_power_operand(const FormulaAst& n, std::string& out) {
  if (n.is_unary() && n.text == "-") {
    out.push_back('-');
    render_power_operand(n.children[0], out);
    return;
  }
  render(n, kPostfix, out);
}

void render_raw(const FormulaAst& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Const:
    case NodeKind::CellRef:
    case NodeKind::RangeRef:
      out += n.text;
      return;
    case NodeKind::Func:
      out += n.text;
      out.push_back('(');
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i) out.push_back(',');
        render(n.children[i], kCmp, out);
      }
      out.push_back(')');
      return;
    case NodeKind::Op:
      break;
  }
  if (n.is_unary()) {
    if (n.text == "%") {
      render(n.children[0], kPostfix, out);
      out.push_back('%');
    } else {
      out.push_back('-');
      render(n.children[0], kUnary, out);
    }
    return;
  }
  const int level = binary_level(n.text);
  if (n.text == "^") {
    render(n.children[0], kPostfix, out);
    out.push_back('^');
    render_power_operand(n.children[1], out);
    return;
  }
  render(n.children[0], level, out);
  out += n.text;
  render(n.children[1], level + 1, out);
}

void render(const FormulaAst& n, int min_level, std::string& out) {
  if (level_of(n) < min_level) {
    out.push_back('(');
    render_raw(n, out);
    out.push_back(')');
  } else {
    render_raw(n, out);
  }
}

}  // namespace

std::string render_infix(const FormulaAst& ast) {
  std::string out;
  render(ast, kCmp, out);
  return out;
}

// ---------------------------------------------------------------------------
// Linearization

PrefixSequence to_prefix(const FormulaAst& ast) {
  PrefixSequence seq;
  seq.tokens.push_back({std::string(kStartToken), FormulaKind::Special});
  std::vector<const FormulaAst*> stack{&ast};
  while (!stack.empty()) {
    const FormulaAst* n = stack.back();
    stack.pop_back();
    switch (n->kind) {
      case NodeKind::Op:
      case NodeKind::Func:
        seq.tokens.push_back({n->text, n->kind == NodeKind::Op ? FormulaKind::Op : FormulaKind::Func,
                              static_cast<int>(n->children.size())});
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
        break;
      case NodeKind::CellRef:
        seq.tokens.push_back({format_address(n->start), FormulaKind::Cell});
        break;
      case NodeKind::RangeRef:
        seq.tokens.push_back({std::string(kRangeSep), FormulaKind::Special});
        seq.tokens.push_back({format_address(n->start), FormulaKind::Cell});
        seq.tokens.push_back({format_address(n->end), FormulaKind::Cell});
        break;
      case NodeKind::Const: {
        PrefixToken t{n->text, FormulaKind::Const};
        t.const_kind = n->const_kind;
        seq.tokens.push_back(std::move(t));
        break;
      }
    }
  }
  seq.tokens.push_back({std::string(kEndToken), FormulaKind::Special});
  return seq;
}

PrefixSequence sketch(const PrefixSequence& prefix) {
  PrefixSequence out;
  const auto& t = prefix.tokens;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i].kind == FormulaKind::Special && t[i].text == kRangeSep && i + 2 < t.size() &&
        t[i + 1].kind == FormulaKind::Cell && t[i + 2].kind == FormulaKind::Cell) {
      PrefixToken r{std::string(kRangeToken), FormulaKind::Cell};
      r.from_range = true;
      out.tokens.push_back(std::move(r));
      i += 2;
    } else if (t[i].kind == FormulaKind::Cell) {
      PrefixToken r{std::string(kRangeToken), FormulaKind::Cell};
      r.from_range = t[i].from_range;
      out.tokens.push_back(std::move(r));
    } else {
      out.tokens.push_back(t[i]);
    }
  }
  return out;
}

std::size_t sketch_length(const PrefixSequence& prefix, RangeCounting counting) {
  std::size_t n = 0;
  for (const auto& t : sketch(prefix).tokens) {
    if (t.kind == FormulaKind::Special && (t.text == kStartToken || t.text == kEndToken)) continue;
    n += (counting == RangeCounting::Cell3 && t.from_range) ? 3 : 1;
  }
  return n;
}

namespace {

template <typename Visit>
void leaves_in_order(const FormulaAst& ast, Visit&& visit) {
  std::vector<const FormulaAst*> stack{&ast};
  while (!stack.empty()) {
    const FormulaAst* n = stack.back();
    stack.pop_back();
    if (n->is_leaf()) {
      visit(*n);
      continue;
    }
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
  }
}

}  // namespace

std::vector<CellAddress> referenced_cells(const FormulaAst& ast) {
  std::vector<CellAddress> out;
  leaves_in_order(ast, [&](const FormulaAst& n) {
    if (n.kind == NodeKind::CellRef) {
      out.push_back(n.start);
    } else if (n.kind == NodeKind::RangeRef) {
      for (int r = n.start.row; r <= n.end.row; ++r) {
        for (int c = n.start.col; c <= n.end.col; ++c) out.push_back({c, r});
      }
    }
  });
  return out;
}

std::vector<Reference> references(const FormulaAst& ast) {
  std::vector<Reference> out;
  leaves_in_order(ast, [&](const FormulaAst& n) {
    if (n.kind == NodeKind::CellRef) out.push_back({n.start, n.start, false});
    if (n.kind == NodeKind::RangeRef) out.push_back({n.start, n.end, true});
  });
  return out;
}

std::size_t node_count(const FormulaAst& ast) {
  std::size_t n = 1;
  for (const auto& c : ast.children) n += node_count(c);
  return n;
}

std::size_t op_count(const FormulaAst& ast) {
  std::size_t n = ast.is_leaf() ? 0 : 1;
  for (const auto& c : ast.children) n += op_count(c);
  return n;
}

std::string prefix_text(const PrefixSequence& seq) {
  std::string out;
  for (const auto& t : seq.tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t.text;
  }
  return out;
}

}  // namespace tabformula
