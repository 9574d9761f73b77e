#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "tabformula/table.hpp"

namespace tabformula {

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class TokenKind { Op, Func, Cell, Const, LParen, RParen, Comma, RangeSep };
enum class ConstKind { Str, Num, Bool };

std::string_view to_string(TokenKind k);
std::string_view to_string(ConstKind k);

struct FormulaToken {
  TokenKind kind = TokenKind::Op;
  std::string lexeme;  // functions, cells and booleans uppercased, '$' dropped
  Span span;
  ConstKind const_kind = ConstKind::Num;
};

/// Tokenizes a formula body (no leading '='). Throws ParseError.
std::vector<FormulaToken> lex(std::string_view text);

enum class NodeKind { Op, Func, CellRef, RangeRef, Const };

/// Expression tree. Op nodes hold the symbol in `text` and have one child
/// (unary '-', postfix '%') or two. RangeRef keeps start <= end per component.
struct FormulaAst {
  NodeKind kind = NodeKind::Const;
  std::string text;
  ConstKind const_kind = ConstKind::Num;
  CellAddress start;
  CellAddress end;
  Span span;
  std::vector<FormulaAst> children;

  static FormulaAst op(std::string symbol, std::vector<FormulaAst> children);
  static FormulaAst func(std::string name, std::vector<FormulaAst> args);
  static FormulaAst cell(CellAddress a);
  static FormulaAst range(CellAddress a, CellAddress b);
  static FormulaAst constant(ConstKind kind, std::string text);

  bool is_leaf() const { return kind == NodeKind::CellRef || kind == NodeKind::RangeRef || kind == NodeKind::Const; }
  bool is_unary() const { return kind == NodeKind::Op && children.size() == 1; }

  /// Structural equality; spans are ignored.
  friend bool operator==(const FormulaAst& a, const FormulaAst& b);
};

enum class FilterReason { Ok, CrossSheet, CrossFile, ArrayFormula, UserDefinedFunction, ParseError };

std::string_view to_string(FilterReason r);

struct FilterVerdict {
  bool accepted = true;
  FilterReason reason = FilterReason::Ok;
  std::string detail;
};

struct NormalizedFormula {
  std::string text;
  FilterVerdict verdict;
};

/// Strips '=', drops '$' and uppercases names outside string literals, then
/// screens out cross-sheet/cross-file references, array formulas, user-defined
/// functions and unparseable input. Rejection is reported in the verdict.
NormalizedFormula normalize(std::string_view raw);

/// Throws ParseError with a byte span into `normalized`.
FormulaAst parse(std::string_view normalized);

/// Infix text with the minimal parentheses needed to reparse to the same tree.
std::string render_infix(const FormulaAst& ast);

bool is_builtin_function(std::string_view upper_name);

enum class FormulaKind { Op, Func, Cell, Const, Special };

std::string_view to_string(FormulaKind k);

struct PrefixToken {
  std::string text;
  FormulaKind kind = FormulaKind::Special;
  int arity = 0;                        // Op/Func child count
  ConstKind const_kind = ConstKind::Num;
  bool from_range = false;              // sketch [RANGE] that replaced a ':' triple

  /// Text, kind and arity; `from_range` is bookkeeping only.
  bool operator==(const PrefixToken& o) const {
    return text == o.text && kind == o.kind && arity == o.arity;
  }
};

struct PrefixSequence {
  std::vector<PrefixToken> tokens;

  bool operator==(const PrefixSequence&) const = default;
  std::size_t size() const { return tokens.size(); }
};

inline constexpr std::string_view kStartToken = "[START]";
inline constexpr std::string_view kEndToken = "[END]";
inline constexpr std::string_view kRangeToken = "[RANGE]";
inline constexpr std::string_view kRangeSep = ":";

/// Pre-order linearization wrapped in [START]/[END]; a range emits ':' start end.
PrefixSequence to_prefix(const FormulaAst& ast);

/// Replaces each cell token and each ':' start end triple with one [RANGE].
PrefixSequence sketch(const PrefixSequence& prefix);

enum class RangeCounting { Cell1, Cell3 };

std::string_view to_string(RangeCounting c);

/// Sketch token count without [START]/[END]. Under Cell3 a range counts as
/// three tokens (':' plus both endpoints).
std::size_t sketch_length(const PrefixSequence& prefix, RangeCounting counting = RangeCounting::Cell1);

/// Leaf order; ranges expand row-major; duplicates preserved.
std::vector<CellAddress> referenced_cells(const FormulaAst& ast);

/// A reference leaf as written: a single cell (start == end, !is_range) or a range.
struct Reference {
  CellAddress start;
  CellAddress end;
  bool is_range = false;

  bool operator==(const Reference&) const = default;
};

std::vector<Reference> references(const FormulaAst& ast);

std::size_t node_count(const FormulaAst& ast);

/// Number of Op and Func nodes.
std::size_t op_count(const FormulaAst& ast);

/// Space-joined token texts, e.g. "[START] / - C4 B4 B4 [END]".
std::string prefix_text(const PrefixSequence& seq);

}  // namespace tabformula
