#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tabformula {

/// Zero-based (col, row) grid position. A1 text "B4" is {1, 3}.
struct CellAddress {
  int col = 0;
  int row = 0;

  auto operator<=>(const CellAddress&) const = default;
};

/// Reading order: top to bottom, then left to right.
inline bool reading_order_less(const CellAddress& a, const CellAddress& b) {
  return a.row != b.row ? a.row < b.row : a.col < b.col;
}

inline constexpr int kMaxColumns = 18278;   // "ZZZ" + 1
inline constexpr int kMaxRows = 1 << 20;

/// Parses "B4", "$B$4", "b4". Absolute markers are accepted and discarded.
/// Throws AddressParseError.
CellAddress parse_address(std::string_view a1_text);

/// Column letters for a zero-based column index (0 -> "A", 26 -> "AA").
std::string column_letters(int col);

std::string format_address(const CellAddress& addr);

enum class ValueKind { Empty, Text, Number, Bool };

std::string_view to_string(ValueKind kind);

struct CellValue {
  ValueKind kind = ValueKind::Empty;
  std::string text;
  std::optional<double> number;  // present iff kind == Number

  static CellValue empty() { return {}; }
  static CellValue of_text(std::string t) { return {ValueKind::Text, std::move(t), std::nullopt}; }
  /// Throws NotANumber when `t` is not a decimal string.
  static CellValue of_number(std::string t);
  static CellValue of_bool(bool b) { return {ValueKind::Bool, b ? "TRUE" : "FALSE", std::nullopt}; }
};

struct Cell {
  CellAddress address;
  CellValue value;
  std::optional<std::string> formula;
  int format = 0;
};

struct NumericFeatures {
  int magnitude = 1;   // integer-part digit count, at least 1
  int precision = 0;   // fractional digit count
  int first_digit = 0;
  int last_digit = 0;

  bool operator==(const NumericFeatures&) const = default;
};

/// Total on decimal strings: optional sign, digits, optional '.' and digits.
/// Leading zeros of the integer part are ignored ("007" behaves like "7").
/// Throws NotANumber otherwise.
NumericFeatures numeric_features(std::string_view number_text);

bool is_decimal_text(std::string_view text);

enum class Direction { Top, Left };

std::string_view to_string(Direction d);

/// One header node. Spans are half-open absolute grid indices: columns for the
/// top tree, rows for the left tree. A node without an anchor is a virtual
/// grouping node and does not correspond to a header cell.
struct HeaderNode {
  std::string text;
  std::optional<CellAddress> anchor;
  int begin = 0;
  int end = 0;
  std::vector<HeaderNode> children;
};

struct HeaderTree {
  Direction direction = Direction::Top;
  std::vector<HeaderNode> roots;

  bool empty() const { return roots.empty(); }
};

/// A header cell resolved from a tree. Identity is the anchor address.
struct HeaderRef {
  CellAddress address;
  std::string text;
  Direction direction = Direction::Top;
  std::vector<int> path;  // child indices from the roots

  bool operator==(const HeaderRef& o) const { return address == o.address && direction == o.direction; }
};

struct HeaderChains {
  std::vector<HeaderRef> top;
  std::vector<HeaderRef> left;
};

struct NonSharedHeaders {
  std::vector<HeaderRef> only_a;
  std::vector<HeaderRef> only_b;
};

class Table {
 public:
  Table() = default;

  /// Validates grid shape, header counts and tree partitions. Missing trees
  /// are synthesized as flat trees over the last header row / column.
  /// Throws std::invalid_argument on violation.
  Table(std::string id, int n_rows, int n_cols, int top_header_rows, int left_header_cols,
        std::vector<Cell> cells, std::optional<HeaderTree> top_tree = std::nullopt,
        std::optional<HeaderTree> left_tree = std::nullopt);

  const std::string& id() const { return id_; }
  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  int top_header_rows() const { return top_header_rows_; }
  int left_header_cols() const { return left_header_cols_; }
  const HeaderTree& top_tree() const { return top_tree_; }
  const HeaderTree& left_tree() const { return left_tree_; }

  bool in_bounds(const CellAddress& a) const {
    return a.col >= 0 && a.row >= 0 && a.col < n_cols_ && a.row < n_rows_;
  }
  bool is_header(const CellAddress& a) const {
    return a.row < top_header_rows_ || a.col < left_header_cols_;
  }
  bool is_data_cell(const CellAddress& a) const { return in_bounds(a) && !is_header(a); }

  /// Row-major. Precondition: in_bounds(a).
  const Cell& at(const CellAddress& a) const { return cells_[index(a)]; }
  const std::vector<Cell>& cells() const { return cells_; }

  /// Every anchored node of the tree for `d`, pre-order.
  std::vector<HeaderRef> header_cells(Direction d) const;

  /// Root-to-leaf path of the tree node owning `index`, skipping nothing.
  /// Empty when the tree has no node containing `index`.
  std::vector<int> tree_path(Direction d, int index) const;

  /// Tree path of the header node anchored at `a`, if any.
  std::optional<std::vector<int>> anchor_path(Direction d, const CellAddress& a) const;

 private:
  std::size_t index(const CellAddress& a) const {
    return static_cast<std::size_t>(a.row) * static_cast<std::size_t>(n_cols_) +
           static_cast<std::size_t>(a.col);
  }

  std::string id_;
  int n_rows_ = 0;
  int n_cols_ = 0;
  int top_header_rows_ = 0;
  int left_header_cols_ = 0;
  std::vector<Cell> cells_;
  HeaderTree top_tree_;
  HeaderTree left_tree_;
};

/// Root-to-leaf header chains of a data cell; virtual nodes are skipped.
/// Throws NotADataCell.
HeaderChains headers_of(const Table& table, const CellAddress& addr);

/// Set difference of the two cells' combined chains (top then left), by address.
NonSharedHeaders non_shared_headers(const Table& table, const CellAddress& a, const CellAddress& b);

}  // namespace tabformula
