#include "tabformula/table.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <functional>
#include <stdexcept>

#include "tabformula/errors.hpp"

namespace tabformula {

CellAddress parse_address(std::string_view text) {
  auto fail = [&] { return AddressParseError("malformed cell address '" + std::string(text) + "'"); };
  std::size_t i = 0;
  if (i < text.size() && text[i] == '$') ++i;
  const std::size_t letters_begin = i;
  long col = 0;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
    col = col * 26 + (std::toupper(static_cast<unsigned char>(text[i])) - 'A' + 1);
    ++i;
    if (i - letters_begin > 3) throw fail();
  }
  if (i == letters_begin) throw fail();
  if (i < text.size() && text[i] == '$') ++i;
  const std::size_t digits_begin = i;
  if (digits_begin >= text.size() || text[digits_begin] == '0') throw fail();
  long row = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    row = row * 10 + (text[i] - '0');
    ++i;
    if (row > kMaxRows) throw fail();
  }
  if (i != text.size() || i == digits_begin) throw fail();
  if (col > kMaxColumns) throw fail();
  return {static_cast<int>(col - 1), static_cast<int>(row - 1)};
}

std::string column_letters(int col) {
  std::string out;
  for (int n = col + 1; n > 0; n = (n - 1) / 26) {
    out.push_back(static_cast<char>('A' + (n - 1) % 26));
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string format_address(const CellAddress& addr) {
  return column_letters(addr.col) + std::to_string(addr.row + 1);
}

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::Empty: return "empty";
    case ValueKind::Text: return "text";
    case ValueKind::Number: return "number";
    case ValueKind::Bool: return "bool";
  }
  return "empty";
}

std::string_view to_string(Direction d) { return d == Direction::Top ? "top" : "left"; }

namespace {

struct DecimalParts {
  std::string_view integer;
  std::string_view fraction;
};

std::optional<DecimalParts> split_decimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  const std::size_t int_begin = i;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  DecimalParts parts{s.substr(int_begin, i - int_begin), {}};
  if (i < s.size() && s[i] == '.') {
    ++i;
    const std::size_t frac_begin = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    parts.fraction = s.substr(frac_begin, i - frac_begin);
  }
  if (i != s.size() || (parts.integer.empty() && parts.fraction.empty())) return std::nullopt;
  return parts;
}

}  // namespace

bool is_decimal_text(std::string_view text) { return split_decimal(text).has_value(); }

NumericFeatures numeric_features(std::string_view text) {
  auto parts = split_decimal(text);
  if (!parts) throw NotANumber("not a decimal number: '" + std::string(text) + "'");
  std::string_view integer = parts->integer;
  while (integer.size() > 1 && integer.front() == '0') integer.remove_prefix(1);
  if (integer.empty()) integer = "0";

  NumericFeatures f;
  f.magnitude = static_cast<int>(integer.size());
  f.precision = static_cast<int>(parts->fraction.size());
  f.first_digit = integer.front() - '0';
  f.last_digit = parts->fraction.empty() ? integer.back() - '0' : parts->fraction.back() - '0';
  return f;
}

CellValue CellValue::of_number(std::string t) {
  if (!is_decimal_text(t)) throw NotANumber("not a decimal number: '" + t + "'");
  double v = 0;
  const char* begin = t.data() + (t.starts_with('+') ? 1 : 0);
  std::from_chars(begin, t.data() + t.size(), v);
  return {ValueKind::Number, std::move(t), v};
}

namespace {

void check_partition(const std::vector<HeaderNode>& nodes, int begin, int end, const std::string& where) {
  int cursor = begin;
  for (const auto& n : nodes) {
    if (n.begin != cursor || n.end <= n.begin) {
      throw std::invalid_argument(where + ": header spans do not partition [" + std::to_string(begin) +
                                  ", " + std::to_string(end) + ") at '" + n.text + "'");
    }
    if (!n.children.empty()) check_partition(n.children, n.begin, n.end, where);
    cursor = n.end;
  }
  if (cursor != end) {
    throw std::invalid_argument(where + ": header spans do not cover [" + std::to_string(begin) + ", " +
                                std::to_string(end) + ")");
  }
}

HeaderTree flat_tree(Direction d, const std::vector<Cell>& cells, int n_cols, int header_line, int begin,
                     int end) {
  HeaderTree t{d, {}};
  for (int i = begin; i < end; ++i) {
    CellAddress a = d == Direction::Top ? CellAddress{i, header_line} : CellAddress{header_line, i};
    const auto& cell = cells[static_cast<std::size_t>(a.row) * static_cast<std::size_t>(n_cols) +
                             static_cast<std::size_t>(a.col)];
    t.roots.push_back(HeaderNode{cell.value.text, a, i, i + 1, {}});
  }
  return t;
}

void collect_anchored(const std::vector<HeaderNode>& nodes, Direction d, std::vector<int>& path,
                      std::vector<HeaderRef>& out) {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    path.push_back(static_cast<int>(i));
    if (nodes[i].anchor) out.push_back(HeaderRef{*nodes[i].anchor, nodes[i].text, d, path});
    collect_anchored(nodes[i].children, d, path, out);
    path.pop_back();
  }
}

}  // namespace

Table::Table(std::string id, int n_rows, int n_cols, int top_header_rows, int left_header_cols,
             std::vector<Cell> cells, std::optional<HeaderTree> top_tree, std::optional<HeaderTree> left_tree)
    : id_(std::move(id)),
      n_rows_(n_rows),
      n_cols_(n_cols),
      top_header_rows_(top_header_rows),
      left_header_cols_(left_header_cols) {
  if (n_rows <= 0 || n_cols <= 0) throw std::invalid_argument("table must have at least one row and column");
  if (top_header_rows < 0 || top_header_rows >= n_rows) {
    throw std::invalid_argument("top_header_rows must be in [0, n_rows)");
  }
  if (left_header_cols < 0 || left_header_cols >= n_cols) {
    throw std::invalid_argument("left_header_cols must be in [0, n_cols)");
  }
  cells_.resize(static_cast<std::size_t>(n_rows) * static_cast<std::size_t>(n_cols));
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c < n_cols; ++c) cells_[index({c, r})].address = {c, r};
  }
  for (auto& cell : cells) {
    if (!in_bounds(cell.address)) {
      throw std::invalid_argument("cell " + format_address(cell.address) + " out of bounds");
    }
    if (cell.formula && cell.formula->empty()) {
      throw std::invalid_argument("cell " + format_address(cell.address) + " has an empty formula");
    }
    auto& slot = cells_[index(cell.address)];
    slot = std::move(cell);
  }

  if (top_tree) {
    top_tree_ = std::move(*top_tree);
  } else if (top_header_rows_ > 0) {
    top_tree_ = flat_tree(Direction::Top, cells_, n_cols_, top_header_rows_ - 1, left_header_cols_, n_cols_);
  }
  top_tree_.direction = Direction::Top;
  if (left_tree) {
    left_tree_ = std::move(*left_tree);
  } else if (left_header_cols_ > 0) {
    left_tree_ = flat_tree(Direction::Left, cells_, n_cols_, left_header_cols_ - 1, top_header_rows_, n_rows_);
  }
  left_tree_.direction = Direction::Left;

  if (!top_tree_.empty()) check_partition(top_tree_.roots, left_header_cols_, n_cols_, "top_tree");
  if (!left_tree_.empty()) check_partition(left_tree_.roots, top_header_rows_, n_rows_, "left_tree");

  for (const auto* tree : {&top_tree_, &left_tree_}) {
    for (const auto& h : header_cells(tree->direction)) {
      if (!in_bounds(h.address) || !is_header(h.address)) {
        throw std::invalid_argument("header '" + h.text + "' anchored outside the header region at " +
                                    format_address(h.address));
      }
    }
  }
}

std::vector<HeaderRef> Table::header_cells(Direction d) const {
  const HeaderTree& t = d == Direction::Top ? top_tree_ : left_tree_;
  std::vector<HeaderRef> out;
  std::vector<int> path;
  collect_anchored(t.roots, d, path, out);
  return out;
}

std::vector<int> Table::tree_path(Direction d, int index) const {
  const HeaderTree& t = d == Direction::Top ? top_tree_ : left_tree_;
  std::vector<int> path;
  const std::vector<HeaderNode>* level = &t.roots;
  while (!level->empty()) {
    auto it = std::find_if(level->begin(), level->end(),
                           [&](const HeaderNode& n) { return n.begin <= index && index < n.end; });
    if (it == level->end()) break;
    path.push_back(static_cast<int>(it - level->begin()));
    level = &it->children;
  }
  return path;
}

std::optional<std::vector<int>> Table::anchor_path(Direction d, const CellAddress& a) const {
  for (auto& h : header_cells(d)) {
    if (h.address == a) return std::move(h.path);
  }
  return std::nullopt;
}

namespace {

std::vector<HeaderRef> chain(const Table& table, Direction d, int index) {
  const HeaderTree& t = d == Direction::Top ? table.top_tree() : table.left_tree();
  std::vector<HeaderRef> out;
  std::vector<int> path;
  const std::vector<HeaderNode>* level = &t.roots;
  while (!level->empty()) {
    auto it = std::find_if(level->begin(), level->end(),
                           [&](const HeaderNode& n) { return n.begin <= index && index < n.end; });
    if (it == level->end()) break;
    path.push_back(static_cast<int>(it - level->begin()));
    if (it->anchor) out.push_back(HeaderRef{*it->anchor, it->text, d, path});
    level = &it->children;
  }
  return out;
}

}  // namespace

HeaderChains headers_of(const Table& table, const CellAddress& addr) {
  if (!table.is_data_cell(addr)) {
    throw NotADataCell(format_address(addr) + " is not a data cell of table '" + table.id() + "'");
  }
  return {chain(table, Direction::Top, addr.col), chain(table, Direction::Left, addr.row)};
}

NonSharedHeaders non_shared_headers(const Table& table, const CellAddress& a, const CellAddress& b) {
  auto flatten = [](HeaderChains c) {
    std::vector<HeaderRef> all = std::move(c.top);
    all.insert(all.end(), std::make_move_iterator(c.left.begin()), std::make_move_iterator(c.left.end()));
    return all;
  };
  const auto chain_a = flatten(headers_of(table, a));
  const auto chain_b = flatten(headers_of(table, b));
  auto minus = [](const std::vector<HeaderRef>& x, const std::vector<HeaderRef>& y) {
    std::vector<HeaderRef> out;
    for (const auto& h : x) {
      if (std::find(y.begin(), y.end(), h) == y.end()) out.push_back(h);
    }
    return out;
  };
  return {minus(chain_a, chain_b), minus(chain_b, chain_a)};
}

}  // namespace tabformula
