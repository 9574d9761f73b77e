#include "tabformula/sequence.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "tabformula/errors.hpp"

namespace tabformula {

std::string_view to_string(InputMode m) {
  switch (m) {
    case InputMode::FormulaTokens: return "formula_tokens";
    case InputMode::FormulaTag: return "formula_tag";
    case InputMode::Literal: return "literal";
  }
  return "literal";
}

InputMode choose_input_mode(Rng& rng) {
  const auto draw = rng.below(10);
  if (draw < 4) return InputMode::FormulaTokens;
  if (draw < 7) return InputMode::FormulaTag;
  return InputMode::Literal;
}

std::vector<CellAddress> select_cells(const Table& table, const CellAddress& target) {
  if (!table.is_data_cell(target)) {
    throw NotADataCell(format_address(target) + " is not a data cell of table '" + table.id() + "'");
  }
  std::vector<CellAddress> out;
  for (int r = 0; r < table.rows(); ++r) {
    for (int c = 0; c < table.cols(); ++c) {
      const CellAddress a{c, r};
      if (table.is_header(a) || r == target.row || c == target.col) out.push_back(a);
    }
  }
  return out;
}

TreeCoord to_coord(const std::vector<int>& path) {
  TreeCoord out = kDefaultCoord;
  for (std::size_t i = 0; i < path.size() && i < out.size(); ++i) out[i] = path[i];
  return out;
}

CellCoords cell_coords(const Table& table, const CellAddress& a) {
  CellCoords out;
  if (!table.in_bounds(a)) return out;
  if (table.is_data_cell(a)) {
    out.top = to_coord(table.tree_path(Direction::Top, a.col));
    out.left = to_coord(table.tree_path(Direction::Left, a.row));
    return out;
  }
  if (a.row < table.top_header_rows()) {
    if (auto p = table.anchor_path(Direction::Top, a)) out.top = to_coord(*p);
  }
  if (a.col < table.left_header_cols()) {
    if (auto p = table.anchor_path(Direction::Left, a)) out.left = to_coord(*p);
  }
  return out;
}

namespace {

std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.push_back(s.substr(b, i - b));
  }
  return out;
}

TokenRecord table_record(TokenId id, const CellAddress& a, const CellCoords& coords, int format) {
  TokenRecord r;
  r.token = id;
  r.top_coord = coords.top;
  r.left_coord = coords.left;
  r.format = format;
  r.segment = Segment::Table;
  r.source_cell = a;
  return r;
}

void render_value(const Cell& cell, const CellCoords& coords, const Vocab& vocab,
                  std::vector<TokenRecord>& out) {
  std::optional<NumericFeatures> number;
  if (cell.value.kind == ValueKind::Number) number = numeric_features(cell.value.text);
  for (auto word : split_words(cell.value.text)) {
    TokenRecord r = table_record(vocab.lookup_text(word), cell.address, coords, cell.format);
    r.number = number;
    out.push_back(r);
  }
}

void render_formula(const Table& table, const Cell& target, const CellCoords& coords,
                    const PrefixSequence& formula, const Vocab& vocab, std::vector<TokenRecord>& out) {
  for (const auto& t : formula.tokens) {
    const bool masked = t.text == kMaskToken;
    TokenRecord r = table_record(masked ? vocab.mask() : encode_prefix_token(vocab, t), target.address, coords,
                                 target.format);
    if (t.kind != FormulaKind::Special) r.formula_kind = t.kind;
    if (t.kind == FormulaKind::Cell && !masked) {
      // Unmasked references borrow the referenced cell's embeddings.
      const CellAddress ref = parse_address(t.text);
      const CellCoords rc = cell_coords(table, ref);
      r.top_coord = rc.top;
      r.left_coord = rc.left;
      r.source_cell = ref;
      if (table.in_bounds(ref)) {
        const Cell& rcell = table.at(ref);
        r.format = rcell.format;
        if (rcell.value.kind == ValueKind::Number) r.number = numeric_features(rcell.value.text);
      } else {
        r.format = 0;
      }
    }
    out.push_back(r);
  }
}

}  // namespace

PackedSequence build_sequence(const Table& table, std::span<const std::string> text_tokens,
                              const CellAddress& target, const TargetRendering& rendering, int max_len,
                              const Vocab& vocab) {
  if (max_len != 256 && max_len != 512) throw std::invalid_argument("max_len must be 256 or 512");
  if (rendering.mode == InputMode::FormulaTokens && rendering.formula == nullptr) {
    throw std::invalid_argument("formula token rendering requires a formula");
  }
  const auto selected = select_cells(table, target);

  PackedSequence seq;
  seq.max_len = max_len;
  seq.mode = rendering.mode;

  TokenRecord cls;
  cls.token = vocab.cls();
  cls.segment = Segment::Text;
  seq.records.push_back(cls);
  for (const auto& chunk : text_tokens) {
    for (auto word : split_words(chunk)) {
      TokenRecord r;
      r.token = vocab.lookup_text(word);
      r.segment = Segment::Text;
      seq.records.push_back(r);
    }
  }
  TokenRecord text_sep = cls;
  text_sep.token = vocab.sep();
  seq.records.push_back(text_sep);
  if (seq.records.size() > static_cast<std::size_t>(max_len)) {
    throw TextTooLong("text segment needs " + std::to_string(seq.records.size()) + " tokens, max_len is " +
                      std::to_string(max_len));
  }

  auto render_cell = [&](const CellAddress& a) {
    std::vector<TokenRecord> recs;
    const Cell& cell = table.at(a);
    const CellCoords coords = cell_coords(table, a);
    if (a == target && rendering.mode == InputMode::FormulaTokens) {
      render_formula(table, cell, coords, *rendering.formula, vocab, recs);
    } else if (a == target && rendering.mode == InputMode::FormulaTag) {
      recs.push_back(table_record(vocab.formula_tag(), a, coords, cell.format));
    } else {
      render_value(cell, coords, vocab, recs);
    }
    recs.push_back(table_record(vocab.sep(), a, coords, cell.format));
    return recs;
  };

  std::vector<std::vector<TokenRecord>> kept;
  std::vector<CellAddress> kept_cells;
  std::size_t used = seq.records.size();
  bool target_kept = false;
  for (const auto& a : selected) {
    auto recs = render_cell(a);
    if (used + recs.size() > static_cast<std::size_t>(max_len)) {
      seq.truncated = true;
      break;
    }
    used += recs.size();
    target_kept = target_kept || a == target;
    kept.push_back(std::move(recs));
    kept_cells.push_back(a);
  }
  if (!target_kept) {
    auto target_recs = render_cell(target);
    while (!kept.empty() && used + target_recs.size() > static_cast<std::size_t>(max_len)) {
      used -= kept.back().size();
      kept.pop_back();
      kept_cells.pop_back();
    }
    if (used + target_recs.size() <= static_cast<std::size_t>(max_len)) {
      used += target_recs.size();
      kept.push_back(std::move(target_recs));
      kept_cells.push_back(target);
    }
  }
  seq.records.reserve(used);
  for (auto& recs : kept) seq.records.insert(seq.records.end(), recs.begin(), recs.end());
  seq.cells = std::move(kept_cells);
  return seq;
}

}  // namespace tabformula
