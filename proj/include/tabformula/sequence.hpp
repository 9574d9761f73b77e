#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabformula/formula.hpp"
#include "tabformula/rng.hpp"
#include "tabformula/samples.hpp"
#include "tabformula/table.hpp"
#include "tabformula/vocab.hpp"

namespace tabformula {

enum class InputMode { FormulaTokens, FormulaTag, Literal };

std::string_view to_string(InputMode m);

/// 0.40 / 0.30 / 0.30.
InputMode choose_input_mode(Rng& rng);

enum class Segment { Text, Table };

inline constexpr int kCoordDepth = 4;
inline constexpr int kCoordPad = -1;
using TreeCoord = std::array<int, kCoordDepth>;

inline constexpr TreeCoord kDefaultCoord = {kCoordPad, kCoordPad, kCoordPad, kCoordPad};

struct TokenRecord {
  TokenId token = 0;
  std::optional<FormulaKind> formula_kind;
  std::optional<NumericFeatures> number;  // nullopt = default embedding
  TreeCoord top_coord = kDefaultCoord;
  TreeCoord left_coord = kDefaultCoord;
  int format = 0;
  Segment segment = Segment::Table;
  std::optional<CellAddress> source_cell;

  bool operator==(const TokenRecord&) const = default;
};

struct PackedSequence {
  std::vector<TokenRecord> records;
  int max_len = 512;
  bool truncated = false;
  InputMode mode = InputMode::Literal;
  std::vector<CellAddress> cells;  // cells present, in sequence order

  bool operator==(const PackedSequence&) const = default;
};

/// Header cells plus data cells sharing the target's row or column, in reading
/// order. Throws NotADataCell.
std::vector<CellAddress> select_cells(const Table& table, const CellAddress& target);

/// Pads or truncates a tree path to kCoordDepth.
TreeCoord to_coord(const std::vector<int>& path);

struct CellCoords {
  TreeCoord top = kDefaultCoord;
  TreeCoord left = kDefaultCoord;
};

CellCoords cell_coords(const Table& table, const CellAddress& a);

/// What the target cell renders as. `formula` is required in FormulaTokens mode
/// (pass an FMLM-masked sequence to mask it).
struct TargetRendering {
  InputMode mode = InputMode::Literal;
  const PrefixSequence* formula = nullptr;
};

/// [CLS] text [SEP] then each selected cell followed by [SEP]. Overflow drops
/// whole trailing cells; a dropped target replaces the last surviving cells.
/// Throws TextTooLong, NotADataCell, std::invalid_argument (bad max_len or
/// missing formula).
PackedSequence build_sequence(const Table& table, std::span<const std::string> text_tokens,
                              const CellAddress& target, const TargetRendering& rendering, int max_len,
                              const Vocab& vocab);

}  // namespace tabformula
