#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tabformula/formula.hpp"
#include "tabformula/table.hpp"

namespace tabformula {

struct LocatedFormula {
  CellAddress cell;
  FormulaAst ast;
};

enum class Axis { Row, Column };

/// Formulas filled along a row or column share a key: cell tokens are rewritten
/// as offsets from the formula cell (R[dr]C[dc]).
struct DedupKey {
  Axis axis = Axis::Row;
  int axis_index = 0;
  std::string relative_sketch;

  auto operator<=>(const DedupKey&) const = default;
};

std::string relative_sketch(const FormulaAst& ast, const CellAddress& formula_cell);

inline constexpr std::size_t kMaxDraggedCopies = 5;

/// Keeps at most `max_copies` formulas per DedupKey, in reading order. A formula
/// is kept only if kept under both its row key and its column key. Output is in
/// reading order.
std::vector<LocatedFormula> dedup_dragged(std::vector<LocatedFormula> formulas,
                                          std::size_t max_copies = kMaxDraggedCopies);

struct SizeLimits {
  int min_rows = 2;
  int max_rows = 512;
  int min_cols = 2;
  int max_cols = 128;
};

bool size_filter(const Table& table, const SizeLimits& limits = {});

/// Mergeable corpus aggregates. Sums are kept so that partial results from
/// different shards combine exactly.
struct CorpusStats {
  std::size_t formula_count = 0;
  std::size_t table_count = 0;
  std::size_t op_func_total = 0;
  std::size_t sketch_length_total_cell1 = 0;
  std::size_t sketch_length_total_cell3 = 0;
  std::size_t covered_formulas = 0;
  std::map<std::size_t, std::size_t> sketch_histogram_cell1;
  std::map<std::size_t, std::size_t> sketch_histogram_cell3;
  std::map<std::string, std::size_t> op_frequency;
  std::map<std::string, std::size_t> rejected;  // filter reason -> count

  void add_formula(const FormulaAst& ast);
  void add_rejection(FilterReason reason);
  void merge(const CorpusStats& other);

  bool empty() const { return formula_count == 0; }
  double avg_sketch_length(RangeCounting counting) const;
  double avg_ops_per_formula() const;
  double coverage_ratio() const;
  const std::map<std::size_t, std::size_t>& sketch_histogram(RangeCounting counting) const {
    return counting == RangeCounting::Cell1 ? sketch_histogram_cell1 : sketch_histogram_cell3;
  }

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(std::span<const FormulaAst> formulas);

}  // namespace tabformula
