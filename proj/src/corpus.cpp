#include "tabformula/corpus.hpp"

#include <algorithm>

#include "tabformula/vocab.hpp"

namespace tabformula {

std::string relative_sketch(const FormulaAst& ast, const CellAddress& origin) {
  auto rel = [&](const CellAddress& a) {
    return "R[" + std::to_string(a.row - origin.row) + "]C[" + std::to_string(a.col - origin.col) + "]";
  };
  std::string out;
  for (const auto& t : to_prefix(ast).tokens) {
    if (!out.empty()) out.push_back(' ');
    if (t.kind == FormulaKind::Cell) {
      out += rel(parse_address(t.text));
    } else {
      out += t.text;
      if (t.kind == FormulaKind::Op && t.arity == 1) out += "/1";
    }
  }
  return out;
}

std::vector<LocatedFormula> dedup_dragged(std::vector<LocatedFormula> formulas, std::size_t max_copies) {
  std::stable_sort(formulas.begin(), formulas.end(), [](const LocatedFormula& a, const LocatedFormula& b) {
    return reading_order_less(a.cell, b.cell);
  });
  std::map<DedupKey, std::size_t> seen;
  std::vector<char> keep(formulas.size(), 1);
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    const std::string sketch_key = relative_sketch(formulas[i].ast, formulas[i].cell);
    const DedupKey row_key{Axis::Row, formulas[i].cell.row, sketch_key};
    const DedupKey col_key{Axis::Column, formulas[i].cell.col, sketch_key};
    const std::size_t row_rank = seen[row_key]++;
    const std::size_t col_rank = seen[col_key]++;
    if (row_rank >= max_copies || col_rank >= max_copies) keep[i] = 0;
  }
  std::vector<LocatedFormula> out;
  out.reserve(formulas.size());
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    if (keep[i]) out.push_back(std::move(formulas[i]));
  }
  return out;
}

bool size_filter(const Table& table, const SizeLimits& limits) {
  return table.rows() >= limits.min_rows && table.rows() <= limits.max_rows && table.cols() >= limits.min_cols &&
         table.cols() <= limits.max_cols;
}

void CorpusStats::add_formula(const FormulaAst& ast) {
  const PrefixSequence prefix = to_prefix(ast);
  const std::size_t len1 = sketch_length(prefix, RangeCounting::Cell1);
  const std::size_t len3 = sketch_length(prefix, RangeCounting::Cell3);
  ++formula_count;
  sketch_length_total_cell1 += len1;
  sketch_length_total_cell3 += len3;
  ++sketch_histogram_cell1[len1];
  ++sketch_histogram_cell3[len3];
  for (const auto& t : prefix.tokens) {
    if (t.kind == FormulaKind::Op || t.kind == FormulaKind::Func) {
      ++op_func_total;
      ++op_frequency[t.text];
    }
  }
  if (is_covered(ast)) ++covered_formulas;
}

void CorpusStats::add_rejection(FilterReason reason) { ++rejected[std::string(to_string(reason))]; }

void CorpusStats::merge(const CorpusStats& o) {
  formula_count += o.formula_count;
  table_count += o.table_count;
  op_func_total += o.op_func_total;
  sketch_length_total_cell1 += o.sketch_length_total_cell1;
  sketch_length_total_cell3 += o.sketch_length_total_cell3;
  covered_formulas += o.covered_formulas;
  for (const auto& [k, v] : o.sketch_histogram_cell1) sketch_histogram_cell1[k] += v;
  for (const auto& [k, v] : o.sketch_histogram_cell3) sketch_histogram_cell3[k] += v;
  for (const auto& [k, v] : o.op_frequency) op_frequency[k] += v;
  for (const auto& [k, v] : o.rejected) rejected[k] += v;
}

double CorpusStats::avg_sketch_length(RangeCounting counting) const {
  if (formula_count == 0) return 0.0;
  const auto total = counting == RangeCounting::Cell1 ? sketch_length_total_cell1 : sketch_length_total_cell3;
  return static_cast<double>(total) / static_cast<double>(formula_count);
}

double CorpusStats::avg_ops_per_formula() const {
  return formula_count == 0 ? 0.0 : static_cast<double>(op_func_total) / static_cast<double>(formula_count);
}

double CorpusStats::coverage_ratio() const {
  return formula_count == 0 ? 0.0 : static_cast<double>(covered_formulas) / static_cast<double>(formula_count);
}

CorpusStats corpus_stats(std::span<const FormulaAst> formulas) {
  CorpusStats s;
  for (const auto& f : formulas) s.add_formula(f);
  return s;
}

}  // namespace tabformula
