#include "tabformula/metrics.hpp"

#include <algorithm>
#include <tuple>

#include "tabformula/errors.hpp"

namespace tabformula {

std::string_view to_string(ErrorClass e) {
  switch (e) {
    case ErrorClass::SketchFailure: return "SketchFailure";
    case ErrorClass::ReferenceUnreachable: return "ReferenceUnreachable";
    case ErrorClass::ReferenceFailure: return "ReferenceFailure";
  }
  return "SketchFailure";
}

namespace {

FormulaAst canonical_ast(std::string_view formula) {
  const NormalizedFormula n = normalize(formula);
  if (!n.verdict.accepted) {
    throw ParseError("formula rejected (" + std::string(to_string(n.verdict.reason)) + "): " + n.verdict.detail, 0,
                     n.text.size());
  }
  return parse(n.text);
}

bool same_references(std::vector<Reference> a, std::vector<Reference> b, RangeComparison mode) {
  if (mode == RangeComparison::Set) {
    auto key = [](const Reference& r) { return std::tuple(r.start, r.end, r.is_range); };
    auto less = [&](const Reference& x, const Reference& y) { return key(x) < key(y); };
    std::sort(a.begin(), a.end(), less);
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end(), less);
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  return a == b;
}

EvalVerdict evaluate(std::string_view pred, std::string_view gold, const std::span<const CellAddress>* input_cells,
                     const EvalOptions& options) {
  FormulaAst gold_ast;
  try {
    gold_ast = canonical_ast(gold);
  } catch (const ParseError& e) {
    throw GoldParseError(std::string("gold formula does not parse: ") + e.what());
  }
  EvalVerdict v;
  FormulaAst pred_ast;
  try {
    pred_ast = canonical_ast(pred);
  } catch (const ParseError&) {
    v.error_class = ErrorClass::SketchFailure;
    return v;
  }
  const PrefixSequence gold_prefix = to_prefix(gold_ast);
  const PrefixSequence pred_prefix = to_prefix(pred_ast);
  const auto gold_refs = references(gold_ast);
  v.formula_correct = gold_prefix == pred_prefix;
  v.sketch_correct = sketch(gold_prefix) == sketch(pred_prefix);
  v.range_correct = same_references(references(pred_ast), gold_refs, options.range);
  if (v.formula_correct) return v;

  if (!v.sketch_correct) {
    v.error_class = ErrorClass::SketchFailure;
    return v;
  }
  bool reachable = true;
  if (input_cells) {
    auto present = [&](const CellAddress& a) {
      return std::find((*input_cells).begin(), (*input_cells).end(), a) != (*input_cells).end();
    };
    for (const auto& r : gold_refs) {
      reachable = reachable && present(r.start) && present(r.end);
    }
  }
  v.error_class = reachable ? ErrorClass::ReferenceFailure : ErrorClass::ReferenceUnreachable;
  return v;
}

}  // namespace

std::string canonicalize(std::string_view formula) { return prefix_text(to_prefix(canonical_ast(formula))); }

EvalVerdict eval_prediction(std::string_view pred, std::string_view gold, std::span<const CellAddress> input_cells,
                            const EvalOptions& options) {
  return evaluate(pred, gold, &input_cells, options);
}

EvalVerdict eval_prediction(std::string_view pred, std::string_view gold, const EvalOptions& options) {
  return evaluate(pred, gold, nullptr, options);
}

EvalSummary aggregate(std::span<const EvalVerdict> verdicts) {
  if (verdicts.empty()) throw EmptyEvalSet("no verdicts to aggregate");
  EvalSummary s;
  s.count = verdicts.size();
  std::size_t f = 0, sk = 0, r = 0;
  for (const auto& v : verdicts) {
    f += v.formula_correct;
    sk += v.sketch_correct;
    r += v.range_correct;
    if (v.error_class) ++s.error_histogram[*v.error_class];
  }
  const double n = static_cast<double>(verdicts.size());
  s.formula_acc = static_cast<double>(f) / n;
  s.sketch_acc = static_cast<double>(sk) / n;
  s.range_acc = static_cast<double>(r) / n;
  return s;
}

}  // namespace tabformula
