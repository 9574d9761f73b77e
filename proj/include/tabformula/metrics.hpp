#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabformula/formula.hpp"
#include "tabformula/table.hpp"

namespace tabformula {

enum class ErrorClass { SketchFailure, ReferenceUnreachable, ReferenceFailure };

std::string_view to_string(ErrorClass e);

struct EvalVerdict {
  bool formula_correct = false;
  bool sketch_correct = false;
  bool range_correct = false;
  std::optional<ErrorClass> error_class;
};

/// Comparison key: normalize, parse, then the prefix text. Throws ParseError
/// when the formula is rejected or does not parse.
std::string canonicalize(std::string_view formula);

enum class RangeComparison { Ordered, Set };

struct EvalOptions {
  RangeComparison range = RangeComparison::Ordered;
};

/// Throws GoldParseError when `gold` cannot be canonicalized. An unparseable
/// prediction is wrong everywhere and classed as a sketch failure.
EvalVerdict eval_prediction(std::string_view pred, std::string_view gold, std::span<const CellAddress> input_cells,
                            const EvalOptions& options = {});

/// eval_prediction without reachability information: every reference counts as
/// reachable.
EvalVerdict eval_prediction(std::string_view pred, std::string_view gold, const EvalOptions& options = {});

struct EvalSummary {
  std::size_t count = 0;
  double formula_acc = 0;
  double sketch_acc = 0;
  double range_acc = 0;
  std::map<ErrorClass, std::size_t> error_histogram;
};

/// Throws EmptyEvalSet.
EvalSummary aggregate(std::span<const EvalVerdict> verdicts);

}  // namespace tabformula
