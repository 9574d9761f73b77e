#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tabformula/formula.hpp"
#include "tabformula/rng.hpp"
#include "tabformula/table.hpp"
#include "tabformula/vocab.hpp"

namespace tabformula {

/// Header bookkeeping shared by the reference objectives.
struct ReferenceHeaders {
  HeaderChains formula_chain;
  std::vector<CellAddress> referenced;           // distinct, first-occurrence order
  std::vector<HeaderRef> shared;                 // on the formula chain and on some referenced chain
  std::vector<HeaderRef> formula_non_shared;     // formula chain minus shared (top then left)
  std::vector<HeaderRef> reference_non_shared;   // referenced chains minus the formula chain, distinct
  std::vector<HeaderRef> referenced_all;         // every header on any referenced chain, distinct
};

/// Throws DanglingReference for references outside the grid and NotADataCell
/// when the formula cell or a referenced cell lies in a header region.
ReferenceHeaders reference_headers(const Table& table, const CellAddress& formula_cell, const FormulaAst& ast);

enum class PairLabel { Positive, Negative };

struct NrpPairSample {
  HeaderRef formula_header;
  HeaderRef candidate_header;
  PairLabel label = PairLabel::Positive;
  Direction direction = Direction::Top;
};

inline constexpr std::size_t kNegativesPerPositive = 3;

/// Positive pairs join each non-shared formula header with the non-shared
/// headers of the referenced cells in the same direction. Negatives are drawn
/// without replacement from headers of that direction referenced by neither
/// side, at most three per positive. Formula headers without positives emit
/// nothing.
std::vector<NrpPairSample> nrp_pairs(const Table& table, const CellAddress& formula_cell, const FormulaAst& ast,
                                     Rng& rng);

enum class CellClass { FormulaHeader, FormulaCell, ReferenceHeader, Other };

std::string_view to_string(CellClass c);

struct CellLabel {
  CellAddress cell;
  CellClass label = CellClass::Other;
};

struct NrpPromptSample {
  std::vector<std::string> prompt_tokens;
  std::size_t row_header_position = 0;
  std::size_t column_header_position = 0;
  std::vector<CellLabel> cell_labels;  // every grid cell, reading order
};

struct PromptOptions {
  int min_noise = 1;
  int max_noise = 10;
  bool noise_from_full_vocab = false;
};

/// Throws MissingHeader when the formula cell lacks a top or left leaf header.
NrpPromptSample nrp_prompt(const Table& table, const CellAddress& formula_cell, const FormulaAst& ast,
                           const Vocab& vocab, Rng& rng, const PromptOptions& options = {});

/// + - * / ^ % & = <> > < >= <= SUM AVERAGE MAX MIN
bool is_ncp_operator(std::string_view symbol);

struct NcpSample {
  std::string op;
  std::vector<CellAddress> operand_cells;

  bool operator==(const NcpSample&) const = default;
};

/// One sample per Op/Func node whose children are all cell or range references
/// to numeric data cells, in pre-order. Ranges contribute their cells row-major.
/// Unary minus is never a target.
std::vector<NcpSample> ncp_samples(const FormulaAst& ast, const Table& table);

enum class MaskMode { MaskOps, MaskCells };

std::string_view to_string(MaskMode m);

inline constexpr std::string_view kMaskToken = "[MASK]";

struct FmlmLabel {
  std::size_t position = 0;
  std::string target;     // original token text
  TokenId target_id = -1; // vocabulary id of the operator token (ops mode)
  int cell_index = -1;    // index into input cells (cells mode)
};

/// How a masked cell token is featurized: number features defaulted, position
/// and format copied from the formula cell.
struct MaskedCellFeatureRule {
  bool number_default = true;
  CellAddress position_from;
  CellAddress format_from;
};

struct FmlmSample {
  PrefixSequence tokens;  // masked positions carry text [MASK] and keep their kind
  MaskMode mode = MaskMode::MaskOps;
  std::vector<FmlmLabel> labels;
  MaskedCellFeatureRule feature_rule;
};

/// Masks every Op/Func token (MaskOps) or every cell token (MaskCells).
/// Throws UnreachableReference in cells mode when a cell is not in `input_cells`.
FmlmSample fmlm_mask(const PrefixSequence& prefix, MaskMode mode, const CellAddress& formula_cell,
                     std::span<const CellAddress> input_cells, const Vocab& vocab);

/// Writes the label targets back into the masked positions.
PrefixSequence apply_labels(const FmlmSample& sample, std::span<const CellAddress> input_cells);

}  // namespace tabformula
