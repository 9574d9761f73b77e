#include "tabformula/samples.hpp"

#include <algorithm>
#include <array>

#include "tabformula/errors.hpp"

namespace tabformula {

namespace {

bool contains(const std::vector<HeaderRef>& v, const HeaderRef& h) { return std::find(v.begin(), v.end(), h) != v.end(); }

void push_unique(std::vector<HeaderRef>& v, const HeaderRef& h) {
  if (!contains(v, h)) v.push_back(h);
}

std::vector<HeaderRef> flatten(const HeaderChains& c) {
  std::vector<HeaderRef> all = c.top;
  all.insert(all.end(), c.left.begin(), c.left.end());
  return all;
}

}  // namespace

std::string_view to_string(CellClass c) {
  switch (c) {
    case CellClass::FormulaHeader: return "FormulaHeader";
    case CellClass::FormulaCell: return "FormulaCell";
    case CellClass::ReferenceHeader: return "ReferenceHeader";
    case CellClass::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(MaskMode m) { return m == MaskMode::MaskOps ? "ops" : "cells"; }

ReferenceHeaders reference_headers(const Table& table, const CellAddress& formula_cell, const FormulaAst& ast) {
  ReferenceHeaders out;
  for (const auto& a : referenced_cells(ast)) {
    if (!table.in_bounds(a)) {
      throw DanglingReference(format_address(formula_cell) + " references " + format_address(a) +
                              " outside table '" + table.id() + "'");
    }
    if (std::find(out.referenced.begin(), out.referenced.end(), a) == out.referenced.end()) {
      out.referenced.push_back(a);
    }
  }
  out.formula_chain = headers_of(table, formula_cell);
  const auto formula_all = flatten(out.formula_chain);
  for (const auto& a : out.referenced) {
    for (const auto& h : flatten(headers_of(table, a))) {
      push_unique(out.referenced_all, h);
      if (contains(formula_all, h)) {
        push_unique(out.shared, h);
      } else {
        push_unique(out.reference_non_shared, h);
      }
    }
  }
  for (const auto& h : formula_all) {
    if (!contains(out.shared, h)) out.formula_non_shared.push_back(h);
  }
  return out;
}

std::vector<NrpPairSample> nrp_pairs(const Table& table, const CellAddress& formula_cell, const FormulaAst& ast,
                                     Rng& rng) {
  const ReferenceHeaders rh = reference_headers(table, formula_cell, ast);
  const auto formula_all = flatten(rh.formula_chain);
  std::vector<NrpPairSample> out;
  for (const auto& hf : rh.formula_non_shared) {
    std::vector<HeaderRef> positives;
    for (const auto& h : rh.reference_non_shared) {
      if (h.direction == hf.direction) positives.push_back(h);
    }
    if (positives.empty()) continue;
    for (const auto& h : positives) out.push_back({hf, h, PairLabel::Positive, hf.direction});

    std::vector<HeaderRef> candidates;
    for (const auto& h : table.header_cells(hf.direction)) {
      if (!contains(formula_all, h) && !contains(rh.referenced_all, h)) candidates.push_back(h);
    }
    const std::size_t budget = std::min(candidates.size(), kNegativesPerPositive * positives.size());
    auto picked = rng.sample_without_replacement(candidates.size(), budget);
    std::sort(picked.begin(), picked.end());
    for (auto i : picked) out.push_back({hf, candidates[i], PairLabel::Negative, hf.direction});
  }
  return out;
}

NrpPromptSample nrp_prompt(const Table& table, const CellAddress& formula_cell, const FormulaAst& ast,
                           const Vocab& vocab, Rng& rng, const PromptOptions& options) {
  const ReferenceHeaders rh = reference_headers(table, formula_cell, ast);
  const auto& chain = rh.formula_chain;
  if (chain.top.empty() || chain.left.empty()) {
    throw MissingHeader(format_address(formula_cell) + " in table '" + table.id() +
                        "' lacks a top or left header");
  }
  const HeaderRef& column_header = chain.top.back();
  const HeaderRef& row_header = chain.left.back();

  const std::vector<TokenId> pool = options.noise_from_full_vocab ? vocab.base_token_ids() : vocab.text_token_ids();
  if (pool.empty()) throw VocabError("no tokens available for prompt noise");

  NrpPromptSample s;
  const int k = rng.between(options.min_noise, options.max_noise);
  const std::size_t len = static_cast<std::size_t>(k) + 2;
  s.row_header_position = static_cast<std::size_t>(rng.below(len));
  s.column_header_position = static_cast<std::size_t>(rng.below(len - 1));
  if (s.column_header_position >= s.row_header_position) ++s.column_header_position;
  s.prompt_tokens.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    if (i == s.row_header_position) {
      s.prompt_tokens[i] = row_header.text;
    } else if (i == s.column_header_position) {
      s.prompt_tokens[i] = column_header.text;
    } else {
      s.prompt_tokens[i] = vocab.token(pool[static_cast<std::size_t>(rng.below(pool.size()))]);
    }
  }

  s.cell_labels.reserve(static_cast<std::size_t>(table.rows()) * static_cast<std::size_t>(table.cols()));
  for (int r = 0; r < table.rows(); ++r) {
    for (int c = 0; c < table.cols(); ++c) {
      const CellAddress a{c, r};
      CellClass cls = CellClass::Other;
      if (a == formula_cell) {
        cls = CellClass::FormulaCell;
      } else if (a == column_header.address || a == row_header.address) {
        cls = CellClass::FormulaHeader;
      } else if (std::any_of(rh.reference_non_shared.begin(), rh.reference_non_shared.end(),
                             [&](const HeaderRef& h) { return h.address == a; })) {
        cls = CellClass::ReferenceHeader;
      }
      s.cell_labels.push_back({a, cls});
    }
  }
  return s;
}

bool is_ncp_operator(std::string_view s) {
  static constexpr std::array<std::string_view, 17> ops = {
      "+", "-", "*", "/", "^", "%", "&", "=", "<>", ">", "<", ">=", "<=", "SUM", "AVERAGE", "MAX", "MIN",
  };
  return std::find(ops.begin(), ops.end(), s) != ops.end();
}

std::vector<NcpSample> ncp_samples(const FormulaAst& ast, const Table& table) {
  std::vector<NcpSample> out;
  std::vector<const FormulaAst*> stack{&ast};
  while (!stack.empty()) {
    const FormulaAst* n = stack.back();
    stack.pop_back();
    for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(&*it);
    if (n->is_leaf() || n->children.empty() || !is_ncp_operator(n->text)) continue;
    if (n->kind == NodeKind::Op && n->is_unary() && n->text == "-") continue;

    NcpSample sample{n->text, {}};
    bool qualifies = true;
    for (const auto& child : n->children) {
      if (child.kind != NodeKind::CellRef && child.kind != NodeKind::RangeRef) {
        qualifies = false;
        break;
      }
      for (const auto& a : referenced_cells(child)) {
        if (!table.is_data_cell(a) || table.at(a).value.kind != ValueKind::Number) {
          qualifies = false;
          break;
        }
        sample.operand_cells.push_back(a);
      }
      if (!qualifies) break;
    }
    if (qualifies) out.push_back(std::move(sample));
  }
  return out;
}

FmlmSample fmlm_mask(const PrefixSequence& prefix, MaskMode mode, const CellAddress& formula_cell,
                     std::span<const CellAddress> input_cells, const Vocab& vocab) {
  FmlmSample s;
  s.mode = mode;
  s.tokens = prefix;
  s.feature_rule = {true, formula_cell, formula_cell};
  for (std::size_t i = 0; i < s.tokens.tokens.size(); ++i) {
    PrefixToken& t = s.tokens.tokens[i];
    const bool is_op = t.kind == FormulaKind::Op || t.kind == FormulaKind::Func;
    const bool is_cell = t.kind == FormulaKind::Cell;
    if (mode == MaskMode::MaskOps && is_op) {
      s.labels.push_back({i, t.text, encode_prefix_token(vocab, t), -1});
    } else if (mode == MaskMode::MaskCells && is_cell) {
      const CellAddress a = parse_address(t.text);
      auto it = std::find(input_cells.begin(), input_cells.end(), a);
      if (it == input_cells.end()) {
        throw UnreachableReference("referenced cell " + t.text + " is not among the input cells");
      }
      s.labels.push_back({i, t.text, -1, static_cast<int>(it - input_cells.begin())});
    } else {
      continue;
    }
    t.text = std::string(kMaskToken);
  }
  return s;
}

PrefixSequence apply_labels(const FmlmSample& sample, std::span<const CellAddress> input_cells) {
  PrefixSequence out = sample.tokens;
  for (const auto& l : sample.labels) {
    if (sample.mode == MaskMode::MaskCells) {
      out.tokens.at(l.position).text = format_address(input_cells[static_cast<std::size_t>(l.cell_index)]);
    } else {
      out.tokens.at(l.position).text = l.target;
    }
  }
  return out;
}

}  // namespace tabformula
