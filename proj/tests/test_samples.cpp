#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "tabformula/errors.hpp"
#include "tabformula/samples.hpp"
#include "tabformula/sequence.hpp"

namespace tabformula {
namespace {

using testing::vegetables_table;

CellAddress A(const char* a1) { return parse_address(a1); }

std::set<std::pair<std::string, std::string>> positives(const std::vector<NrpPairSample>& pairs) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : pairs) {
    if (p.label == PairLabel::Positive) out.emplace(p.formula_header.text, p.candidate_header.text);
  }
  return out;
}

// One header row of 12 flat column headers and one row header per data row.
Table wide_table() {
  std::vector<Cell> cells;
  for (int c = 1; c <= 12; ++c) cells.push_back(Cell{{c, 0}, CellValue::of_text("h" + std::to_string(c)), {}, 0});
  for (int r = 1; r <= 3; ++r) {
    cells.push_back(Cell{{0, r}, CellValue::of_text("row" + std::to_string(r)), {}, 0});
    for (int c = 1; c <= 12; ++c) cells.push_back(Cell{{c, r}, CellValue::of_number(std::to_string(r * c)), {}, 0});
  }
  return Table("wide", 4, 13, 1, 1, std::move(cells));
}

TEST(NrpPairs, HierarchicalExample) {
  const Table t = vegetables_table();
  Rng rng(1);
  const auto pairs = nrp_pairs(t, A("E3"), parse("(D3-C3)/C3"), rng);
  EXPECT_EQ(positives(pairs), (std::set<std::pair<std::string, std::string>>{{"%Increase", "2016"}, {"%Increase", "2021"}}));
  for (const auto& p : pairs) {
    EXPECT_NE(p.formula_header.text, "Onion");
    EXPECT_NE(p.candidate_header.text, "Onion");
    EXPECT_NE(p.candidate_header.text, "Vegetables");
    EXPECT_EQ(p.direction, p.formula_header.direction);
    EXPECT_EQ(p.direction, p.candidate_header.direction);
  }
  EXPECT_EQ(pairs.size(), 2u);  // every other top header is referenced
}

TEST(NrpPairs, NegativeCapBinds) {
  const Table t = wide_table();
  Rng rng(99);
  const auto pairs = nrp_pairs(t, A("M2"), parse("B2"), rng);
  std::size_t pos = 0, neg = 0;
  for (const auto& p : pairs) {
    (p.label == PairLabel::Positive ? pos : neg)++;
    EXPECT_EQ(p.formula_header.text, "h12");
    if (p.label == PairLabel::Negative) {
      EXPECT_NE(p.candidate_header.text, "h1");
      EXPECT_NE(p.candidate_header.text, "h12");
    }
  }
  EXPECT_EQ(pos, 1u);
  EXPECT_EQ(neg, 3u);
}

TEST(NrpPairs, DeterministicUnderSeed) {
  const Table t = wide_table();
  Rng a(5), b(5);
  const auto x = nrp_pairs(t, A("M2"), parse("B2+C3"), a);
  const auto y = nrp_pairs(t, A("M2"), parse("B2+C3"), b);
  ASSERT_EQ(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i].candidate_header, y[i].candidate_header);
}

TEST(NrpPairs, Errors) {
  const Table t = vegetables_table();
  Rng rng(1);
  EXPECT_THROW(nrp_pairs(t, A("E3"), parse("Z99+1"), rng), DanglingReference);
  EXPECT_THROW(nrp_pairs(t, A("E3"), parse("B3+1"), rng), NotADataCell);
  EXPECT_THROW(nrp_pairs(t, A("A1"), parse("C3"), rng), NotADataCell);
  EXPECT_TRUE(nrp_pairs(t, A("E3"), parse("1+2"), rng).empty());
}

TEST(NrpPairs, InvariantsOnRandomTables) {
  testing::Gen g(123);
  std::size_t checked = 0;
  for (int i = 0; i < 150; ++i) {
    const Table t = testing::random_table(g, "r" + std::to_string(i));
    for (const auto& cell : t.cells()) {
      if (!cell.formula) continue;
      const FormulaAst ast = parse(normalize(*cell.formula).text);
      Rng rng(stream_seed(unit_seed(7, t.id(), cell.address), "nrp"));
      const auto pairs = nrp_pairs(t, cell.address, ast, rng);
      const auto fchain = testing::oracle_headers(t, cell.address).all();
      std::vector<CellAddress> ref_headers;
      for (const auto& a : testing::oracle_cells(ast)) {
        for (const auto& h : testing::oracle_headers(t, a).all()) ref_headers.push_back(h);
      }
      std::map<CellAddress, std::pair<int, int>> per_hf;
      for (const auto& p : pairs) {
        ++checked;
        ASSERT_EQ(p.formula_header.direction, p.direction);
        ASSERT_EQ(p.candidate_header.direction, p.direction);
        ASSERT_TRUE(testing::contains(fchain, p.formula_header.address));
        ASSERT_FALSE(testing::contains(ref_headers, p.formula_header.address));  // not shared
        ASSERT_FALSE(testing::contains(fchain, p.candidate_header.address));
        if (p.label == PairLabel::Positive) {
          ASSERT_TRUE(testing::contains(ref_headers, p.candidate_header.address));
          ++per_hf[p.formula_header.address].first;
        } else {
          ASSERT_FALSE(testing::contains(ref_headers, p.candidate_header.address));
          ++per_hf[p.formula_header.address].second;
        }
      }
      for (const auto& [hf, counts] : per_hf) {
        ASSERT_GE(counts.first, 1);
        ASSERT_LE(counts.second, 3 * counts.first);
      }
    }
  }
  EXPECT_GT(checked, 100u);
}

TEST(NrpPrompt, HierarchicalLabels) {
  const Table t = vegetables_table();
  Rng rng(3);
  const auto s = nrp_prompt(t, A("E3"), parse("(D3-C3)/C3"), Vocab::builtin(), rng);
  std::map<std::string, CellClass> by_cell;
  for (const auto& l : s.cell_labels) by_cell[format_address(l.cell)] = l.label;
  EXPECT_EQ(by_cell.size(), 30u);
  EXPECT_EQ(by_cell["E1"], CellClass::FormulaHeader);
  EXPECT_EQ(by_cell["B3"], CellClass::FormulaHeader);
  EXPECT_EQ(by_cell["E3"], CellClass::FormulaCell);
  EXPECT_EQ(by_cell["C1"], CellClass::ReferenceHeader);
  EXPECT_EQ(by_cell["D1"], CellClass::ReferenceHeader);
  int formula_cells = 0;
  for (const auto& [cell, cls] : by_cell) {
    if (cls == CellClass::FormulaCell) ++formula_cells;
    if (cell != "E1" && cell != "B3" && cell != "E3" && cell != "C1" && cell != "D1") {
      EXPECT_EQ(cls, CellClass::Other) << cell;
    }
  }
  EXPECT_EQ(formula_cells, 1);
  EXPECT_EQ(s.prompt_tokens[s.row_header_position], "Onion");
  EXPECT_EQ(s.prompt_tokens[s.column_header_position], "%Increase");
  EXPECT_NE(s.row_header_position, s.column_header_position);
  EXPECT_GE(s.prompt_tokens.size(), 3u);
  EXPECT_LE(s.prompt_tokens.size(), 12u);
}

TEST(NrpPrompt, DeterministicAndNoiseFromTextRegion) {
  const Table t = vegetables_table();
  const Vocab v = Vocab::builtin();
  Rng a(42), b(42);
  const auto x = nrp_prompt(t, A("E3"), parse("(D3-C3)/C3"), v, a);
  const auto y = nrp_prompt(t, A("E3"), parse("(D3-C3)/C3"), v, b);
  EXPECT_EQ(x.prompt_tokens, y.prompt_tokens);
  for (std::size_t i = 0; i < x.prompt_tokens.size(); ++i) {
    if (i == x.row_header_position || i == x.column_header_position) continue;
    const TokenId id = v.find(x.prompt_tokens[i]);
    ASSERT_GE(id, 0);
    EXPECT_FALSE(v.is_formula_token(id));
    EXPECT_NE(x.prompt_tokens[i].front(), '[');
  }
}

TEST(NrpPrompt, NoiseLengthIsUniform) {
  const Table t = vegetables_table();
  const Vocab v = Vocab::builtin();
  const FormulaAst ast = parse("(D3-C3)/C3");
  double sum = 0;
  std::map<std::size_t, int> hist;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Rng rng(seed);
    const std::size_t k = nrp_prompt(t, A("E3"), ast, v, rng).prompt_tokens.size() - 2;
    sum += static_cast<double>(k);
    ++hist[k];
  }
  const double mean = sum / 10000.0;
  EXPECT_GE(mean, 5.2);
  EXPECT_LE(mean, 5.8);
  EXPECT_EQ(hist.begin()->first, 1u);
  EXPECT_EQ(hist.rbegin()->first, 10u);
}

TEST(NrpPrompt, MissingHeader) {
  std::vector<Cell> cells = {Cell{{0, 0}, CellValue::of_number("1"), {}, 0}, Cell{{1, 0}, CellValue::of_number("2"), {}, 0},
                             Cell{{1, 1}, CellValue::of_number("3"), std::string("=A1+B1"), 0}};
  const Table t("noheaders", 2, 2, 0, 0, std::move(cells));
  Rng rng(1);
  EXPECT_THROW(nrp_prompt(t, A("B2"), parse("A1+B1"), Vocab::builtin(), rng), MissingHeader);
}

TEST(Ncp, Examples) {
  const Table t = vegetables_table();
  const auto a = ncp_samples(parse("(D3-C3)/C3"), t);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (NcpSample{"-", {A("D3"), A("C3")}}));

  const auto b = ncp_samples(parse("SUM(C2:D3)"), t);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0], (NcpSample{"SUM", {A("C2"), A("D2"), A("C3"), A("D3")}}));

  EXPECT_TRUE(ncp_samples(parse("C2+\"x\"&D2"), t).empty());
}

TEST(Ncp, Qualification) {
  const Table t = vegetables_table();
  EXPECT_TRUE(ncp_samples(parse("-C2"), t).empty());                 // unary minus
  EXPECT_EQ(ncp_samples(parse("C2%"), t).size(), 1u);                // postfix percent
  EXPECT_TRUE(ncp_samples(parse("C2+B2"), t).empty());               // header operand
  EXPECT_TRUE(ncp_samples(parse("C2+Z99"), t).empty());              // outside the grid
  EXPECT_TRUE(ncp_samples(parse("ROUND(C2,D2)"), t).empty());        // not a target function
  EXPECT_EQ(ncp_samples(parse("MAX(C2,D2:D3)"), t)[0].operand_cells.size(), 3u);
  EXPECT_EQ(ncp_samples(parse("(C2+D2)*(C3-D3)"), t).size(), 2u);
}

TEST(Ncp, MatchesNodeScanOracle) {
  testing::Gen g(77);
  const Table t = vegetables_table();
  testing::FormulaGenOptions o;
  o.max_row = 6;
  o.max_col = 5;
  for (int i = 0; i < 3000; ++i) {
    const FormulaAst ast = testing::random_ast(g, o);
    std::vector<std::pair<std::string, std::vector<CellAddress>>> expected;
    testing::oracle_ncp(ast, t, expected);
    const auto got = ncp_samples(ast, t);
    ASSERT_EQ(got.size(), expected.size()) << render_infix(ast);
    for (std::size_t k = 0; k < got.size(); ++k) {
      ASSERT_EQ(got[k].op, expected[k].first);
      ASSERT_EQ(got[k].operand_cells, expected[k].second);
    }
  }
}

TEST(Fmlm, Examples) {
  const Vocab v = Vocab::builtin();
  const PrefixSequence p = to_prefix(parse("(C4-B4)/B4"));
  const std::vector<CellAddress> inputs = {A("A1"), A("B4"), A("C4"), A("D4")};

  const auto ops = fmlm_mask(p, MaskMode::MaskOps, A("D4"), inputs, v);
  ASSERT_EQ(ops.labels.size(), 2u);
  EXPECT_EQ(ops.labels[0].position, 1u);
  EXPECT_EQ(ops.labels[0].target, "/");
  EXPECT_EQ(ops.labels[0].target_id, v.id("[/]"));
  EXPECT_EQ(ops.labels[1].position, 2u);
  EXPECT_EQ(ops.labels[1].target, "-");
  EXPECT_EQ(prefix_text(ops.tokens), "[START] [MASK] [MASK] C4 B4 B4 [END]");

  const auto cells = fmlm_mask(p, MaskMode::MaskCells, A("D4"), inputs, v);
  ASSERT_EQ(cells.labels.size(), 3u);
  EXPECT_EQ(cells.labels[0].cell_index, 2);
  EXPECT_EQ(cells.labels[1].cell_index, 1);
  EXPECT_EQ(cells.labels[2].cell_index, 1);
  EXPECT_EQ(prefix_text(cells.tokens), "[START] / - [MASK] [MASK] [MASK] [END]");
  EXPECT_TRUE(cells.feature_rule.number_default);
  EXPECT_EQ(cells.feature_rule.position_from, A("D4"));
  EXPECT_EQ(cells.feature_rule.format_from, A("D4"));

  const auto none = fmlm_mask(to_prefix(parse("42")), MaskMode::MaskOps, A("D4"), inputs, v);
  EXPECT_TRUE(none.labels.empty());
  EXPECT_EQ(none.tokens, to_prefix(parse("42")));
}

TEST(Fmlm, UnreachableReference) {
  const std::vector<CellAddress> inputs = {A("B4")};
  EXPECT_THROW(fmlm_mask(to_prefix(parse("Z9+B4")), MaskMode::MaskCells, A("D4"), inputs, Vocab::builtin()),
               UnreachableReference);
  EXPECT_NO_THROW(fmlm_mask(to_prefix(parse("Z9+B4")), MaskMode::MaskOps, A("D4"), inputs, Vocab::builtin()));
}

TEST(Fmlm, ExactlyOneClassMaskedAndLabelsRestore) {
  testing::Gen g(31);
  const Vocab v = Vocab::builtin();
  for (int i = 0; i < 2000; ++i) {
    const FormulaAst ast = testing::random_ast(g);
    const PrefixSequence p = to_prefix(ast);
    std::vector<CellAddress> inputs;
    for (const auto& t : p.tokens) {
      if (t.kind == FormulaKind::Cell) inputs.push_back(parse_address(t.text));
    }
    std::reverse(inputs.begin(), inputs.end());
    for (MaskMode mode : {MaskMode::MaskOps, MaskMode::MaskCells}) {
      const FmlmSample s = fmlm_mask(p, mode, {20, 20}, inputs, v);
      ASSERT_EQ(s.tokens.size(), p.size());
      for (std::size_t k = 0; k < p.size(); ++k) {
        const bool is_op = p.tokens[k].kind == FormulaKind::Op || p.tokens[k].kind == FormulaKind::Func;
        const bool is_cell = p.tokens[k].kind == FormulaKind::Cell;
        const bool should_mask = mode == MaskMode::MaskOps ? is_op : is_cell;
        ASSERT_EQ(s.tokens.tokens[k].text == kMaskToken, should_mask);
        ASSERT_EQ(s.tokens.tokens[k].kind, p.tokens[k].kind);
      }
      const PrefixSequence restored = apply_labels(s, inputs);
      ASSERT_EQ(prefix_text(restored), prefix_text(p));
      ASSERT_EQ(restored, p);
    }
  }
}

}  // namespace
}  // namespace tabformula
