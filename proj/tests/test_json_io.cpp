#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "tabformula/errors.hpp"
#include "tabformula/json_io.hpp"

namespace tabformula {
namespace {

const std::filesystem::path kData = TABFORMULA_DATA_DIR;

json minimal() {
  return json::parse(R"({"table_id": "t", "n_rows": 2, "n_cols": 2, "top_header_rows": 1, "left_header_cols": 1,
                         "cells": [{"row": 1, "col": 1, "value": 3}]})");
}

std::string pointer_of(const json& doc) {
  try {
    table_from_json(doc, "doc");
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), "doc");
    return e.pointer();
  }
  ADD_FAILURE() << "no SchemaError";
  return {};
}

void expect_same(const Table& a, const Table& b) {
  EXPECT_EQ(a.id(), b.id());
  EXPECT_EQ(a.rows(), b.rows());
  EXPECT_EQ(a.cols(), b.cols());
  EXPECT_EQ(a.top_header_rows(), b.top_header_rows());
  EXPECT_EQ(a.left_header_cols(), b.left_header_cols());
  ASSERT_EQ(a.cells().size(), b.cells().size());
  for (std::size_t i = 0; i < a.cells().size(); ++i) {
    const Cell& x = a.cells()[i];
    const Cell& y = b.cells()[i];
    EXPECT_EQ(x.address, y.address);
    EXPECT_EQ(x.value.kind, y.value.kind);
    EXPECT_EQ(x.value.text, y.value.text);
    EXPECT_EQ(x.formula, y.formula);
    EXPECT_EQ(x.format, y.format);
  }
  for (auto d : {Direction::Top, Direction::Left}) EXPECT_EQ(a.header_cells(d), b.header_cells(d));
}

TEST(ReadTables, VegetablesFile) {
  const auto tables = read_tables(kData / "vegetables.json");
  ASSERT_EQ(tables.size(), 1u);
  const Table& t = tables[0];
  EXPECT_EQ(t.id(), "vegetables");
  EXPECT_EQ(t.rows(), 6);
  EXPECT_EQ(t.cols(), 5);
  const Cell& e4 = t.at(parse_address("E4"));
  EXPECT_EQ(e4.formula, "=($D$4-$C$4)/$C$4");
  EXPECT_EQ(e4.value.kind, ValueKind::Number);
  EXPECT_EQ(t.at(parse_address("C2")).value.text, "120");
  const HeaderChains h = headers_of(t, parse_address("C3"));
  ASSERT_EQ(h.left.size(), 2u);
  EXPECT_EQ(h.left[0].text, "Vegetables");
  EXPECT_EQ(h.left[1].text, "Onion");
}

TEST(TableJson, RoundTrip) {
  expect_same(table_from_json(table_to_json(testing::vegetables_table()), "x"), testing::vegetables_table());
  expect_same(table_from_json(table_to_json(testing::population_table()), "x"), testing::population_table());
  testing::Gen g(8);
  for (int i = 0; i < 30; ++i) {
    const Table t = testing::random_table(g, "r" + std::to_string(i));
    expect_same(table_from_json(table_to_json(t), "x"), t);
  }
}

TEST(TableJson, ValueKinds) {
  json doc = minimal();
  doc["cells"] = json::parse(R"([{"row": 0, "col": 1, "value": "Year"},
                                 {"row": 1, "col": 0, "value": true},
                                 {"row": 1, "col": 1, "value": "12.50", "value_kind": "number", "format": 3},
                                 {"row": 0, "col": 0, "value": null}])");
  const Table t = table_from_json(doc, "d");
  EXPECT_EQ(t.at(parse_address("B1")).value.kind, ValueKind::Text);
  EXPECT_EQ(t.at(parse_address("A2")).value.kind, ValueKind::Bool);
  EXPECT_EQ(t.at(parse_address("B2")).value.text, "12.50");
  EXPECT_EQ(t.at(parse_address("B2")).format, 3);
  EXPECT_EQ(t.at(parse_address("A1")).value.kind, ValueKind::Empty);
}

TEST(TableJson, SchemaErrorsCarryPointers) {
  json doc = minimal();
  doc.erase("n_rows");
  EXPECT_EQ(pointer_of(doc), "/n_rows");

  doc = minimal();
  doc["n_cols"] = "two";
  EXPECT_EQ(pointer_of(doc), "/n_cols");

  doc = minimal();
  doc["cells"][0]["row"] = 9;
  EXPECT_EQ(pointer_of(doc), "/cells/0");

  doc = minimal();
  doc["cells"][0]["value"] = "abc";
  doc["cells"][0]["value_kind"] = "number";
  EXPECT_EQ(pointer_of(doc), "/cells/0/value");

  doc = minimal();
  doc["cells"].push_back(doc["cells"][0]);
  EXPECT_EQ(pointer_of(doc), "/cells/1");

  doc = minimal();
  doc["cells"][0]["formula"] = "";
  EXPECT_EQ(pointer_of(doc), "/cells/0/formula");

  doc = minimal();
  doc["top_tree"] = json::parse(R"([{"text": "x", "span": [1]}])");
  EXPECT_EQ(pointer_of(doc), "/top_tree/0/span");

  doc = minimal();
  doc["top_header_rows"] = 2;
  EXPECT_EQ(pointer_of(doc), "/top_header_rows");

  EXPECT_EQ(pointer_of(json::array()), "/");
}

TEST(ReadTables, ArraysLinesAndMalformedFiles) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto arr = dir / "tabformula_arr.json";
  const auto lines = dir / "tabformula_lines.jsonl";
  const auto bad = dir / "tabformula_bad.json";
  json a = minimal();
  json b = minimal();
  b["table_id"] = "u";
  std::ofstream(arr) << json::array({a, b}).dump();
  std::ofstream(lines) << a.dump() << "\n\n" << b.dump() << "\n";
  std::ofstream(bad) << "{\"table_id\": ";
  EXPECT_EQ(read_tables(arr).size(), 2u);
  const auto ls = read_tables(lines);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1].id(), "u");
  EXPECT_THROW(read_tables(bad), SchemaError);
  EXPECT_THROW(read_tables(dir / "tabformula_missing.json"), SchemaError);
  for (const auto& p : {arr, lines, bad}) std::filesystem::remove(p);
}

TEST(JsonOutput, StatsAndSummaryFields) {
  const std::vector<FormulaAst> fs = {parse("SUM(B4:C5)"), parse("A1+1")};
  const json s = stats_to_json(corpus_stats(fs), RangeCounting::Cell3);
  for (const char* k : {"formula_count", "avg_sketch_length", "avg_ops_per_formula", "coverage_ratio"}) {
    EXPECT_TRUE(s.contains(k)) << k;
  }
  EXPECT_DOUBLE_EQ(s["avg_sketch_length"].get<double>(), 3.5);

  const std::vector<EvalVerdict> vs = {{true, true, true, std::nullopt},
                                       {false, true, false, ErrorClass::ReferenceFailure}};
  const json r = summary_to_json(aggregate(vs));
  EXPECT_DOUBLE_EQ(r["formula_acc"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(r["sketch_acc"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(r["range_acc"].get<double>(), 0.5);
}

}  // namespace
}  // namespace tabformula
