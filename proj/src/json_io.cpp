#include "tabformula/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "tabformula/errors.hpp"

namespace tabformula {

namespace {

class DocReader {
 public:
  explicit DocReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw SchemaError(source_, pointer.empty() ? "/" : pointer, message);
  }

  const json& member(const json& obj, const std::string& pointer, const char* key) const {
    if (!obj.is_object()) fail(pointer, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(pointer + "/" + key, "required field missing");
    return *it;
  }

  int integer(const json& v, const std::string& pointer, int min) const {
    if (!v.is_number_integer()) fail(pointer, "expected an integer");
    const auto x = v.get<long long>();
    if (x < min || x > (1LL << 31) - 1) fail(pointer, "integer out of range");
    return static_cast<int>(x);
  }

  std::string string(const json& v, const std::string& pointer) const {
    if (!v.is_string()) fail(pointer, "expected a string");
    return v.get<std::string>();
  }

  HeaderNode node(const json& v, const std::string& pointer) const {
    if (!v.is_object()) fail(pointer, "expected a header node object");
    HeaderNode n;
    if (auto it = v.find("text"); it != v.end()) n.text = string(*it, pointer + "/text");
    const bool has_row = v.contains("row");
    const bool has_col = v.contains("col");
    if (has_row != has_col) fail(pointer, "header node needs both row and col, or neither");
    if (has_row) {
      n.anchor = CellAddress{integer(v["col"], pointer + "/col", 0), integer(v["row"], pointer + "/row", 0)};
    }
    const json& span = member(v, pointer, "span");
    if (!span.is_array() || span.size() != 2) fail(pointer + "/span", "expected [begin, end]");
    n.begin = integer(span[0], pointer + "/span/0", 0);
    n.end = integer(span[1], pointer + "/span/1", 0);
    if (auto it = v.find("children"); it != v.end()) {
      if (!it->is_array()) fail(pointer + "/children", "expected an array");
      for (std::size_t i = 0; i < it->size(); ++i) {
        n.children.push_back(node((*it)[i], pointer + "/children/" + std::to_string(i)));
      }
    }
    return n;
  }

  HeaderTree tree(const json& v, Direction d, const std::string& pointer) const {
    HeaderTree t{d, {}};
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) t.roots.push_back(node(v[i], pointer + "/" + std::to_string(i)));
      return t;
    }
    if (!v.is_object()) fail(pointer, "expected a header tree (object or array)");
    HeaderNode root = node(v, pointer);
    if (root.anchor) {
      t.roots.push_back(std::move(root));
    } else {
      t.roots = std::move(root.children);
    }
    return t;
  }

 private:
  std::string source_;
};

std::string number_text(const json& v) {
  if (v.is_number_integer()) return v.dump();
  std::string s = v.dump();
  // Drop exponents that the decimal-string features cannot represent.
  if (s.find_first_of("eE") != std::string::npos) {
    std::ostringstream os;
    os.precision(17);
    os << std::fixed << v.get<double>();
    s = os.str();
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace

Table table_from_json(const json& doc, const std::string& source, const std::string& p) {
  DocReader r(source);
  const std::string id = r.string(r.member(doc, p, "table_id"), p + "/table_id");
  const int n_rows = r.integer(r.member(doc, p, "n_rows"), p + "/n_rows", 1);
  const int n_cols = r.integer(r.member(doc, p, "n_cols"), p + "/n_cols", 1);
  const int thr = r.integer(r.member(doc, p, "top_header_rows"), p + "/top_header_rows", 0);
  const int lhc = r.integer(r.member(doc, p, "left_header_cols"), p + "/left_header_cols", 0);
  if (thr >= n_rows) r.fail(p + "/top_header_rows", "must be less than n_rows");
  if (lhc >= n_cols) r.fail(p + "/left_header_cols", "must be less than n_cols");
  if (static_cast<long long>(n_rows) * n_cols > 4'000'000) r.fail(p, "table too large");

  const json& cells_doc = r.member(doc, p, "cells");
  if (!cells_doc.is_array()) r.fail(p + "/cells", "expected an array");
  std::vector<Cell> cells;
  std::set<CellAddress> seen;
  for (std::size_t i = 0; i < cells_doc.size(); ++i) {
    const std::string cp = p + "/cells/" + std::to_string(i);
    const json& c = cells_doc[i];
    Cell cell;
    cell.address.row = r.integer(r.member(c, cp, "row"), cp + "/row", 0);
    cell.address.col = r.integer(r.member(c, cp, "col"), cp + "/col", 0);
    if (cell.address.row >= n_rows || cell.address.col >= n_cols) r.fail(cp, "cell address out of bounds");
    if (!seen.insert(cell.address).second) r.fail(cp, "duplicate cell address");

    const json value = c.contains("value") ? c["value"] : json();
    std::string kind;
    if (auto it = c.find("value_kind"); it != c.end()) {
      kind = r.string(*it, cp + "/value_kind");
    } else if (value.is_number()) {
      kind = "number";
    } else if (value.is_boolean()) {
      kind = "bool";
    } else if (value.is_null() || (value.is_string() && value.get<std::string>().empty())) {
      kind = "empty";
    } else {
      kind = "text";
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number()) {
      text = number_text(value);
    } else if (value.is_boolean()) {
      text = value.get<bool>() ? "TRUE" : "FALSE";
    } else if (!value.is_null()) {
      r.fail(cp + "/value", "expected a string, number, boolean or null");
    }
    if (kind == "text") {
      cell.value = CellValue::of_text(std::move(text));
    } else if (kind == "number") {
      if (!is_decimal_text(text)) r.fail(cp + "/value", "number cell value is not a decimal number");
      cell.value = CellValue::of_number(std::move(text));
    } else if (kind == "bool") {
      if (text != "TRUE" && text != "FALSE" && text != "true" && text != "false") {
        r.fail(cp + "/value", "bool cell value must be true or false");
      }
      cell.value = CellValue::of_bool(text == "TRUE" || text == "true");
    } else if (kind == "empty") {
      cell.value = CellValue::empty();
    } else {
      r.fail(cp + "/value_kind", "expected one of text, number, bool, empty");
    }
    if (auto it = c.find("formula"); it != c.end() && !it->is_null()) {
      std::string f = r.string(*it, cp + "/formula");
      if (f.empty()) r.fail(cp + "/formula", "formula must be non-empty");
      cell.formula = std::move(f);
    }
    if (auto it = c.find("format"); it != c.end() && !it->is_null()) cell.format = r.integer(*it, cp + "/format", 0);
    cells.push_back(std::move(cell));
  }

  std::optional<HeaderTree> top, left;
  if (auto it = doc.find("top_tree"); it != doc.end() && !it->is_null()) {
    top = r.tree(*it, Direction::Top, p + "/top_tree");
  }
  if (auto it = doc.find("left_tree"); it != doc.end() && !it->is_null()) {
    left = r.tree(*it, Direction::Left, p + "/left_tree");
  }
  try {
    return Table(id, n_rows, n_cols, thr, lhc, std::move(cells), std::move(top), std::move(left));
  } catch (const std::invalid_argument& e) {
    r.fail(p.empty() ? "/" : p, e.what());
  }
}

namespace {

json node_to_json(const HeaderNode& n) {
  json j{{"text", n.text}, {"span", {n.begin, n.end}}};
  if (n.anchor) {
    j["row"] = n.anchor->row;
    j["col"] = n.anchor->col;
  }
  if (!n.children.empty()) {
    json kids = json::array();
    for (const auto& c : n.children) kids.push_back(node_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

json tree_to_json(const HeaderTree& t) {
  json arr = json::array();
  for (const auto& n : t.roots) arr.push_back(node_to_json(n));
  return arr;
}

}  // namespace

json table_to_json(const Table& table) {
  json cells = json::array();
  for (const auto& c : table.cells()) {
    if (c.value.kind == ValueKind::Empty && !c.formula && c.format == 0) continue;
    json j{{"row", c.address.row}, {"col", c.address.col}, {"value", c.value.text},
           {"value_kind", std::string(to_string(c.value.kind))}};
    if (c.formula) j["formula"] = *c.formula;
    if (c.format != 0) j["format"] = c.format;
    cells.push_back(std::move(j));
  }
  return json{{"table_id", table.id()},
              {"n_rows", table.rows()},
              {"n_cols", table.cols()},
              {"top_header_rows", table.top_header_rows()},
              {"left_header_cols", table.left_header_cols()},
              {"cells", std::move(cells)},
              {"top_tree", tree_to_json(table.top_tree())},
              {"left_tree", tree_to_json(table.left_tree())}};
}

std::vector<Table> read_tables(const std::filesystem::path& path) {
  const std::string source = path.string();
  std::ifstream in(path);
  if (!in) throw SchemaError(source, "/", "cannot open file");
  std::vector<Table> out;
  if (path.extension() == ".jsonl") {
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line); ++line_no) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const std::string src = source + "#L" + std::to_string(line_no + 1);
      json doc = json::parse(line, nullptr, false);
      if (doc.is_discarded()) throw SchemaError(src, "/", "malformed JSON");
      out.push_back(table_from_json(doc, src));
    }
    return out;
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw SchemaError(source, "/", "malformed JSON");
  if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(table_from_json(doc[i], source, "/" + std::to_string(i)));
  } else {
    out.push_back(table_from_json(doc, source));
  }
  return out;
}

json header_to_json(const HeaderRef& h) {
  return json{{"cell", format_address(h.address)}, {"text", h.text}, {"direction", std::string(to_string(h.direction))}};
}

json prefix_to_json(const PrefixSequence& seq) {
  json arr = json::array();
  for (const auto& t : seq.tokens) arr.push_back(t.text);
  return arr;
}

json sequence_to_json(const PackedSequence& seq) {
  json ids = json::array(), kinds = json::array(), numbers = json::array(), tops = json::array(),
       lefts = json::array(), formats = json::array(), segments = json::array(), sources = json::array();
  for (const auto& r : seq.records) {
    ids.push_back(r.token);
    kinds.push_back(r.formula_kind ? json(std::string(to_string(*r.formula_kind))) : json());
    numbers.push_back(r.number ? json::array({r.number->magnitude, r.number->precision, r.number->first_digit,
                                              r.number->last_digit})
                               : json());
    tops.push_back(r.top_coord);
    lefts.push_back(r.left_coord);
    formats.push_back(r.format);
    segments.push_back(r.segment == Segment::Text ? 0 : 1);
    sources.push_back(r.source_cell ? json(format_address(*r.source_cell)) : json());
  }
  json cells = json::array();
  for (const auto& a : seq.cells) cells.push_back(format_address(a));
  return json{{"max_len", seq.max_len},
              {"truncated", seq.truncated},
              {"mode", std::string(to_string(seq.mode))},
              {"length", seq.records.size()},
              {"cells", std::move(cells)},
              {"token_ids", std::move(ids)},
              {"formula_kind", std::move(kinds)},
              {"number", std::move(numbers)},
              {"top_coord", std::move(tops)},
              {"left_coord", std::move(lefts)},
              {"format", std::move(formats)},
              {"segment", std::move(segments)},
              {"source_cell", std::move(sources)}};
}

json nrp_pairs_to_json(const std::vector<NrpPairSample>& pairs) {
  json arr = json::array();
  for (const auto& p : pairs) {
    arr.push_back(json{{"formula_header", header_to_json(p.formula_header)},
                       {"candidate_header", header_to_json(p.candidate_header)},
                       {"label", p.label == PairLabel::Positive ? "positive" : "negative"},
                       {"direction", std::string(to_string(p.direction))}});
  }
  return json{{"pairs", std::move(arr)}};
}

json nrp_prompt_to_json(const NrpPromptSample& s) {
  json labels = json::array();
  for (const auto& l : s.cell_labels) {
    labels.push_back(json{{"cell", format_address(l.cell)}, {"class", std::string(to_string(l.label))}});
  }
  return json{{"prompt_tokens", s.prompt_tokens},
              {"row_header_position", s.row_header_position},
              {"column_header_position", s.column_header_position},
              {"cell_labels", std::move(labels)}};
}

json ncp_to_json(const NcpSample& s) {
  json cells = json::array();
  for (const auto& a : s.operand_cells) cells.push_back(format_address(a));
  return json{{"operator", s.op}, {"operand_cells", std::move(cells)}};
}

json fmlm_to_json(const FmlmSample& s) {
  json kinds = json::array();
  for (const auto& t : s.tokens.tokens) kinds.push_back(std::string(to_string(t.kind)));
  json labels = json::array();
  for (const auto& l : s.labels) {
    json j{{"position", l.position}, {"target", l.target}};
    if (s.mode == MaskMode::MaskOps) {
      j["target_id"] = l.target_id;
    } else {
      j["cell_index"] = l.cell_index;
    }
    labels.push_back(std::move(j));
  }
  return json{{"tokens", prefix_to_json(s.tokens)},
              {"token_kinds", std::move(kinds)},
              {"mode", std::string(to_string(s.mode))},
              {"labels", std::move(labels)},
              {"masked_cell_feature_rule",
               {{"number", "default"},
                {"position_from", format_address(s.feature_rule.position_from)},
                {"format_from", format_address(s.feature_rule.format_from)}}}};
}

json stats_to_json(const CorpusStats& s, RangeCounting counting) {
  json hist = json::object();
  for (const auto& [len, n] : s.sketch_histogram(counting)) hist[std::to_string(len)] = n;
  json freq = json::object();
  json share = json::object();
  for (const auto& [op, n] : s.op_frequency) {
    freq[op] = n;
    share[op] = s.op_func_total ? static_cast<double>(n) / static_cast<double>(s.op_func_total) : 0.0;
  }
  return json{{"empty", s.empty()},
              {"table_count", s.table_count},
              {"formula_count", s.formula_count},
              {"range_counting", std::string(to_string(counting))},
              {"avg_sketch_length", s.avg_sketch_length(counting)},
              {"avg_sketch_length_cell1", s.avg_sketch_length(RangeCounting::Cell1)},
              {"avg_sketch_length_cell3", s.avg_sketch_length(RangeCounting::Cell3)},
              {"avg_ops_per_formula", s.avg_ops_per_formula()},
              {"sketch_length_histogram", std::move(hist)},
              {"op_frequency", std::move(freq)},
              {"op_share", std::move(share)},
              {"coverage_ratio", s.coverage_ratio()},
              {"rejected", s.rejected}};
}

json summary_to_json(const EvalSummary& s) {
  json hist = json::object();
  for (auto e : {ErrorClass::SketchFailure, ErrorClass::ReferenceUnreachable, ErrorClass::ReferenceFailure}) {
    auto it = s.error_histogram.find(e);
    hist[std::string(to_string(e))] = it == s.error_histogram.end() ? 0 : it->second;
  }
  return json{{"count", s.count},
              {"formula_acc", s.formula_acc},
              {"sketch_acc", s.sketch_acc},
              {"range_acc", s.range_acc},
              {"error_histogram", std::move(hist)}};
}

}  // namespace tabformula
