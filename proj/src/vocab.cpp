#include "tabformula/vocab.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "tabformula/errors.hpp"

namespace tabformula {

namespace {

constexpr std::string_view kBuiltinWords[] = {
    "the", "of", "and", "in", "to", "a", "for", "is", "on", "by", "with", "as", "at", "from", "or", "per",
    "total", "sum", "average", "mean", "change", "increase", "decrease", "growth", "rate", "percent", "share",
    "year", "month", "quarter", "week", "day", "date", "time", "number", "count", "amount", "value", "price",
    "cost", "sales", "revenue", "income", "profit", "loss", "margin", "tax", "net", "gross", "budget", "actual",
    "forecast", "plan", "variance", "difference", "ratio", "balance", "debit", "credit", "cash", "expense",
    "expenses", "assets", "liabilities", "equity", "units", "unit", "quantity", "population", "million",
    "billion", "thousand", "region", "country", "state", "city", "north", "south", "east", "west", "product",
    "category", "item", "name", "group", "type", "class", "level", "grade", "score", "rank", "department",
    "employee", "salary", "hours", "rate", "target", "result", "results", "estimate", "prior", "current",
    "previous", "next", "first", "second", "third", "fourth", "q1", "q2", "q3", "q4", "jan", "feb", "mar", "apr",
    "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec", "2016", "2017", "2018", "2019", "2020", "2021",
    "2022", "%", "+", "-", "*", "/", "(", ")", ",", ".", ":", "=", "<", ">", "&", "^", "$", "0", "1", "2", "3",
    "4", "5", "6", "7", "8", "9", "10", "100", "what", "which", "how", "much", "many", "did", "does", "was",
    "were", "has", "have", "be", "been", "than", "more", "less", "highest", "lowest", "max", "min", "all",
};

bool is_text_token(std::string_view t) { return !t.empty() && t.front() != '[' && !t.starts_with("##"); }

const std::string& formula_token_text(std::string_view op) {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> m;
    for (std::size_t i = 4; i < 4 + 34; ++i) {
      std::string_view t = kFormulaTokens[i];
      if (t == "[UNKOP]") continue;
      m.emplace(std::string(t.substr(1, t.size() - 2)), std::string(t));
    }
    return m;
  }();
  static const std::string unk = "[UNKOP]";
  auto it = table.find(std::string(op));
  return it == table.end() ? unk : it->second;
}

}  // namespace

Vocab::Vocab(std::vector<std::string> base_tokens) : tokens_(std::move(base_tokens)), base_size_(tokens_.size()) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (std::find(kFormulaTokens.begin(), kFormulaTokens.end(), tokens_[i]) != kFormulaTokens.end()) {
      throw VocabError("base vocabulary contains formula token " + tokens_[i]);
    }
    index_.emplace(tokens_[i], static_cast<TokenId>(i));
    if (is_text_token(tokens_[i])) text_ids_.push_back(static_cast<TokenId>(i));
  }
  for (auto t : kFormulaTokens) {
    index_.emplace(std::string(t), static_cast<TokenId>(tokens_.size()));
    tokens_.emplace_back(t);
  }
  for (auto special : kRequiredSpecials) {
    if (find(special) < 0) throw VocabError("base vocabulary lacks " + std::string(special));
  }
  unk_ = id("[UNK]");
  cls_ = id("[CLS]");
  sep_ = id("[SEP]");
  mask_ = id("[MASK]");
  formula_ = id("[FORMULA]");
}

Vocab Vocab::builtin() {
  std::vector<std::string> base(kRequiredSpecials.begin(), kRequiredSpecials.end());
  for (auto w : kBuiltinWords) {
    if (std::find(base.begin(), base.end(), w) == base.end()) base.emplace_back(w);
  }
  return Vocab(std::move(base));
}

Vocab Vocab::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw VocabError("cannot open vocabulary file " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (lines.size() >= kFormulaTokens.size() &&
      std::equal(kFormulaTokens.begin(), kFormulaTokens.end(), lines.end() - kFormulaTokens.size())) {
    lines.resize(lines.size() - kFormulaTokens.size());
  }
  return Vocab(std::move(lines));
}

TokenId Vocab::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : it->second;
}

TokenId Vocab::id(std::string_view token) const {
  TokenId i = find(token);
  if (i < 0) throw VocabError("token not in vocabulary: " + std::string(token));
  return i;
}

TokenId Vocab::lookup_text(std::string_view word) const {
  if (TokenId i = find(word); i >= 0 && !is_formula_token(i)) return i;
  std::string lower(word);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (TokenId i = find(lower); i >= 0 && !is_formula_token(i)) return i;
  return unk_;
}

std::vector<TokenId> Vocab::base_token_ids() const {
  std::vector<TokenId> out(base_size_);
  for (std::size_t i = 0; i < base_size_; ++i) out[i] = static_cast<TokenId>(i);
  return out;
}

void Vocab::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw VocabError("cannot write vocabulary file " + path.string());
  for (const auto& t : tokens_) out << t << '\n';
}

bool has_formula_token(std::string_view op_or_func) { return formula_token_text(op_or_func) != "[UNKOP]"; }

TokenId encode_formula_token(const Vocab& vocab, const FormulaToken& tok) {
  switch (tok.kind) {
    case TokenKind::Cell: return vocab.id("[RANGE]");
    case TokenKind::Const:
      switch (tok.const_kind) {
        case ConstKind::Str: return vocab.id("[C-STR]");
        case ConstKind::Num: return vocab.id("[C-NUM]");
        case ConstKind::Bool: return vocab.id("[C-BOOL]");
      }
      break;
    case TokenKind::Op:
    case TokenKind::Func: return vocab.id(formula_token_text(tok.lexeme));
    case TokenKind::RangeSep: return vocab.id("[:]");
    case TokenKind::LParen:
    case TokenKind::RParen:
    case TokenKind::Comma: return vocab.lookup_text(tok.lexeme);
  }
  return vocab.unk();
}

TokenId encode_prefix_token(const Vocab& vocab, const PrefixToken& tok) {
  switch (tok.kind) {
    case FormulaKind::Cell: return vocab.id("[RANGE]");
    case FormulaKind::Const: {
      FormulaToken ft{TokenKind::Const, tok.text, {}, tok.const_kind};
      return encode_formula_token(vocab, ft);
    }
    case FormulaKind::Op:
    case FormulaKind::Func: return vocab.id(formula_token_text(tok.text));
    case FormulaKind::Special:
      if (tok.text == kRangeSep) return vocab.id("[:]");
      return vocab.id(tok.text);
  }
  return vocab.unk();
}

bool is_covered(const FormulaAst& ast) {
  if (!ast.is_leaf() && !has_formula_token(ast.text)) return false;
  return std::all_of(ast.children.begin(), ast.children.end(), [](const FormulaAst& c) { return is_covered(c); });
}

double coverage(std::span<const FormulaAst> formulas) {
  if (formulas.empty()) return 0.0;
  const auto covered = std::count_if(formulas.begin(), formulas.end(), [](const FormulaAst& f) { return is_covered(f); });
  return static_cast<double>(covered) / static_cast<double>(formulas.size());
}

}  // namespace tabformula
