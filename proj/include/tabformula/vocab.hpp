#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tabformula/formula.hpp"

namespace tabformula {

using TokenId = std::int32_t;

/// The formula tokens appended after the base vocabulary, in file order:
/// [RANGE]; [C-STR] [C-NUM] [C-BOOL]; 34 operator/function tokens ending in
/// [UNKOP]; then [START] [END] [:].
inline constexpr std::array<std::string_view, 41> kFormulaTokens = {
    "[RANGE]",
    "[C-STR]", "[C-NUM]", "[C-BOOL]",
    "[+]", "[SUM]", "[-]", "[/]", "[IF]", "[ROUND]", "[AVERAGE]", "[VLOOKUP]", "[>]", "[=]", "[<]", "[ABS]",
    "[OFFSET]", "[SUBTOTAL]", "[MAX]", "[<>]", "[^]", "[LN]", "[COUNTA]", "[SQRT]", "[MIN]", "[ISERROR]",
    "[EOMONTH]", "[COUNT]", "[AND]", "[%]", "[INDEX]", "[YEAR]", "[MONTH]", "[MATCH]", "[>=]", "[<=]", "[&]",
    "[UNKOP]",
    "[START]", "[END]", "[:]",
};

/// Base-vocabulary specials the sequence builder relies on.
inline constexpr std::array<std::string_view, 6> kRequiredSpecials = {
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "[FORMULA]",
};

class Vocab {
 public:
  /// Small built-in English word list headed by the required specials.
  static Vocab builtin();

  /// One token per line, id = zero-based line number. If the file already ends
  /// with the 41 formula tokens they are recognised, otherwise they are appended.
  /// Throws VocabError.
  static Vocab load(const std::filesystem::path& path);

  /// Throws VocabError when a required special is missing or a formula token
  /// appears in the base list.
  explicit Vocab(std::vector<std::string> base_tokens);

  std::size_t size() const { return tokens_.size(); }
  std::size_t base_size() const { return base_size_; }
  const std::string& token(TokenId id) const { return tokens_.at(static_cast<std::size_t>(id)); }

  /// -1 when absent.
  TokenId find(std::string_view token) const;
  /// Throws VocabError when absent.
  TokenId id(std::string_view token) const;

  TokenId unk() const { return unk_; }
  TokenId cls() const { return cls_; }
  TokenId sep() const { return sep_; }
  TokenId mask() const { return mask_; }
  TokenId formula_tag() const { return formula_; }

  /// Exact match, then lower-cased match, then [UNK].
  TokenId lookup_text(std::string_view word) const;

  bool is_formula_token(TokenId id) const { return id >= static_cast<TokenId>(base_size_); }

  /// Base tokens usable as natural-language noise: not bracketed, not "##" pieces.
  const std::vector<TokenId>& text_token_ids() const { return text_ids_; }
  std::vector<TokenId> base_token_ids() const;

  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> index_;
  std::size_t base_size_ = 0;
  std::vector<TokenId> text_ids_;
  TokenId unk_ = -1, cls_ = -1, sep_ = -1, mask_ = -1, formula_ = -1;
};

/// Vocabulary id of a lexed formula token: cells -> [RANGE], constants by kind,
/// known operators/functions -> bracketed token, other functions -> [UNKOP],
/// ':' -> [:]. Parentheses and commas fall back to their base-vocabulary text.
TokenId encode_formula_token(const Vocab& vocab, const FormulaToken& tok);

/// Same mapping for linearized tokens ([START]/[END] included).
TokenId encode_prefix_token(const Vocab& vocab, const PrefixToken& tok);

/// Whether an operator/function name has its own bracketed token.
bool has_formula_token(std::string_view op_or_func);

/// Fraction of formulas whose every Op/Func node has its own token. 0 for an
/// empty input.
double coverage(std::span<const FormulaAst> formulas);

bool is_covered(const FormulaAst& ast);

}  // namespace tabformula
