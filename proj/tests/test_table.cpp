#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "tabformula/errors.hpp"
#include "tabformula/table.hpp"

namespace tabformula {
namespace {

using testing::oracle_address;
using testing::vegetables_table;

std::vector<std::string> texts(const std::vector<HeaderRef>& hs) {
  std::vector<std::string> out;
  for (const auto& h : hs) out.push_back(h.text);
  return out;
}

TEST(ParseAddress, Examples) {
  EXPECT_EQ(parse_address("A1"), (CellAddress{0, 0}));
  EXPECT_EQ(parse_address("$B$4"), (CellAddress{1, 3}));
  EXPECT_EQ(parse_address("AA10"), (CellAddress{26, 9}));
  EXPECT_EQ(parse_address("b4"), (CellAddress{1, 3}));
  EXPECT_EQ(parse_address("B$4"), (CellAddress{1, 3}));
  EXPECT_EQ(parse_address("XFD1048576"), (CellAddress{16383, 1048575}));
}

TEST(ParseAddress, RejectsMalformed) {
  for (const char* bad : {"", "A", "1", "A0", "A01", "$$A1", "A1$", "AAAA1", "A-1", "A 1", "1A", "A1B"}) {
    EXPECT_THROW(parse_address(bad), AddressParseError) << bad;
  }
}

TEST(FormatAddress, Examples) {
  EXPECT_EQ(format_address({0, 0}), "A1");
  EXPECT_EQ(format_address({26, 9}), "AA10");
  EXPECT_EQ(format_address({2, 3}), "C4");
  EXPECT_EQ(column_letters(25), "Z");
  EXPECT_EQ(column_letters(27), "AB");
  EXPECT_EQ(column_letters(701), "ZZ");
  EXPECT_EQ(column_letters(702), "AAA");
  EXPECT_EQ(column_letters(kMaxColumns - 1), "ZZZ");
}

TEST(FormatAddress, RoundTripAgainstBijectiveOracle) {
  testing::Gen g(11);
  for (int i = 0; i < 20000; ++i) {
    const CellAddress a{testing::uniform(g, 0, kMaxColumns - 1), testing::uniform(g, 0, kMaxRows - 1)};
    const std::string s = format_address(a);
    ASSERT_EQ(s, oracle_address(a));
    ASSERT_EQ(parse_address(s), a);
  }
  for (int c = 0; c < 800; ++c) ASSERT_EQ(parse_address(format_address({c, 0})).col, c);
}

TEST(NumericFeatures, Examples) {
  EXPECT_EQ(numeric_features("11.56"), (NumericFeatures{2, 2, 1, 6}));
  EXPECT_EQ(numeric_features("0"), (NumericFeatures{1, 0, 0, 0}));
  EXPECT_EQ(numeric_features("100"), (NumericFeatures{3, 0, 1, 0}));
}

TEST(NumericFeatures, EdgeCases) {
  EXPECT_EQ(numeric_features("-3.5"), (NumericFeatures{1, 1, 3, 5}));
  EXPECT_EQ(numeric_features("007"), (NumericFeatures{1, 0, 7, 7}));
  EXPECT_EQ(numeric_features("0.25"), (NumericFeatures{1, 2, 0, 5}));
  EXPECT_EQ(numeric_features(".5"), (NumericFeatures{1, 1, 0, 5}));
  EXPECT_EQ(numeric_features("+12"), (NumericFeatures{2, 0, 1, 2}));
  for (const char* bad : {"", "abc", "1e5", "1.2.3", "-", ".", "1,000"}) {
    EXPECT_THROW(numeric_features(bad), NotANumber) << bad;
    EXPECT_FALSE(is_decimal_text(bad)) << bad;
  }
}

TEST(NumericFeatures, TotalOnGeneratedDecimals) {
  testing::Gen g(3);
  for (int i = 0; i < 5000; ++i) {
    std::string ip = std::to_string(testing::uniform(g, 0, 1000000));
    std::string fp;
    const int digits = testing::uniform(g, 0, 4);
    for (int k = 0; k < digits; ++k) fp.push_back(static_cast<char>('0' + testing::uniform(g, 0, 9)));
    const std::string s = fp.empty() ? ip : ip + "." + fp;
    const NumericFeatures f = numeric_features(s);
    ASSERT_EQ(f.magnitude, static_cast<int>(ip.size()));
    ASSERT_EQ(f.precision, digits);
    ASSERT_EQ(f.first_digit, ip[0] - '0');
    ASSERT_EQ(f.last_digit, s.back() - '0');
    ASSERT_EQ(numeric_features(s), f);
  }
}

TEST(CellValue, NumberRequiresDecimalText) {
  EXPECT_EQ(CellValue::of_number("42").number, 42.0);
  EXPECT_THROW(CellValue::of_number("x"), NotANumber);
  EXPECT_FALSE(CellValue::of_text("42").number.has_value());
}

TEST(HeadersOf, HierarchicalExamples) {
  const Table t = vegetables_table();
  const auto c3 = headers_of(t, parse_address("C3"));
  EXPECT_EQ(texts(c3.top), (std::vector<std::string>{"2016"}));
  EXPECT_EQ(texts(c3.left), (std::vector<std::string>{"Vegetables", "Onion"}));
  const auto e3 = headers_of(t, parse_address("E3"));
  EXPECT_EQ(texts(e3.top), (std::vector<std::string>{"%Increase"}));
  EXPECT_EQ(e3.left.back().address, parse_address("B3"));
  EXPECT_EQ(e3.left.front().path, (std::vector<int>{0}));
  EXPECT_EQ(e3.left.back().path, (std::vector<int>{0, 1}));
}

TEST(HeadersOf, FlatTableHasSingleTopHeader) {
  const Table t = testing::population_table();
  for (int r = 1; r < t.rows(); ++r) {
    for (int c = 1; c < t.cols(); ++c) {
      const auto chains = headers_of(t, {c, r});
      ASSERT_EQ(chains.top.size(), 1u);
      ASSERT_EQ(chains.top[0].address, (CellAddress{c, 0}));
      ASSERT_EQ(chains.left.size(), 1u);
    }
  }
}

TEST(HeadersOf, HeaderCellThrows) {
  const Table t = vegetables_table();
  EXPECT_THROW(headers_of(t, parse_address("C1")), NotADataCell);
  EXPECT_THROW(headers_of(t, parse_address("B3")), NotADataCell);
  EXPECT_THROW(headers_of(t, parse_address("Z99")), NotADataCell);
}

TEST(HeadersOf, MatchesTreeScanOracle) {
  testing::Gen g(5);
  for (int i = 0; i < 200; ++i) {
    const Table t = testing::random_table(g, "t" + std::to_string(i));
    for (int r = t.top_header_rows(); r < t.rows(); ++r) {
      for (int c = t.left_header_cols(); c < t.cols(); ++c) {
        const auto chains = headers_of(t, {c, r});
        const auto oracle = testing::oracle_headers(t, {c, r});
        std::vector<CellAddress> top, left;
        for (const auto& h : chains.top) top.push_back(h.address);
        for (const auto& h : chains.left) left.push_back(h.address);
        ASSERT_EQ(top, oracle.top);
        ASSERT_EQ(left, oracle.left);
        ASSERT_GE(chains.top.size(), 1u);
        ASSERT_GE(chains.left.size(), 1u);
        for (std::size_t k = 1; k < chains.top.size(); ++k) {
          ASSERT_LT(chains.top[k - 1].address.row, chains.top[k].address.row);  // root to leaf
        }
      }
    }
  }
}

TEST(NonSharedHeaders, SharedHeaderExcluded) {
  const Table t = vegetables_table();
  const auto ns = non_shared_headers(t, parse_address("E3"), parse_address("C3"));
  EXPECT_EQ(texts(ns.only_a), (std::vector<std::string>{"%Increase"}));
  EXPECT_EQ(texts(ns.only_b), (std::vector<std::string>{"2016"}));
}

TEST(NonSharedHeaders, SameCellIsEmpty) {
  const Table t = vegetables_table();
  const auto ns = non_shared_headers(t, parse_address("D4"), parse_address("D4"));
  EXPECT_TRUE(ns.only_a.empty());
  EXPECT_TRUE(ns.only_b.empty());
}

TEST(NonSharedHeaders, DisjointCellsKeepFullChains) {
  const Table t = vegetables_table();
  const auto ns = non_shared_headers(t, parse_address("C2"), parse_address("D6"));
  EXPECT_EQ(texts(ns.only_a), (std::vector<std::string>{"2016", "Vegetables", "Tomato"}));
  EXPECT_EQ(texts(ns.only_b), (std::vector<std::string>{"2021", "Fruits", "Pear"}));
}

TEST(NonSharedHeaders, SymmetricUnderSwap) {
  testing::Gen g(8);
  for (int i = 0; i < 100; ++i) {
    const Table t = testing::random_table(g, "s");
    auto cell = [&] {
      return CellAddress{testing::uniform(g, t.left_header_cols(), t.cols() - 1),
                         testing::uniform(g, t.top_header_rows(), t.rows() - 1)};
    };
    const CellAddress a = cell(), b = cell();
    const auto ab = non_shared_headers(t, a, b);
    const auto ba = non_shared_headers(t, b, a);
    ASSERT_EQ(ab.only_a, ba.only_b);
    ASSERT_EQ(ab.only_b, ba.only_a);
  }
}

TEST(Table, SynthesizesFlatTrees) {
  const Table t = testing::population_table();
  ASSERT_EQ(t.top_tree().roots.size(), 3u);
  EXPECT_EQ(t.top_tree().roots[0].text, "2019");
  EXPECT_EQ(t.left_tree().roots.size(), 4u);
  EXPECT_EQ(t.header_cells(Direction::Left).back().text, "Croatia");
}

TEST(Table, RejectsInvalidShapes) {
  EXPECT_THROW(Table("x", 0, 3, 0, 0, {}), std::invalid_argument);
  EXPECT_THROW(Table("x", 3, 3, 3, 0, {}), std::invalid_argument);
  EXPECT_THROW(Table("x", 3, 3, 0, 3, {}), std::invalid_argument);
  EXPECT_THROW(Table("x", 3, 3, 1, 1, {testing::number_cell("D1", "1")}), std::invalid_argument);
  // spans leave a gap
  HeaderTree gap{Direction::Top, {testing::header("a", "B1", 1, 2)}};
  EXPECT_THROW(Table("x", 3, 3, 1, 1, {}, gap), std::invalid_argument);
  // children do not partition the parent
  HeaderTree bad{Direction::Top, {testing::header("a", "B1", 1, 3, {testing::header("b", "B2", 1, 2)})}};
  EXPECT_THROW(Table("x", 4, 3, 2, 1, {}, bad), std::invalid_argument);
  // anchor in the data region
  HeaderTree data_anchor{Direction::Top, {testing::header("a", "B2", 1, 3)}};
  EXPECT_THROW(Table("x", 3, 3, 1, 1, {}, data_anchor), std::invalid_argument);
}

TEST(Table, ReadingOrder) {
  EXPECT_TRUE(reading_order_less({5, 0}, {0, 1}));
  EXPECT_TRUE(reading_order_less({0, 1}, {1, 1}));
  EXPECT_FALSE(reading_order_less({1, 1}, {1, 1}));
}

}  // namespace
}  // namespace tabformula
