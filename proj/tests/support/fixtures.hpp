#pragma once

#include <string>
#include <vector>

#include "tabformula/table.hpp"

namespace tabformula::testing {

inline Cell text_cell(std::string a1, std::string text) {
  return Cell{parse_address(a1), CellValue::of_text(std::move(text)), std::nullopt, 0};
}

inline Cell number_cell(std::string a1, std::string number, int format = 0) {
  return Cell{parse_address(a1), CellValue::of_number(std::move(number)), std::nullopt, format};
}

inline Cell formula_cell(std::string a1, std::string number, std::string formula, int format = 0) {
  return Cell{parse_address(a1), CellValue::of_number(std::move(number)), std::move(formula), format};
}

inline HeaderNode header(std::string text, std::string a1, int begin, int end, std::vector<HeaderNode> children = {}) {
  return HeaderNode{std::move(text), parse_address(a1), begin, end, std::move(children)};
}

// Vegetable prices by year with a growth column:
//
//        A            B        C      D      E
//   1                          2016   2021   %Increase
//   2    Vegetables   Tomato   120    150    =(D2-C2)/C2
//   3                 Onion    80     96     =(D3-C3)/C3
//   4                 Potato   200    210    =(D4-C4)/C4
//   5    Fruits       Apple    50     60     =(D5-C5)/C5
//   6                 Pear     40     30     =(D6-C6)/C6
inline Table vegetables_table() {
  std::vector<Cell> cells = {
      text_cell("C1", "2016"), text_cell("D1", "2021"), text_cell("E1", "%Increase"),
      text_cell("A2", "Vegetables"), text_cell("B2", "Tomato"), text_cell("B3", "Onion"),
      text_cell("B4", "Potato"), text_cell("A5", "Fruits"), text_cell("B5", "Apple"), text_cell("B6", "Pear"),
      number_cell("C2", "120"), number_cell("D2", "150"), formula_cell("E2", "0.25", "=(D2-C2)/C2"),
      number_cell("C3", "80"), number_cell("D3", "96"), formula_cell("E3", "0.2", "=(D3-C3)/C3"),
      number_cell("C4", "200"), number_cell("D4", "210"), formula_cell("E4", "0.05", "=(D4-C4)/C4"),
      number_cell("C5", "50"), number_cell("D5", "60"), formula_cell("E5", "0.2", "=(D5-C5)/C5"),
      number_cell("C6", "40"), number_cell("D6", "30"), formula_cell("E6", "-0.25", "=(D6-C6)/C6"),
  };
  HeaderTree top{Direction::Top,
                 {header("2016", "C1", 2, 3), header("2021", "D1", 3, 4), header("%Increase", "E1", 4, 5)}};
  HeaderTree left{Direction::Left,
                  {header("Vegetables", "A2", 1, 4,
                          {header("Tomato", "B2", 1, 2), header("Onion", "B3", 2, 3), header("Potato", "B4", 3, 4)}),
                   header("Fruits", "A5", 4, 6, {header("Apple", "B5", 4, 5), header("Pear", "B6", 5, 6)})}};
  return Table("vegetables", 6, 5, 1, 2, std::move(cells), std::move(top), std::move(left));
}

// Population in millions with a change column; D4 holds the Belgium change.
//
//        A         B       C       D
//   1    Country   2019    2020    Change
//   2    Austria   8.88    8.92    =(C2-B2)/B2
//   3    Bulgaria  6.95    6.93    =(C3-B3)/B3
//   4    Belgium   11.49   11.56   =(C4-B4)/B4
//   5    Croatia   4.07    4.05    =(C5-B5)/B5
inline Table population_table() {
  std::vector<Cell> cells = {
      text_cell("A1", "Country"), text_cell("B1", "2019"), text_cell("C1", "2020"), text_cell("D1", "Change"),
      text_cell("A2", "Austria"), number_cell("B2", "8.88"), number_cell("C2", "8.92"),
      formula_cell("D2", "0.0045", "=(C2-B2)/B2"),
      text_cell("A3", "Bulgaria"), number_cell("B3", "6.95"), number_cell("C3", "6.93"),
      formula_cell("D3", "-0.0029", "=(C3-B3)/B3"),
      text_cell("A4", "Belgium"), number_cell("B4", "11.49", 1), number_cell("C4", "11.56", 1),
      formula_cell("D4", "0.0061", "=(C4-B4)/B4", 2),
      text_cell("A5", "Croatia"), number_cell("B5", "4.07"), number_cell("C5", "4.05"),
      formula_cell("D5", "-0.0049", "=(C5-B5)/B5"),
  };
  return Table("population", 5, 4, 1, 1, std::move(cells));
}

}  // namespace tabformula::testing
