#include "cdgkit/symkernel/symbols.hpp"

#include <stdexcept>
#include <string>

namespace cdg::sym {

namespace {
constexpr std::array<std::string_view, kSymbolCount> kNames = {
    "a0", "a1", "b1", "a2", "b2", "a3", "b3", "a4", "b4", "mu", "r", "lambda", "e", "rho"};
constexpr std::array<std::string_view, kSymbolCount> kLatex = {
    "a_0", "a_1", "b_1", "a_2", "b_2", "a_3", "b_3", "a_4", "b_4", "\\mu", "r", "\\lambda", "e", "\\rho"};
}  // namespace

std::string_view symbol_name(Symbol s) { return kNames[index_of(s)]; }

std::string_view symbol_latex(Symbol s) { return kLatex[index_of(s)]; }

std::optional<Symbol> symbol_from_name(std::string_view name) {
  for (Symbol s : kAllSymbols) {
    if (kNames[index_of(s)] == name) return s;
  }
  return std::nullopt;
}

Symbol ansatz_a(unsigned j) {
  switch (j) {
    case 1: return Symbol::a1;
    case 2: return Symbol::a2;
    case 3: return Symbol::a3;
    case 4: return Symbol::a4;
    default: throw std::out_of_range("ansatz index " + std::to_string(j) + " outside 1..4");
  }
}

Symbol ansatz_b(unsigned j) {
  switch (j) {
    case 1: return Symbol::b1;
    case 2: return Symbol::b2;
    case 3: return Symbol::b3;
    case 4: return Symbol::b4;
    default: throw std::out_of_range("ansatz index " + std::to_string(j) + " outside 1..4");
  }
}

}  // namespace cdg::sym
