#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace cdg::sym {

/// Closed symbol set. The declaration order is the variable order of the
/// graded-lexicographic monomial ordering used for rendering.
///
/// a2..b4 are the higher ansatz coefficients; they only appear when a
/// system is generated for m > 1.
enum class Symbol : std::uint8_t { a0, a1, b1, a2, b2, a3, b3, a4, b4, mu, r, lambda, e, rho };

inline constexpr std::size_t kSymbolCount = 14;
inline constexpr unsigned kMaxAnsatzOrder = 4;

inline constexpr std::array<Symbol, kSymbolCount> kAllSymbols = {
    Symbol::a0, Symbol::a1, Symbol::b1, Symbol::a2, Symbol::b2,     Symbol::a3, Symbol::b3,
    Symbol::a4, Symbol::b4, Symbol::mu, Symbol::r,  Symbol::lambda, Symbol::e,  Symbol::rho};

constexpr std::size_t index_of(Symbol s) { return static_cast<std::size_t>(s); }

std::string_view symbol_name(Symbol s);
std::string_view symbol_latex(Symbol s);
std::optional<Symbol> symbol_from_name(std::string_view name);

/// a_j for j in 1..kMaxAnsatzOrder.
Symbol ansatz_a(unsigned j);
/// b_j for j in 1..kMaxAnsatzOrder.
Symbol ansatz_b(unsigned j);

}  // namespace cdg::sym
