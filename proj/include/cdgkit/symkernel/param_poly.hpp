#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cdgkit/symkernel/gaussian_rational.hpp"
#include "cdgkit/symkernel/symbols.hpp"

namespace cdg::sym {

using Exponents = std::array<std::uint16_t, kSymbolCount>;

unsigned total_degree(const Exponents& x);

/// Graded lexicographic order over the declared symbol order: higher total
/// degree is greater; ties broken by the first differing exponent.
struct GrlexLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Exact multivariate polynomial over Q(i) in the closed symbol set.
/// Invariant: no zero coefficient is stored.
class ParamPoly {
 public:
  using TermMap = std::map<Exponents, GaussianRational, GrlexLess>;

  ParamPoly() = default;
  ParamPoly(GaussianRational constant);  // NOLINT: constants promote implicitly
  ParamPoly(long constant) : ParamPoly(GaussianRational(constant)) {}  // NOLINT

  static ParamPoly symbol(Symbol s, unsigned power = 1);
  static ParamPoly monomial(const Exponents& exponents, GaussianRational coefficient);

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (zero for the zero polynomial).
  GaussianRational constant_value() const;

  unsigned degree(Symbol s) const;
  unsigned total_degree() const;
  bool depends_on(Symbol s) const { return degree(s) > 0; }
  std::vector<Symbol> symbols() const;
  /// Largest k such that s^k divides every term (0 for the zero polynomial).
  unsigned content_power(Symbol s) const;
  ParamPoly divide_by_power(Symbol s, unsigned k) const;
  /// Coefficients c_k (free of s) with *this = sum_k c_k s^k.
  std::vector<ParamPoly> coefficients_in(Symbol s) const;
  /// Coefficient of the grlex-largest monomial.
  const GaussianRational& leading_coefficient() const;

  ParamPoly operator-() const;
  ParamPoly& operator+=(const ParamPoly& o);
  ParamPoly& operator-=(const ParamPoly& o);
  ParamPoly& operator*=(const ParamPoly& o);
  ParamPoly& operator*=(const GaussianRational& c);

  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  friend ParamPoly operator*(ParamPoly a, const GaussianRational& c) { return a *= c; }
  friend ParamPoly operator*(const GaussianRational& c, ParamPoly a) { return a *= c; }
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return a.terms_ == b.terms_; }

  /// Rewrites e^2 -> 1 and rho^2 -> 1 (both are +-1).
  ParamPoly reduce_involutions() const;
  ParamPoly substitute(Symbol s, const ParamPoly& value) const;

  /// Division by a divisor whose leading coefficient in `var` is a nonzero
  /// constant. Returns {quotient, remainder} with deg_var(remainder) <
  /// deg_var(divisor).
  std::pair<ParamPoly, ParamPoly> divmod(const ParamPoly& divisor, Symbol var) const;

  /// Scales to integer coefficients with unit content, leading coefficient
  /// real-positive (or, if purely imaginary, positive imaginary part).
  /// Returns {scale, primitive} with *this == scale * primitive.
  std::pair<GaussianRational, ParamPoly> primitive() const;

  template <class T>
  T evaluate(const std::array<T, kSymbolCount>& values) const;

  /// Deterministic text form, terms in descending grlex order, e.g.
  /// "180*a0^2*a1*e - 30*a0*a1*r + lambda*a1*e". Parseable by parse_param_poly.
  std::string to_string() const;
  std::string to_latex() const;

 private:
  void add_term(const Exponents& x, const GaussianRational& c);

  TermMap terms_;
};

ParamPoly pow(const ParamPoly& base, unsigned exponent);

template <class T>
T ParamPoly::evaluate(const std::array<T, kSymbolCount>& values) const {
  T total(0);
  for (const auto& [x, c] : terms_) {
    T term = coefficient_as<T>(c);
    for (std::size_t i = 0; i < kSymbolCount; ++i) {
      for (unsigned k = 0; k < x[i]; ++k) term *= values[i];
    }
    total += term;
  }
  return total;
}

}  // namespace cdg::sym
