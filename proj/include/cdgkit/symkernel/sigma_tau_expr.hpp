#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cdgkit/errors.hpp"
#include "cdgkit/symkernel/param_poly.hpp"

namespace cdg::sym {

/// One collected group: coefficient of sigma^sigma_power * tau^tau_power.
struct SigmaTauTerm {
  unsigned sigma_power = 0;
  unsigned tau_power = 0;
  ParamPoly coefficient;

  friend bool operator==(const SigmaTauTerm&, const SigmaTauTerm&) = default;
};

/// (P(sigma) + Q(sigma) tau) / r^k with ParamPoly coefficients.
///
/// Invariants: tau degree <= 1; no trailing zero coefficients in p or q;
/// k is minimal, i.e. r does not divide every coefficient when k > 0.
/// Products eliminate tau^2 with the first integral
///   tau^2 = T / r,  T = -e r^2 + 2 e mu r sigma - e (mu^2 + rho) sigma^2.
class SigmaTauExpr {
 public:
  SigmaTauExpr() = default;
  SigmaTauExpr(ParamPoly constant);  // NOLINT: parameters promote implicitly
  SigmaTauExpr(std::vector<ParamPoly> p, std::vector<ParamPoly> q, unsigned r_denom_power);

  static SigmaTauExpr sigma();
  static SigmaTauExpr tau();

  const std::vector<ParamPoly>& p_coeffs() const { return p_; }
  const std::vector<ParamPoly>& q_coeffs() const { return q_; }
  unsigned r_denom_power() const { return k_; }
  bool is_zero() const { return p_.empty() && q_.empty(); }

  SigmaTauExpr operator-() const;
  friend SigmaTauExpr operator+(const SigmaTauExpr& x, const SigmaTauExpr& y);
  friend SigmaTauExpr operator-(const SigmaTauExpr& x, const SigmaTauExpr& y);
  friend SigmaTauExpr operator*(const SigmaTauExpr& x, const SigmaTauExpr& y);
  friend bool operator==(const SigmaTauExpr& x, const SigmaTauExpr& y) {
    return x.k_ == y.k_ && x.p_ == y.p_ && x.q_ == y.q_;
  }

  /// Derivative along the Riccati flow sigma' = e sigma tau,
  /// tau' = e tau^2 - mu sigma + r, renormalized.
  SigmaTauExpr xi_derivative(bool reduce_involutions = false) const;

  /// Applies e^2 -> 1, rho^2 -> 1 to every coefficient.
  SigmaTauExpr reduce_involutions() const;
  SigmaTauExpr substitute(Symbol s, const ParamPoly& value) const;

  /// Cleared-denominator groups (expression times r^k), descending by
  /// (sigma_power, tau_power), zero groups omitted.
  std::vector<SigmaTauTerm> collect() const;

  template <class T>
  T evaluate(const T& sigma_val, const T& tau_val, const std::array<T, kSymbolCount>& params) const;

  std::string to_string() const;
  std::string to_latex() const;

 private:
  void normalize();

  std::vector<ParamPoly> p_;
  std::vector<ParamPoly> q_;
  unsigned k_ = 0;
};

/// Coefficients in sigma of T, where tau^2 = T / r.
const std::vector<ParamPoly>& tau_squared_numerator();

template <class T>
T SigmaTauExpr::evaluate(const T& sigma_val, const T& tau_val,
                         const std::array<T, kSymbolCount>& params) const {
  const T& r = params[index_of(Symbol::r)];
  if (k_ > 0 && r == T(0)) throw DivisionByZero("evaluation at r = 0 of an expression with 1/r^" + std::to_string(k_));
  auto horner = [&](const std::vector<ParamPoly>& coeffs) {
    T acc(0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * sigma_val + it->evaluate(params);
    return acc;
  };
  T value = horner(p_) + horner(q_) * tau_val;
  for (unsigned i = 0; i < k_; ++i) value /= r;
  return value;
}

/// Raw polynomial in sigma and tau (any tau degree) with ParamPoly
/// coefficients. Differentiation applies the Riccati chain rule without
/// eliminating tau^2; to_normal_form eliminates it once at the end.
class RiccatiPolynomial {
 public:
  using Key = std::pair<unsigned, unsigned>;  // (sigma power, tau power)

  RiccatiPolynomial() = default;
  RiccatiPolynomial(ParamPoly constant);  // NOLINT
  static RiccatiPolynomial sigma();
  static RiccatiPolynomial tau();

  const std::map<Key, ParamPoly>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  friend RiccatiPolynomial operator+(const RiccatiPolynomial& x, const RiccatiPolynomial& y);
  friend RiccatiPolynomial operator-(const RiccatiPolynomial& x, const RiccatiPolynomial& y);
  friend RiccatiPolynomial operator*(const RiccatiPolynomial& x, const RiccatiPolynomial& y);

  RiccatiPolynomial xi_derivative() const;
  SigmaTauExpr to_normal_form() const;

 private:
  void add(const Key& key, const ParamPoly& c);

  std::map<Key, ParamPoly> terms_;
};

}  // namespace cdg::sym
