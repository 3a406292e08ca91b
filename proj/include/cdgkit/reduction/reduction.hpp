#pragma once

#include <string>
#include <vector>

#include "cdgkit/symkernel/gaussian_rational.hpp"
#include "cdgkit/symkernel/param_poly.hpp"
#include "cdgkit/symkernel/sigma_tau_expr.hpp"

namespace cdg::red {

using sym::ParamPoly;
using sym::Rational;
using sym::SigmaTauExpr;

/// u_t + omega u_xxxxx + alpha u u_xxx + beta u_x u_xx + gamma u^2 u_x = 0.
struct KdV5Params {
  Rational omega{1};
  Rational alpha{0};
  Rational beta{0};
  Rational gamma{0};

  static KdV5Params cdg();
  /// Throws DomainError when omega == 0.
  void validate() const;

  friend bool operator==(const KdV5Params&, const KdV5Params&) = default;
};

/// coefficient * prod_i V^(orders[i]); orders sorted ascending, each <= 5.
struct DiffTerm {
  std::vector<unsigned> orders;
  ParamPoly coefficient;
};

/// Text rendering of the V-product of a term, without its coefficient,
/// e.g. "V^2*V'".
std::string render_factors(const DiffTerm& term, bool latex = false);

/// Polynomial in V, V', ..., V^(5). Terms keep insertion order; terms with
/// equal order multisets are merged and zero terms dropped.
class DiffPoly {
 public:
  void add_term(std::vector<unsigned> orders, const ParamPoly& coefficient);

  const std::vector<DiffTerm>& terms() const { return terms_; }
  unsigned max_order() const;

  /// e.g. "V^(5) + 30*V*V''' + 30*V'*V'' + 180*V^2*V' + lambda*V'".
  std::string to_string() const;
  std::string to_latex() const;

 private:
  std::vector<DiffTerm> terms_;
};

/// Traveling-wave reduction u(x,t) = V(xi), xi = x + lambda t.
DiffPoly reduce_to_ode(const KdV5Params& p);

/// v = a0 + sum_{j=1}^m sigma^(j-1) (a_j sigma + b_j tau). Coefficients
/// default to the kernel symbols and may be fixed to other polynomials.
struct Ansatz {
  unsigned m = 1;
  ParamPoly a0;
  std::vector<ParamPoly> a;
  std::vector<ParamPoly> b;

  /// Symbolic ansatz of order m, 1 <= m <= kMaxAnsatzOrder.
  static Ansatz symbolic(unsigned m);
};

enum class DerivativeRoute {
  /// Repeated xi_derivative of the normal form (tau^2 eliminated each step).
  normal_form,
  /// Raw chain rule on sigma/tau polynomials, tau^2 eliminated once at the end.
  deferred,
};

SigmaTauExpr substitute_ansatz(const DiffPoly& ode, const Ansatz& ansatz,
                               DerivativeRoute route = DerivativeRoute::normal_form);

}  // namespace cdg::red
