#include "cdgkit/reduction/reduction.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "cdgkit/errors.hpp"

namespace cdg::red {

using sym::GaussianRational;
using sym::RiccatiPolynomial;
using sym::Symbol;

KdV5Params KdV5Params::cdg() { return {Rational(1), Rational(30), Rational(30), Rational(180)}; }

void KdV5Params::validate() const {
  if (sgn(omega) == 0) throw DomainError("omega must be nonzero: the fifth-order term defines the family");
}

void DiffPoly::add_term(std::vector<unsigned> orders, const ParamPoly& coefficient) {
  std::sort(orders.begin(), orders.end());
  for (unsigned k : orders) {
    if (k > 5) throw std::invalid_argument("derivative order above 5");
  }
  auto it = std::find_if(terms_.begin(), terms_.end(), [&](const DiffTerm& t) { return t.orders == orders; });
  if (it == terms_.end()) {
    if (!coefficient.is_zero()) terms_.push_back({std::move(orders), coefficient});
    return;
  }
  it->coefficient += coefficient;
  if (it->coefficient.is_zero()) terms_.erase(it);
}

unsigned DiffPoly::max_order() const {
  unsigned k = 0;
  for (const auto& t : terms_) k = std::max(k, t.orders.back());
  return k;
}

namespace {

std::string factor_text(unsigned order, unsigned power, bool latex) {
  std::string base;
  if (latex) {
    base = order == 0 ? "V" : order <= 3 ? "V" + std::string(order, '\'') : "V^{(" + std::to_string(order) + ")}";
    if (power == 1) return base;
    if (order >= 1) base = "(" + base + ")";
    return base + "^{" + std::to_string(power) + "}";
  }
  base = order == 0 ? "V" : order <= 3 ? "V" + std::string(order, '\'') : "V^(" + std::to_string(order) + ")";
  return power == 1 ? base : base + "^" + std::to_string(power);
}

}  // namespace

std::string render_factors(const DiffTerm& term, bool latex) {
  std::map<unsigned, unsigned> powers;
  for (unsigned k : term.orders) ++powers[k];
  std::string product;
  for (const auto& [order, power] : powers) {
    if (!product.empty()) product += latex ? " " : "*";
    product += factor_text(order, power, latex);
  }
  return product;
}

namespace {

std::string render(const std::vector<DiffTerm>& terms, bool latex) {
  if (terms.empty()) return "0";
  std::string out;
  for (const auto& t : terms) {
    const std::string product = render_factors(t, latex);
    std::string coeff = latex ? t.coefficient.to_latex() : t.coefficient.to_string();
    bool negative = false;
    if (t.coefficient.size() == 1 && coeff.front() == '-') {
      negative = true;
      coeff.erase(0, 1);
    } else if (t.coefficient.size() > 1) {
      coeff = "(" + coeff + ")";
    }
    std::string body = coeff == "1" ? product : coeff + (latex ? " " : "*") + product;
    if (out.empty()) {
      out = (negative ? "-" : "") + body;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
  }
  return out;
}

}  // namespace

std::string DiffPoly::to_string() const { return render(terms_, false); }

std::string DiffPoly::to_latex() const { return render(terms_, true); }

DiffPoly reduce_to_ode(const KdV5Params& p) {
  p.validate();
  DiffPoly ode;
  ode.add_term({5}, ParamPoly(GaussianRational(p.omega)));
  ode.add_term({0, 3}, ParamPoly(GaussianRational(p.alpha)));
  ode.add_term({1, 2}, ParamPoly(GaussianRational(p.beta)));
  ode.add_term({0, 0, 1}, ParamPoly(GaussianRational(p.gamma)));
  // u_t = lambda V' under xi = x + lambda t.
  ode.add_term({1}, ParamPoly::symbol(Symbol::lambda));
  return ode;
}

Ansatz Ansatz::symbolic(unsigned m) {
  if (m < 1 || m > sym::kMaxAnsatzOrder) {
    throw std::out_of_range("ansatz order " + std::to_string(m) + " outside 1.." +
                            std::to_string(sym::kMaxAnsatzOrder));
  }
  Ansatz out;
  out.m = m;
  out.a0 = ParamPoly::symbol(Symbol::a0);
  for (unsigned j = 1; j <= m; ++j) {
    out.a.push_back(ParamPoly::symbol(sym::ansatz_a(j)));
    out.b.push_back(ParamPoly::symbol(sym::ansatz_b(j)));
  }
  return out;
}

namespace {

template <class Expr>
Expr build_ansatz(const Ansatz& a) {
  if (a.a.size() != a.m || a.b.size() != a.m) throw std::invalid_argument("ansatz coefficient lists must have length m");
  Expr v(a.a0);
  Expr sigma_power(ParamPoly(1));
  for (unsigned j = 0; j < a.m; ++j) {
    v = v + sigma_power * (Expr(a.a[j]) * Expr::sigma() + Expr(a.b[j]) * Expr::tau());
    sigma_power = sigma_power * Expr::sigma();
  }
  return v;
}

template <class Expr, class Derive>
Expr substitute(const DiffPoly& ode, const Ansatz& a, Derive derive) {
  std::vector<Expr> d{build_ansatz<Expr>(a)};
  for (unsigned k = 1; k <= ode.max_order(); ++k) d.push_back(derive(d.back()));
  Expr total;
  for (const auto& t : ode.terms()) {
    Expr product(t.coefficient);
    for (unsigned k : t.orders) product = product * d[k];
    total = total + product;
  }
  return total;
}

}  // namespace

SigmaTauExpr substitute_ansatz(const DiffPoly& ode, const Ansatz& ansatz, DerivativeRoute route) {
  if (ansatz.m < 1) throw std::invalid_argument("ansatz order must be at least 1");
  if (route == DerivativeRoute::normal_form) {
    return substitute<SigmaTauExpr>(ode, ansatz, [](const SigmaTauExpr& x) { return x.xi_derivative(false); });
  }
  return substitute<RiccatiPolynomial>(ode, ansatz, [](const RiccatiPolynomial& x) { return x.xi_derivative(); })
      .to_normal_form();
}

}  // namespace cdg::red
