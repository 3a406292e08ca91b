#include "cdgkit/symkernel/sigma_tau_expr.hpp"

#include <algorithm>

namespace cdg::sym {

namespace {

using SigmaPoly = std::vector<ParamPoly>;

void trim(SigmaPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

SigmaPoly add(const SigmaPoly& a, const SigmaPoly& b) {
  SigmaPoly out(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += b[i];
  trim(out);
  return out;
}

SigmaPoly mul(const SigmaPoly& a, const SigmaPoly& b) {
  if (a.empty() || b.empty()) return {};
  SigmaPoly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

SigmaPoly scale(SigmaPoly a, const ParamPoly& c) {
  for (auto& x : a) x *= c;
  trim(a);
  return a;
}

SigmaPoly shift(const SigmaPoly& a) {
  if (a.empty()) return {};
  SigmaPoly out;
  out.reserve(a.size() + 1);
  out.emplace_back();
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

SigmaPoly derivative(const SigmaPoly& a) {
  SigmaPoly out;
  for (std::size_t i = 1; i < a.size(); ++i) out.push_back(a[i] * GaussianRational(static_cast<long>(i)));
  trim(out);
  return out;
}

const ParamPoly& sym_e() {
  static const ParamPoly e = ParamPoly::symbol(Symbol::e);
  return e;
}

const ParamPoly& sym_r() {
  static const ParamPoly r = ParamPoly::symbol(Symbol::r);
  return r;
}

std::string join_groups(const std::vector<SigmaTauTerm>& groups, unsigned k, bool latex) {
  if (groups.empty()) return "0";
  std::string body;
  for (const auto& g : groups) {
    if (!body.empty()) body += " + ";
    body += "(" + (latex ? g.coefficient.to_latex() : g.coefficient.to_string()) + ")";
    if (g.sigma_power > 0) {
      body += latex ? " \\sigma" : "*sigma";
      if (g.sigma_power > 1) {
        body += latex ? "^{" + std::to_string(g.sigma_power) + "}" : "^" + std::to_string(g.sigma_power);
      }
    }
    if (g.tau_power > 0) body += latex ? " \\tau" : "*tau";
  }
  if (k == 0) return body;
  if (latex) return "\\frac{" + body + "}{r^{" + std::to_string(k) + "}}";
  return "(" + body + ")/r" + (k > 1 ? "^" + std::to_string(k) : "");
}

}  // namespace

const std::vector<ParamPoly>& tau_squared_numerator() {
  static const std::vector<ParamPoly> t = [] {
    const ParamPoly e = ParamPoly::symbol(Symbol::e);
    const ParamPoly r = ParamPoly::symbol(Symbol::r);
    const ParamPoly mu = ParamPoly::symbol(Symbol::mu);
    const ParamPoly rho = ParamPoly::symbol(Symbol::rho);
    return std::vector<ParamPoly>{-(e * r * r), GaussianRational(2) * e * mu * r, -(e * (mu * mu + rho))};
  }();
  return t;
}

SigmaTauExpr::SigmaTauExpr(ParamPoly constant) {
  if (!constant.is_zero()) p_.push_back(std::move(constant));
}

SigmaTauExpr::SigmaTauExpr(std::vector<ParamPoly> p, std::vector<ParamPoly> q, unsigned r_denom_power)
    : p_(std::move(p)), q_(std::move(q)), k_(r_denom_power) {
  normalize();
}

SigmaTauExpr SigmaTauExpr::sigma() { return SigmaTauExpr({ParamPoly(), ParamPoly(1)}, {}, 0); }

SigmaTauExpr SigmaTauExpr::tau() { return SigmaTauExpr({}, {ParamPoly(1)}, 0); }

void SigmaTauExpr::normalize() {
  trim(p_);
  trim(q_);
  if (p_.empty() && q_.empty()) {
    k_ = 0;
    return;
  }
  unsigned common = k_;
  for (const auto* coeffs : {&p_, &q_}) {
    for (const auto& c : *coeffs) {
      if (!c.is_zero()) common = std::min(common, c.content_power(Symbol::r));
    }
  }
  if (common == 0) return;
  for (auto* coeffs : {&p_, &q_}) {
    for (auto& c : *coeffs) c = c.divide_by_power(Symbol::r, common);
  }
  k_ -= common;
}

SigmaTauExpr SigmaTauExpr::operator-() const {
  SigmaTauExpr out = *this;
  for (auto& c : out.p_) c = -c;
  for (auto& c : out.q_) c = -c;
  return out;
}

SigmaTauExpr operator+(const SigmaTauExpr& x, const SigmaTauExpr& y) {
  // Bring both to the larger denominator r^k.
  const unsigned k = std::max(x.k_, y.k_);
  const ParamPoly rx = ParamPoly::symbol(Symbol::r, k - x.k_);
  const ParamPoly ry = ParamPoly::symbol(Symbol::r, k - y.k_);
  return SigmaTauExpr(add(scale(x.p_, rx), scale(y.p_, ry)), add(scale(x.q_, rx), scale(y.q_, ry)), k);
}

SigmaTauExpr operator-(const SigmaTauExpr& x, const SigmaTauExpr& y) { return x + (-y); }

SigmaTauExpr operator*(const SigmaTauExpr& x, const SigmaTauExpr& y) {
  SigmaPoly pp = mul(x.p_, y.p_);
  SigmaPoly pq = add(mul(x.p_, y.q_), mul(x.q_, y.p_));
  SigmaPoly qq = mul(x.q_, y.q_);
  if (qq.empty()) return SigmaTauExpr(std::move(pp), std::move(pq), x.k_ + y.k_);
  // Q1 Q2 tau^2 = Q1 Q2 T / r: one extra power of r in the denominator.
  SigmaPoly p = add(scale(pp, sym_r()), mul(qq, tau_squared_numerator()));
  return SigmaTauExpr(std::move(p), scale(pq, sym_r()), x.k_ + y.k_ + 1);
}

SigmaTauExpr SigmaTauExpr::xi_derivative(bool reduce_involutions) const {
  // d/dxi (P + Q tau) = e sigma P' tau + e (sigma Q' + Q) tau^2 + Q (r - mu sigma).
  const SigmaPoly tau_part = scale(shift(derivative(p_)), sym_e());
  const SigmaPoly tau2_part = scale(add(shift(derivative(q_)), q_), sym_e());
  const SigmaPoly flat_part =
      add(scale(q_, sym_r()), scale(shift(q_), -ParamPoly::symbol(Symbol::mu)));
  SigmaPoly p = add(scale(flat_part, sym_r()), mul(tau2_part, tau_squared_numerator()));
  SigmaTauExpr out(std::move(p), scale(tau_part, sym_r()), k_ + 1);
  return reduce_involutions ? out.reduce_involutions() : out;
}

SigmaTauExpr SigmaTauExpr::reduce_involutions() const {
  SigmaPoly p = p_;
  SigmaPoly q = q_;
  for (auto& c : p) c = c.reduce_involutions();
  for (auto& c : q) c = c.reduce_involutions();
  return SigmaTauExpr(std::move(p), std::move(q), k_);
}

SigmaTauExpr SigmaTauExpr::substitute(Symbol s, const ParamPoly& value) const {
  SigmaPoly p = p_;
  SigmaPoly q = q_;
  for (auto& c : p) c = c.substitute(s, value);
  for (auto& c : q) c = c.substitute(s, value);
  return SigmaTauExpr(std::move(p), std::move(q), k_);
}

std::vector<SigmaTauTerm> SigmaTauExpr::collect() const {
  std::vector<SigmaTauTerm> out;
  const std::size_t n = std::max(p_.size(), q_.size());
  for (std::size_t i = n; i-- > 0;) {
    if (i < q_.size() && !q_[i].is_zero()) out.push_back({static_cast<unsigned>(i), 1, q_[i]});
    if (i < p_.size() && !p_[i].is_zero()) out.push_back({static_cast<unsigned>(i), 0, p_[i]});
  }
  return out;
}

std::string SigmaTauExpr::to_string() const { return join_groups(collect(), k_, false); }

std::string SigmaTauExpr::to_latex() const { return join_groups(collect(), k_, true); }

RiccatiPolynomial::RiccatiPolynomial(ParamPoly constant) { add({0, 0}, constant); }

RiccatiPolynomial RiccatiPolynomial::sigma() {
  RiccatiPolynomial out;
  out.add({1, 0}, ParamPoly(1));
  return out;
}

RiccatiPolynomial RiccatiPolynomial::tau() {
  RiccatiPolynomial out;
  out.add({0, 1}, ParamPoly(1));
  return out;
}

void RiccatiPolynomial::add(const Key& key, const ParamPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

RiccatiPolynomial operator+(const RiccatiPolynomial& x, const RiccatiPolynomial& y) {
  RiccatiPolynomial out = x;
  for (const auto& [k, c] : y.terms_) out.add(k, c);
  return out;
}

RiccatiPolynomial operator-(const RiccatiPolynomial& x, const RiccatiPolynomial& y) {
  RiccatiPolynomial out = x;
  for (const auto& [k, c] : y.terms_) out.add(k, -c);
  return out;
}

RiccatiPolynomial operator*(const RiccatiPolynomial& x, const RiccatiPolynomial& y) {
  RiccatiPolynomial out;
  for (const auto& [kx, cx] : x.terms_) {
    for (const auto& [ky, cy] : y.terms_) out.add({kx.first + ky.first, kx.second + ky.second}, cx * cy);
  }
  return out;
}

RiccatiPolynomial RiccatiPolynomial::xi_derivative() const {
  const ParamPoly e = ParamPoly::symbol(Symbol::e);
  const ParamPoly mu = ParamPoly::symbol(Symbol::mu);
  const ParamPoly r = ParamPoly::symbol(Symbol::r);
  RiccatiPolynomial out;
  for (const auto& [key, c] : terms_) {
    const auto [i, j] = key;
    if (i > 0) out.add({i, j + 1}, c * e * GaussianRational(static_cast<long>(i)));
    if (j > 0) {
      const ParamPoly jc = c * GaussianRational(static_cast<long>(j));
      out.add({i, j + 1}, jc * e);
      out.add({i + 1, j - 1}, -(jc * mu));
      out.add({i, j - 1}, jc * r);
    }
  }
  return out;
}

SigmaTauExpr RiccatiPolynomial::to_normal_form() const {
  const SigmaTauExpr tau2(tau_squared_numerator(), {}, 1);
  std::vector<SigmaTauExpr> tau2_powers{SigmaTauExpr(ParamPoly(1))};
  SigmaTauExpr total;
  for (const auto& [key, c] : terms_) {
    const auto [i, j] = key;
    while (tau2_powers.size() <= j / 2) tau2_powers.push_back(tau2_powers.back() * tau2);
    SigmaPoly mono(i + 1);
    mono[i] = c;
    SigmaTauExpr term = (j % 2 == 0) ? SigmaTauExpr(mono, {}, 0) : SigmaTauExpr({}, mono, 0);
    total = total + term * tau2_powers[j / 2];
  }
  return total;
}

}  // namespace cdg::sym
