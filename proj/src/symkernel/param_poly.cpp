#include "cdgkit/symkernel/param_poly.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "cdgkit/errors.hpp"

namespace cdg::sym {

unsigned total_degree(const Exponents& x) {
  return std::accumulate(x.begin(), x.end(), 0U);
}

bool GrlexLess::operator()(const Exponents& a, const Exponents& b) const {
  const unsigned da = sym::total_degree(a);
  const unsigned db = sym::total_degree(b);
  if (da != db) return da < db;
  // Among equal degrees, a > b when the first differing exponent of a is larger.
  for (std::size_t i = 0; i < kSymbolCount; ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

ParamPoly::ParamPoly(GaussianRational constant) {
  if (!constant.is_zero()) terms_.emplace(Exponents{}, std::move(constant));
}

ParamPoly ParamPoly::symbol(Symbol s, unsigned power) {
  Exponents x{};
  x[index_of(s)] = static_cast<std::uint16_t>(power);
  return monomial(x, GaussianRational(1));
}

ParamPoly ParamPoly::monomial(const Exponents& exponents, GaussianRational coefficient) {
  ParamPoly p;
  if (!coefficient.is_zero()) p.terms_.emplace(exponents, std::move(coefficient));
  return p;
}

bool ParamPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && sym::total_degree(terms_.begin()->first) == 0);
}

GaussianRational ParamPoly::constant_value() const {
  if (!is_constant()) throw std::logic_error("constant_value of non-constant polynomial " + to_string());
  return terms_.empty() ? GaussianRational() : terms_.begin()->second;
}

unsigned ParamPoly::degree(Symbol s) const {
  unsigned d = 0;
  for (const auto& [x, c] : terms_) d = std::max<unsigned>(d, x[index_of(s)]);
  return d;
}

unsigned ParamPoly::total_degree() const {
  return terms_.empty() ? 0 : sym::total_degree(terms_.rbegin()->first);
}

std::vector<Symbol> ParamPoly::symbols() const {
  std::vector<Symbol> out;
  for (Symbol s : kAllSymbols) {
    if (depends_on(s)) out.push_back(s);
  }
  return out;
}

unsigned ParamPoly::content_power(Symbol s) const {
  if (terms_.empty()) return 0;
  unsigned k = ~0U;
  for (const auto& [x, c] : terms_) k = std::min<unsigned>(k, x[index_of(s)]);
  return k;
}

ParamPoly ParamPoly::divide_by_power(Symbol s, unsigned k) const {
  if (k == 0) return *this;
  ParamPoly out;
  for (const auto& [x, c] : terms_) {
    if (x[index_of(s)] < k) {
      throw std::logic_error("divide_by_power: " + std::string(symbol_name(s)) + "^" +
                             std::to_string(k) + " does not divide " + to_string());
    }
    Exponents y = x;
    y[index_of(s)] = static_cast<std::uint16_t>(y[index_of(s)] - k);
    out.terms_.emplace(y, c);
  }
  return out;
}

std::vector<ParamPoly> ParamPoly::coefficients_in(Symbol s) const {
  std::vector<ParamPoly> out(degree(s) + 1);
  for (const auto& [x, c] : terms_) {
    Exponents y = x;
    const unsigned k = y[index_of(s)];
    y[index_of(s)] = 0;
    out[k].add_term(y, c);
  }
  return out;
}

const GaussianRational& ParamPoly::leading_coefficient() const {
  if (terms_.empty()) throw std::logic_error("leading_coefficient of zero polynomial");
  return terms_.rbegin()->second;
}

void ParamPoly::add_term(const Exponents& x, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(x, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly out = *this;
  for (auto& [x, c] : out.terms_) c = -c;
  return out;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& o) {
  for (const auto& [x, c] : o.terms_) add_term(x, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& o) {
  for (const auto& [x, c] : o.terms_) add_term(x, -c);
  return *this;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly out;
  for (const auto& [xa, ca] : a.terms_) {
    for (const auto& [xb, cb] : b.terms_) {
      Exponents x;
      for (std::size_t i = 0; i < kSymbolCount; ++i) x[i] = static_cast<std::uint16_t>(xa[i] + xb[i]);
      out.add_term(x, ca * cb);
    }
  }
  return out;
}

ParamPoly& ParamPoly::operator*=(const ParamPoly& o) {
  *this = *this * o;
  return *this;
}

ParamPoly& ParamPoly::operator*=(const GaussianRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [x, v] : terms_) v *= c;
  return *this;
}

ParamPoly ParamPoly::reduce_involutions() const {
  ParamPoly out;
  for (const auto& [x, c] : terms_) {
    Exponents y = x;
    y[index_of(Symbol::e)] %= 2;
    y[index_of(Symbol::rho)] %= 2;
    out.add_term(y, c);
  }
  return out;
}

ParamPoly ParamPoly::substitute(Symbol s, const ParamPoly& value) const {
  const unsigned d = degree(s);
  if (d == 0) return *this;
  std::vector<ParamPoly> powers{ParamPoly(1)};
  for (unsigned k = 1; k <= d; ++k) powers.push_back(powers.back() * value);
  ParamPoly out;
  for (const auto& [x, c] : terms_) {
    Exponents y = x;
    const unsigned k = y[index_of(s)];
    y[index_of(s)] = 0;
    out += monomial(y, c) * powers[k];
  }
  return out;
}

std::pair<ParamPoly, ParamPoly> ParamPoly::divmod(const ParamPoly& divisor, Symbol var) const {
  const unsigned dd = divisor.degree(var);
  const ParamPoly lead = divisor.coefficients_in(var).back();
  if (!lead.is_constant() || lead.is_zero()) {
    throw std::logic_error("divmod: leading coefficient of divisor in " + std::string(symbol_name(var)) +
                           " is not a nonzero constant");
  }
  const GaussianRational lead_inv = lead.constant_value().inverse();
  ParamPoly quotient;
  ParamPoly remainder = *this;
  while (!remainder.is_zero() && remainder.degree(var) >= dd) {
    const unsigned k = remainder.degree(var);
    ParamPoly top = remainder.coefficients_in(var)[k];
    ParamPoly step = top * lead_inv * symbol(var, k - dd);
    quotient += step;
    remainder -= step * divisor;
  }
  return {quotient, remainder};
}

std::pair<GaussianRational, ParamPoly> ParamPoly::primitive() const {
  if (terms_.empty()) return {GaussianRational(1), ParamPoly()};
  Integer den_lcm = 1;
  for (const auto& [x, c] : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.re().get_den_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.im().get_den_mpz_t());
  }
  Integer num_gcd = 0;
  for (const auto& [x, c] : terms_) {
    Rational re = c.re() * den_lcm;
    Rational im = c.im() * den_lcm;
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), re.get_num_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), im.get_num_mpz_t());
  }
  Rational scale_mag(num_gcd, den_lcm);
  scale_mag.canonicalize();
  const GaussianRational& lead = leading_coefficient();
  GaussianRational scale(scale_mag);
  if (sgn(lead.re()) < 0 || (sgn(lead.re()) == 0 && sgn(lead.im()) < 0)) scale = -scale;
  ParamPoly out = *this;
  out *= scale.inverse();
  return {scale, out};
}

ParamPoly pow(const ParamPoly& base, unsigned exponent) {
  ParamPoly result(1);
  ParamPoly b = base;
  while (exponent > 0) {
    if (exponent & 1U) result *= b;
    exponent >>= 1U;
    if (exponent > 0) b *= b;
  }
  return result;
}

namespace {

std::string monomial_text(const Exponents& x, bool latex) {
  std::string out;
  for (Symbol s : kAllSymbols) {
    const unsigned k = x[index_of(s)];
    if (k == 0) continue;
    if (!out.empty()) out += latex ? " " : "*";
    out += latex ? symbol_latex(s) : symbol_name(s);
    if (k > 1) out += latex ? "^{" + std::to_string(k) + "}" : "^" + std::to_string(k);
  }
  return out;
}

// Splits a coefficient into a sign and a magnitude string so terms can be
// joined with " + " / " - ".
std::pair<bool, std::string> signed_coefficient(const GaussianRational& c, bool latex) {
  if (c.is_real()) {
    const bool negative = sgn(c.re()) < 0;
    GaussianRational mag(abs(c.re()));
    return {negative, latex ? mag.to_latex() : mag.to_string()};
  }
  if (sgn(c.re()) == 0) {
    const bool negative = sgn(c.im()) < 0;
    GaussianRational mag(Rational(0), abs(c.im()));
    return {negative, latex ? mag.to_latex() : mag.to_string()};
  }
  return {false, latex ? c.to_latex() : "(" + c.to_string() + ")"};
}

std::string render(const ParamPoly::TermMap& terms, bool latex) {
  if (terms.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
    const auto& [x, c] = *it;
    auto [negative, mag] = signed_coefficient(c, latex);
    const std::string mono = monomial_text(x, latex);
    std::string body;
    if (mono.empty()) {
      body = mag;
    } else if (mag == "1") {
      body = mono;
    } else {
      body = mag + (latex ? " " : "*") + mono;
    }
    if (first) {
      out += (negative ? "-" : "") + body;
      first = false;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
  }
  return out;
}

}  // namespace

std::string ParamPoly::to_string() const { return render(terms_, false); }

std::string ParamPoly::to_latex() const { return render(terms_, true); }

}  // namespace cdg::sym
