#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "cdgkit/errors.hpp"
#include "cdgkit/symkernel/parse.hpp"
#include "cdgkit/symkernel/sigma_tau_expr.hpp"

using namespace cdg;
using namespace cdg::sym;

namespace {

ParamPoly S(Symbol s, unsigned k = 1) { return ParamPoly::symbol(s, k); }
ParamPoly Q(long p, long q = 1) { return ParamPoly(GaussianRational(make_rational(p, q))); }

ParamPoly random_poly(std::mt19937_64& rng, int terms = 4) {
  static const Symbol pool[] = {Symbol::a0, Symbol::a1, Symbol::b1, Symbol::mu, Symbol::r, Symbol::lambda, Symbol::e};
  std::uniform_int_distribution<int> coef(-9, 9), pick(0, 6), deg(0, 2);
  ParamPoly out;
  for (int t = 0; t < terms; ++t) {
    ParamPoly m = Q(coef(rng), 1 + std::abs(coef(rng)));
    for (int j = 0; j < 2; ++j) m *= S(pool[pick(rng)], static_cast<unsigned>(deg(rng)));
    out += m;
  }
  return out;
}

SigmaTauExpr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> choice(0, depth > 0 ? 5 : 2);
  switch (choice(rng)) {
    case 0: return SigmaTauExpr::sigma();
    case 1: return SigmaTauExpr::tau();
    case 2: return SigmaTauExpr(random_poly(rng, 2));
    case 3: return random_expr(rng, depth - 1) + random_expr(rng, depth - 1);
    default: return random_expr(rng, depth - 1) * random_expr(rng, depth - 1);
  }
}

// Raw (unreduced) counterpart of random_expr, built from the same draws.
struct PairExpr {
  SigmaTauExpr normal;
  RiccatiPolynomial raw;
};

PairExpr random_pair(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> choice(0, depth > 0 ? 5 : 2);
  switch (choice(rng)) {
    case 0: return {SigmaTauExpr::sigma(), RiccatiPolynomial::sigma()};
    case 1: return {SigmaTauExpr::tau(), RiccatiPolynomial::tau()};
    case 2: {
      ParamPoly c = random_poly(rng, 2);
      return {SigmaTauExpr(c), RiccatiPolynomial(c)};
    }
    case 3: {
      PairExpr a = random_pair(rng, depth - 1), b = random_pair(rng, depth - 1);
      return {a.normal + b.normal, a.raw + b.raw};
    }
    default: {
      PairExpr a = random_pair(rng, depth - 1), b = random_pair(rng, depth - 1);
      return {a.normal * b.normal, a.raw * b.raw};
    }
  }
}

using Params = std::array<double, kSymbolCount>;

// Case III trajectory (e = -1, rho = -1, r > 0).
std::pair<double, double> case3(double mu, double r, double xi) {
  const double s = std::sqrt(r);
  const double den = 1.0 + mu / std::cosh(s * xi);
  return {r / std::cosh(s * xi) / den, s * std::tanh(s * xi) / den};
}

double eval_raw(const RiccatiPolynomial& p, double sigma, double tau, const Params& v) {
  double total = 0.0;
  for (const auto& [key, c] : p.terms()) total += c.evaluate(v) * std::pow(sigma, key.first) * std::pow(tau, key.second);
  return total;
}

}  // namespace

TEST_CASE("rationals stay canonical") {
  Rational q = make_rational(6, -4);
  CHECK(q.get_num() == -3);
  CHECK(q.get_den() == 2);
  CHECK(parse_rational(" -10/4 ") == make_rational(-5, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), DivisionByZero);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
}

TEST_CASE("gaussian rationals form a field") {
  GaussianRational z(make_rational(1, 2), make_rational(-3));
  CHECK(z.conj().conj() == z);
  CHECK((z * z.inverse()).is_one());
  CHECK(GaussianRational::i() * GaussianRational::i() == GaussianRational(-1));
  CHECK(z.to_string() == "1/2 - 3*i");
  CHECK(GaussianRational(Rational(0), Rational(-1)).to_string() == "-i");
  CHECK(pow(GaussianRational::i(), 4).is_one());
  CHECK_THROWS_AS(GaussianRational().inverse(), DivisionByZero);
}

TEST_CASE("param poly ring axioms on random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    ParamPoly a = random_poly(rng), b = random_poly(rng), c = random_poly(rng);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
    const ParamPoly ab = a * b;
    for (const auto& [x, coeff] : ab.terms()) CHECK(!coeff.is_zero());
  }
}

TEST_CASE("param poly text round-trips through the parser") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    ParamPoly a = random_poly(rng) * ParamPoly(GaussianRational(make_rational(1, 3), make_rational(2)));
    CHECK(parse_param_poly(a.to_string()) == a);
  }
  CHECK(parse_param_poly("e^7*(mu^2+rho)^2*a1").total_degree() == 12);
  CHECK(parse_param_poly("3/2*i*a0 - lambda").to_string() == "3/2*i*a0 - lambda");
  CHECK_THROWS_AS(parse_param_poly("a0/a1"), ParseError);
  CHECK_THROWS_AS(parse_param_poly("q + 1"), ParseError);
  CHECK_THROWS_AS(parse_param_poly("(a0"), ParseError);
}

TEST_CASE("grlex rendering order is deterministic") {
  ParamPoly p = parse_param_poly("lambda*a1*e + 180*a0^2*a1*e - 30*a0*a1*r");
  CHECK(p.to_string() == "180*a0^2*a1*e - 30*a0*a1*r + a1*lambda*e");
  CHECK(p.to_latex() == "180 a_0^{2} a_1 e - 30 a_0 a_1 r + a_1 \\lambda e");
}

TEST_CASE("content, division and primitive parts") {
  ParamPoly p = parse_param_poly("6*r^3*a1 - 4*r^2*a0");
  CHECK(p.content_power(Symbol::r) == 2);
  CHECK(p.divide_by_power(Symbol::r, 2) == parse_param_poly("6*r*a1 - 4*a0"));
  auto [scale, prim] = parse_param_poly("-6*a1^2 + 4").primitive();
  CHECK(scale == GaussianRational(-2));
  CHECK(prim == parse_param_poly("3*a1^2 - 2"));
  auto [quo, rem] = parse_param_poly("a0^3 + r").divmod(parse_param_poly("a0^2 - lambda"), Symbol::a0);
  CHECK(quo == parse_param_poly("a0"));
  CHECK(rem == parse_param_poly("a0*lambda + r"));
  CHECK(parse_param_poly("e^3*rho^2 + e^2").reduce_involutions() == parse_param_poly("e + 1"));
  CHECK(parse_param_poly("mu^2 + 1").substitute(Symbol::mu, ParamPoly(GaussianRational::i())).is_zero());
}

TEST_CASE("add examples") {
  SigmaTauExpr x = SigmaTauExpr::sigma() * SigmaTauExpr(Q(3));
  CHECK(SigmaTauExpr() + x == x);
  SigmaTauExpr st = SigmaTauExpr::sigma() + SigmaTauExpr::tau();
  REQUIRE(st.p_coeffs().size() == 2);
  CHECK(st.p_coeffs()[0].is_zero());
  CHECK(st.p_coeffs()[1] == Q(1));
  REQUIRE(st.q_coeffs().size() == 1);
  CHECK(st.q_coeffs()[0] == Q(1));
  SigmaTauExpr s2r({ParamPoly(), ParamPoly(), Q(1)}, {}, 1);
  SigmaTauExpr sum = s2r + s2r;
  CHECK(sum.r_denom_power() == 1);
  CHECK(sum.p_coeffs().back() == Q(2));
}

TEST_CASE("mul eliminates tau squared") {
  auto specialize = [](const SigmaTauExpr& x) {
    return x.substitute(Symbol::e, Q(-1)).substitute(Symbol::mu, Q(0)).substitute(Symbol::rho, Q(-1));
  };
  const SigmaTauExpr tau = SigmaTauExpr::tau();
  SigmaTauExpr t2 = specialize(tau * tau);
  CHECK(t2 == SigmaTauExpr({S(Symbol::r, 2), ParamPoly(), Q(-1)}, {}, 1));
  CHECK(t2.to_string() == "((-1)*sigma^2 + (r^2))/r");
  SigmaTauExpr t3 = specialize(tau * (tau * tau));
  CHECK(t3 == SigmaTauExpr({}, {S(Symbol::r, 2), ParamPoly(), Q(-1)}, 1));
  SigmaTauExpr st = SigmaTauExpr::sigma() * tau;
  CHECK(st.p_coeffs().empty());
  REQUIRE(st.q_coeffs().size() == 2);
  CHECK(st.q_coeffs()[1] == Q(1));
}

TEST_CASE("xi derivative examples") {
  const ParamPoly e = S(Symbol::e), mu = S(Symbol::mu), rho = S(Symbol::rho);
  CHECK(SigmaTauExpr::sigma().xi_derivative() == SigmaTauExpr({}, {ParamPoly(), e}, 0));
  CHECK(SigmaTauExpr(parse_param_poly("a0 + lambda")).xi_derivative().is_zero());
  SigmaTauExpr dtau = SigmaTauExpr::tau().xi_derivative(true);
  CHECK(dtau == SigmaTauExpr({ParamPoly(), mu * S(Symbol::r), -(mu * mu + rho)}, {}, 1));
}

TEST_CASE("evaluate") {
  Params v{};
  v[index_of(Symbol::r)] = 2.0;
  CHECK(SigmaTauExpr::sigma().evaluate(2.0, 5.0, v) == 2.0);
  SigmaTauExpr over_r({Q(1)}, {}, 1);
  v[index_of(Symbol::r)] = 0.0;
  CHECK_THROWS_AS(over_r.evaluate(1.0, 1.0, v), DivisionByZero);
}

TEST_CASE("tau squared normal form agrees with the direct product on Case III") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u_mu(-0.9, 0.9), u_r(0.5, 4.0), u_xi(-2.0, 2.0);
  const SigmaTauExpr t2 = SigmaTauExpr::tau() * SigmaTauExpr::tau();
  for (int i = 0; i < 20; ++i) {
    Params v{};
    v[index_of(Symbol::e)] = -1.0;
    v[index_of(Symbol::rho)] = -1.0;
    v[index_of(Symbol::mu)] = u_mu(rng);
    v[index_of(Symbol::r)] = u_r(rng);
    auto [s, t] = case3(v[index_of(Symbol::mu)], v[index_of(Symbol::r)], u_xi(rng));
    const double direct = t * t;
    CHECK(std::abs(t2.evaluate(s, t, v) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("normal form soundness on random expressions") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u_mu(-0.9, 0.9), u_r(0.5, 3.0), u_xi(-1.5, 1.5), u_p(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    PairExpr pe = random_pair(rng, 3);
    for (int k = 0; k < 5; ++k) {
      Params v{};
      for (Symbol s : kAllSymbols) v[index_of(s)] = u_p(rng);
      v[index_of(Symbol::e)] = -1.0;
      v[index_of(Symbol::rho)] = -1.0;
      v[index_of(Symbol::mu)] = u_mu(rng);
      v[index_of(Symbol::r)] = u_r(rng);
      auto [s, t] = case3(v[index_of(Symbol::mu)], v[index_of(Symbol::r)], u_xi(rng));
      const double direct = eval_raw(pe.raw, s, t, v);
      const double normal = pe.normal.evaluate(s, t, v);
      CHECK(std::abs(normal - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
      CHECK(pe.raw.to_normal_form() == pe.normal);
    }
  }
}

TEST_CASE("collect") {
  SigmaTauExpr x = SigmaTauExpr::sigma() + SigmaTauExpr(Q(2)) * SigmaTauExpr::sigma() * SigmaTauExpr::tau();
  auto groups = x.collect();
  REQUIRE(groups.size() == 2);
  CHECK(groups[0] == SigmaTauTerm{1, 1, Q(2)});
  CHECK(groups[1] == SigmaTauTerm{1, 0, Q(1)});
  CHECK(SigmaTauExpr().collect().empty());
  SigmaTauExpr over_r({ParamPoly(), Q(3)}, {S(Symbol::a0)}, 2);
  auto cleared = over_r.collect();
  REQUIRE(cleared.size() == 2);
  CHECK(cleared[0].coefficient == Q(3));
  CHECK(cleared[1].coefficient == S(Symbol::a0));
}

TEST_CASE("first integral is conserved only when e^2 = 1") {
  const ParamPoly e = S(Symbol::e), mu = S(Symbol::mu), r = S(Symbol::r), rho = S(Symbol::rho);
  // I r = tau^2 r + e r^2 - 2 e mu r sigma + e (mu^2 + rho) sigma^2.
  RiccatiPolynomial sigma = RiccatiPolynomial::sigma(), tau = RiccatiPolynomial::tau();
  RiccatiPolynomial invariant = RiccatiPolynomial(r) * tau * tau + RiccatiPolynomial(e * r * r) -
                                RiccatiPolynomial(Q(2) * e * mu * r) * sigma +
                                RiccatiPolynomial(e * (mu * mu + rho)) * sigma * sigma;
  SigmaTauExpr d = invariant.xi_derivative().to_normal_form();
  CHECK_FALSE(d.is_zero());
  CHECK(d.reduce_involutions().is_zero());
  // Normal-form route: tau^2 is already eliminated, so the invariant is 0.
  SigmaTauExpr t = SigmaTauExpr::tau();
  SigmaTauExpr inv_nf = t * t + SigmaTauExpr(e * r) - SigmaTauExpr(Q(2) * e * mu) * SigmaTauExpr::sigma() +
                        SigmaTauExpr({ParamPoly(), ParamPoly(), e * (mu * mu + rho)}, {}, 1);
  CHECK(inv_nf.xi_derivative(true).reduce_involutions().is_zero());
}

TEST_CASE("derivation property on random instances") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    SigmaTauExpr x = random_expr(rng, 2), y = random_expr(rng, 2);
    SigmaTauExpr lhs = (x * y).xi_derivative(true);
    SigmaTauExpr rhs = (x.xi_derivative(true) * y + x * y.xi_derivative(true)).reduce_involutions();
    CHECK(lhs == rhs);
  }
}

TEST_CASE("sigma tau expr ring axioms") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    SigmaTauExpr a = random_expr(rng, 2), b = random_expr(rng, 2), c = random_expr(rng, 2);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a - a).is_zero());
  }
}
