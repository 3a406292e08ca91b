#include <doctest.h>

#include "cdgkit/errors.hpp"
#include "cdgkit/reduction/reduction.hpp"
#include "cdgkit/symkernel/parse.hpp"

using namespace cdg;
using namespace cdg::red;
using sym::Symbol;

namespace {

ParamPoly S(Symbol s, unsigned k = 1) { return ParamPoly::symbol(s, k); }

KdV5Params params(long w, long a, long b, long g) { return {Rational(w), Rational(a), Rational(b), Rational(g)}; }

SigmaTauExpr ansatz_value(const Ansatz& a) {
  SigmaTauExpr v(a.a0);
  SigmaTauExpr power(ParamPoly(sym::GaussianRational(1)));
  for (unsigned j = 0; j < a.m; ++j) {
    v = v + power * (SigmaTauExpr(a.a[j]) * SigmaTauExpr::sigma() + SigmaTauExpr(a.b[j]) * SigmaTauExpr::tau());
    power = power * SigmaTauExpr::sigma();
  }
  return v;
}

}  // namespace

TEST_CASE("reduce_to_ode renders the CDG traveling-wave ODE") {
  const DiffPoly ode = reduce_to_ode(KdV5Params::cdg());
  CHECK(ode.to_string() == "V^(5) + 30*V*V''' + 30*V'*V'' + 180*V^2*V' + lambda*V'");
  CHECK(ode.max_order() == 5);
  CHECK(ode.terms().size() == 5);
  CHECK(ode.to_latex().find("V^{(5)}") != std::string::npos);
}

TEST_CASE("linear dispersive case keeps only the fifth derivative and the speed term") {
  CHECK(reduce_to_ode(params(1, 0, 0, 0)).to_string() == "V^(5) + lambda*V'");
}

TEST_CASE("gamma u^2 u_x maps to gamma V^2 V'") {
  const DiffPoly ode = reduce_to_ode(params(1, 0, 0, 7));
  bool found = false;
  for (const auto& t : ode.terms()) {
    if (t.orders == std::vector<unsigned>{0, 0, 1}) {
      found = true;
      CHECK(t.coefficient == ParamPoly(sym::GaussianRational(7)));
    }
  }
  CHECK(found);
}

TEST_CASE("omega = 0 is rejected") {
  CHECK_THROWS_AS(params(0, 1, 1, 1).validate(), DomainError);
  CHECK_THROWS_AS(reduce_to_ode(params(0, 1, 1, 1)), DomainError);
  CHECK_NOTHROW(KdV5Params::cdg().validate());
}

TEST_CASE("DiffPoly merges like terms and drops cancellations") {
  DiffPoly p;
  p.add_term({1, 0}, S(Symbol::lambda));
  p.add_term({0, 1}, -S(Symbol::lambda));
  CHECK(p.terms().empty());
  CHECK(p.to_string() == "0");
  p.add_term({3, 0}, ParamPoly(sym::GaussianRational(2)));
  p.add_term({0, 3}, ParamPoly(sym::GaussianRational(3)));
  REQUIRE(p.terms().size() == 1);
  CHECK(p.to_string() == "5*V*V'''");
  CHECK_THROWS(p.add_term({6}, S(Symbol::lambda)));
}

TEST_CASE("constant ansatz annihilates the ODE on both routes") {
  Ansatz a = Ansatz::symbolic(1);
  a.a[0] = ParamPoly();
  a.b[0] = ParamPoly();
  const DiffPoly ode = reduce_to_ode(KdV5Params::cdg());
  CHECK(substitute_ansatz(ode, a, DerivativeRoute::normal_form).is_zero());
  CHECK(substitute_ansatz(ode, a, DerivativeRoute::deferred).is_zero());
}

TEST_CASE("substitution is linear over ODE terms") {
  const DiffPoly full = reduce_to_ode(KdV5Params::cdg());
  const Ansatz a = Ansatz::symbolic(1);
  SigmaTauExpr sum;
  for (const auto& t : full.terms()) {
    DiffPoly single;
    single.add_term(t.orders, t.coefficient);
    sum = sum + substitute_ansatz(single, a);
  }
  CHECK((sum - substitute_ansatz(full, a)).is_zero());
}

TEST_CASE("lambda V' contributes exactly lambda times the ansatz derivative") {
  const Ansatz a = Ansatz::symbolic(1);
  const DiffPoly full = reduce_to_ode(KdV5Params::cdg());
  DiffPoly without;
  for (const auto& t : full.terms()) {
    if (t.orders != std::vector<unsigned>{1}) without.add_term(t.orders, t.coefficient);
  }
  const SigmaTauExpr diff = substitute_ansatz(full, a) - substitute_ansatz(without, a);
  const SigmaTauExpr expected = SigmaTauExpr(S(Symbol::lambda)) * ansatz_value(a).xi_derivative();
  CHECK((diff - expected).is_zero());
}

TEST_CASE("linear case: every group carries a1 and no a0") {
  Ansatz a = Ansatz::symbolic(1);
  a.b[0] = ParamPoly();
  const auto groups = substitute_ansatz(reduce_to_ode(params(1, 0, 0, 0)), a).collect();
  REQUIRE(!groups.empty());
  for (const auto& g : groups) {
    CHECK(g.coefficient.content_power(Symbol::a1) >= 1);
    CHECK_FALSE(g.coefficient.depends_on(Symbol::a0));
  }
}

TEST_CASE("derivative routes agree modulo e^2 = 1 and rho^2 = 1") {
  const DiffPoly ode = reduce_to_ode(KdV5Params::cdg());
  for (unsigned m : {1u, 2u}) {
    const Ansatz a = Ansatz::symbolic(m);
    const SigmaTauExpr normal = substitute_ansatz(ode, a, DerivativeRoute::normal_form);
    const SigmaTauExpr deferred = substitute_ansatz(ode, a, DerivativeRoute::deferred);
    CHECK((normal - deferred).reduce_involutions().is_zero());
  }
}

// The two degree-6 groups: sigma^5 tau and sigma^6.
TEST_CASE("top groups are rational multiples of e^7 (mu^2+rho)^2 a1 and e^8 (mu^2+rho)^3 b1") {
  const auto groups = substitute_ansatz(reduce_to_ode(KdV5Params::cdg()), Ansatz::symbolic(1),
                                        DerivativeRoute::deferred)
                          .collect();
  REQUIRE(groups.size() >= 2);
  CHECK(groups[0].sigma_power == 6);
  CHECK(groups[0].tau_power == 0);
  CHECK(groups[1].sigma_power == 5);
  CHECK(groups[1].tau_power == 1);
  const std::pair<std::size_t, const char*> expected[] = {{0, "e^8*(mu^2+rho)^3*b1"}, {1, "e^7*(mu^2+rho)^2*a1"}};
  for (const auto& [index, text] : expected) {
    const ParamPoly& g = groups[index].coefficient;
    const ParamPoly shape = sym::parse_param_poly(text) * S(Symbol::r, g.content_power(Symbol::r));
    const sym::GaussianRational c = g.leading_coefficient() / shape.leading_coefficient();
    CHECK_FALSE(c.is_zero());
    CHECK(g == shape * c);
  }
}

TEST_CASE("symbolic ansatz supports orders 1..4") {
  CHECK_THROWS(Ansatz::symbolic(0));
  CHECK_THROWS(Ansatz::symbolic(5));
  const Ansatz a = Ansatz::symbolic(3);
  CHECK(a.a.size() == 3);
  CHECK(a.b[2] == S(Symbol::b3));
}
