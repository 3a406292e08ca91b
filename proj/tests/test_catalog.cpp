#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cdgkit/catalog/catalog.hpp"
#include "cdgkit/reduction/reduction.hpp"
#include "cdgkit/sysgen/solver.hpp"

using namespace cdg;
using namespace cdg::cat;

namespace {

using T5 = Taylor<double, 5>;

// Central differences of order 1..5 in 50-digit arithmetic, Richardson
// extrapolated over (h, h/2). Independent of the jet recurrences.
template <class F>
std::array<double, 5> fd_derivatives(F f, double x0, double h = 1e-4) {
  const HighReal x(x0);
  auto stencil = [&](const HighReal& hh) {
    auto at = [&](int k) { return f(x + HighReal(k) * hh); };
    const HighReal f0 = at(0), p1 = at(1), m1 = at(-1), p2 = at(2), m2 = at(-2), p3 = at(3), m3 = at(-3);
    std::array<HighReal, 5> d;
    d[0] = (p1 - m1) / (2 * hh);
    d[1] = (p1 - 2 * f0 + m1) / (hh * hh);
    d[2] = (p2 - 2 * p1 + 2 * m1 - m2) / (2 * pow(hh, 3));
    d[3] = (p2 - 4 * p1 + 6 * f0 - 4 * m1 + m2) / pow(hh, 4);
    d[4] = (p3 - 4 * p2 + 5 * p1 - 5 * m1 + 4 * m2 - m3) / (2 * pow(hh, 5));
    return d;
  };
  const auto a = stencil(HighReal(h)), b = stencil(HighReal(h) / 2);
  std::array<double, 5> out;
  for (int k = 0; k < 5; ++k) out[k] = static_cast<double>(HighReal((4 * b[k] - a[k]) / 3));
  return out;
}

void check_formula_against_fd(const std::string& text, double xi, double r = 1.3, double lambda = 0.8) {
  CAPTURE(text);
  const Formula f = Formula::parse(text);
  const T5 jet = f.evaluate(T5::variable(xi), r, lambda);
  const auto fd = fd_derivatives([&](const HighReal& x) { return f.evaluate(x, r, lambda); }, xi);
  CHECK(jet.c[0] == doctest::Approx(f.evaluate(xi, r, lambda)).epsilon(1e-14));
  for (std::size_t k = 1; k <= 5; ++k) {
    CAPTURE(k);
    const double scale = std::max(1.0, std::fabs(fd[k - 1]));
    CHECK(std::fabs(jet.derivative(k) - fd[k - 1]) / scale < 1e-8);
  }
}

}  // namespace

TEST_CASE("formula parse and canonical rendering") {
  const Formula f = Formula::parse("1/60*(5*r - sqrt(5)*sqrt(r^2 - 4*lambda)) + r*csc(sqrt(r)*xi)/(2*(1 - csc(sqrt(r)*xi)))");
  const std::string text = f.to_string();
  CHECK(text == "1/60*(5*r - sqrt(5)*sqrt(r^2 - 4*lambda)) + r*csc(sqrt(r)*xi)/(2*(1 - csc(sqrt(r)*xi)))");
  CHECK(Formula::parse(text).to_string() == text);
  CHECK(Formula::parse("-sqrt(lambda)/6").to_string() == "-sqrt(lambda)/6");
  CHECK(Formula::parse("(4*lambda)^(1/4)*xi").to_string() == "(4*lambda)^(1/4)*xi");
  CHECK(Formula::parse("r - (lambda - xi)").to_string() == "r - (lambda - xi)");
  CHECK(Formula::parse("r*(-xi)").to_string() == "r*(-xi)");
  CHECK(Formula::parse("csch(xi)^2").to_string() == "csch(xi)^2");
  CHECK(Formula::parse("xi^(-2)").to_string() == "xi^(-2)");
  CHECK(Formula::parse("2*xi").depends_on_xi());
  CHECK_FALSE(Formula::parse("2*r").depends_on_xi());
  CHECK(Formula::parse("(4*lambda)^(1/4)").to_latex() == "\\sqrt[4]{4 \\lambda}");
}

TEST_CASE("formula parse errors carry positions") {
  CHECK_THROWS_AS(Formula::parse("r +"), ParseError);
  CHECK_THROWS_AS(Formula::parse("foo(xi)"), ParseError);
  CHECK_THROWS_AS(Formula::parse("sin xi"), ParseError);
  CHECK_THROWS_AS(Formula::parse("xi^(1/0)"), ParseError);
  try {
    Formula::parse("r + mu");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
}

TEST_CASE("formula evaluation in double and 50 digits") {
  const Formula f = Formula::parse("1/60*(5*r - sqrt(5)*sqrt(r^2 - 4*lambda))");
  const double expected = (5 * 3.0 - std::sqrt(5.0) * std::sqrt(9.0 - 4.0)) / 60;
  CHECK(f.evaluate(0.0, 3.0, 1.0) == doctest::Approx(expected).epsilon(1e-15));
  const HighReal hi = f.evaluate(HighReal(0), 3.0, 1.0);
  CHECK(abs(hi - (HighReal(15) - HighReal(5)) / 60) < HighReal(1e-45));
  // Integer powers of negative bases stay real.
  CHECK(Formula::parse("r^2 - r^3").evaluate(0.0, -2.0, 0.0) == doctest::Approx(12.0));
  CHECK(Formula::parse("sqrt(-r)").evaluate(0.0, -4.0, 0.0) == doctest::Approx(2.0));
}

TEST_CASE("jet arithmetic matches finite differences for every elementary function") {
  for (const char* text :
       {"sin(0.7*xi + 1)", "cos(3/4*xi - 2)", "tan(xi/2)", "cot(xi + 1)", "sec(xi/3)", "csc(xi + 1/2)",
        "sinh(xi/2)", "cosh(xi - 1)", "tanh(2*xi)", "coth(xi + 2)", "sech(xi)", "csch(xi + 1)", "sqrt(xi + 3)",
        "exp(-xi/2)", "(xi + 2)^(1/4)", "(xi + 3)^(-2)", "xi^3*sinh(xi)/(1 + cosh(xi))",
        "r*sec(sqrt(r)*xi)/(1 - 1/5*sec(sqrt(r)*xi))", "csch((lambda/4)^(1/4)*xi)^2"}) {
    for (double xi : {0.37, 1.1}) {
      std::string t = text;
      for (auto pos = t.find("0.7"); pos != std::string::npos; pos = t.find("0.7")) t.replace(pos, 3, "7/10");
      check_formula_against_fd(t, xi);
    }
  }
}

TEST_CASE("jet of sech^2 at 0") {
  const T5 u = Formula::parse("sech(xi)^2").evaluate(T5::variable(0.0), 1.0, 1.0);
  CHECK(u.c[0] == doctest::Approx(1.0));
  CHECK(u.derivative(1) == doctest::Approx(0.0));
  CHECK(u.derivative(2) == doctest::Approx(-2.0));
}

TEST_CASE("constant jets have zero derivatives, including sqrt(0)") {
  const T5 u = Formula::parse("sqrt(r^2 - 4*lambda) + 7").evaluate(T5::variable(0.3), 2.0, 1.0);
  CHECK(u.c[0] == 7.0);
  for (std::size_t k = 1; k <= 5; ++k) CHECK(u.derivative(k) == 0.0);
  const Jet j = build_solution(find_family("T3R1"), 1.0, 2.0).with_shape_scale(0.0).jet(0.3, 0.2);
  CHECK(j.value == doctest::Approx(2.0 / 12));
  for (double d : j.dx) CHECK(d == 0.0);
  CHECK(j.dt == 0.0);
}

TEST_CASE("Riccati closed forms at reference points") {
  auto [s3, t3] = eval_sigma_tau(CaseId::III, {-1, -1, 0.0, 4.0, 1.0}, 0.0);
  CHECK(s3 == doctest::Approx(4.0));
  CHECK(t3 == doctest::Approx(0.0));
  auto [s1, t1] = eval_sigma_tau(CaseId::I, {1, 1, 0.0, 0.0, 3.0}, 2.0);
  CHECK(s1 == doctest::Approx(1.5));
  CHECK(t1 == doctest::Approx(-0.5));
  auto [s2, t2] = eval_sigma_tau(CaseId::II_sec, {1, -1, 0.0, 1.0, 1.0}, std::numbers::pi / 4);
  CHECK(s2 == doctest::Approx(std::sqrt(2.0)));
  CHECK(t2 == doctest::Approx(1.0));
}

TEST_CASE("Riccati preconditions and poles") {
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::III, {1, -1, 0.0, 1.0, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::IV, {-1, 1, 0.0, -1.0, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::I, {1, 1, 0.5, 0.0, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::IV, {-1, 1, 0.0, 1.0, 1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::II_csc, {1, -1, 0.0, 1.0, 1.0}, std::numbers::pi), DomainError);
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::I, {1, 1, 0.0, 0.0, 1.0}, 0.0), DomainError);
  // 1 + mu sech = 0 never happens for mu = -1/2, but 1 - sec does at xi = 0.
  CHECK_THROWS_AS(eval_sigma_tau(CaseId::II_sec, {1, -1, -1.0, 1.0, 1.0}, 0.0), DomainError);
  CHECK(case_from_name("II_csc") == CaseId::II_csc);
  CHECK_THROWS(case_from_name("V"));
}

TEST_CASE("case sigma text agrees with the templated evaluator") {
  for (CaseId c : {CaseId::II_sec, CaseId::II_csc, CaseId::III, CaseId::IV}) {
    const auto [e, rho] = case_signs(c);
    for (long mu : {-1L, 0L, 1L}) {
      const Formula f = Formula::parse(case_sigma_text(c, mu));
      const double xi = 0.41;
      CHECK(f.evaluate(xi, 1.7, 0.0) == doctest::Approx(sigma_tau(c, {e, rho, double(mu), 1.7, 1.0}, xi).first));
    }
  }
  CHECK(case_sigma_text(CaseId::III, -1, 2) == "r*sech(sqrt(r)*xi)/(1 - (1/2)*sech(sqrt(r)*xi))");
}

TEST_CASE("catalog lists 21 families with printed parameters") {
  const auto& all = list_families();
  CHECK(all.size() == 21);
  int per_table[5] = {0, 0, 0, 0, 0};
  for (const auto& f : all) ++per_table[f.table];
  CHECK(per_table[1] == 4);
  CHECK(per_table[2] == 4);
  CHECK(per_table[3] == 7);
  CHECK(per_table[4] == 6);
  const SolutionFamily& t1 = find_family("T1R1");
  CHECK(t1.a1_printed == GaussianRational(sym::make_rational(1, 2)));
  CHECK(t1.mu_printed == GaussianRational(sym::make_rational(-1)));
  CHECK(t1.rho_printed == 1);
  const SolutionFamily& t24 = find_family("T2R4");
  CHECK(t24.a0_printed.to_string() == "-5*sqrt(lambda)/6 + sqrt(lambda)/6");
  CHECK(t24.u().to_string() == "sqrt(lambda)/(csc((4*lambda)^(1/4)*xi) + 1)");
  CHECK(t24.mu_printed == GaussianRational::i());
  CHECK_THROWS_AS(find_family("T5R1"), std::out_of_range);
}

TEST_CASE("effective parameters reproduce each row's shape as a1 sigma") {
  for (const auto& f : list_families()) {
    CAPTURE(f.id);
    const double lambda = 0.7;
    const double r = f.admissibility.r_sign < 0 ? -2.3 : 2.3;
    const Instance inst = instantiate(f, lambda, f.admissibility.r_sign == 0 ? std::nullopt : std::optional(r));
    const EffectiveParams& eff = f.effective;
    const RiccatiParams rp{eff.e_val, eff.rho_val, eff.mu.re().get_d(), inst.r_eff, 1.0};
    validate_case(eff.case_id, rp);
    double gap[2];
    const double xis[2] = {0.23, 0.61};
    for (int k = 0; k < 2; ++k) {
      gap[k] = f.shape.evaluate(xis[k], inst.r, inst.lambda) - eff.a1.re().get_d() * sigma_tau(eff.case_id, rp, xis[k]).first;
    }
    CHECK(gap[0] == doctest::Approx(gap[1]).epsilon(1e-12));
    // Only the row printed without its constant has a shifted shape.
    if (f.id == "T2R4") {
      CHECK(gap[0] == doctest::Approx(std::sqrt(lambda)));
    } else {
      CHECK(std::fabs(gap[0]) < 1e-12);
    }
  }
}

TEST_CASE("build_solution reference values") {
  const ClosedForm t36 = build_solution(find_family("T3R6"), 0.25);
  for (auto [x, t] : {std::pair{0.0, 0.0}, std::pair{1.3, 0.4}, std::pair{-2.0, 1.0}}) {
    CHECK(t36(x, t) == doctest::Approx(-1.0 / 12 + 0.5 / (std::cosh(x + t / 4) + 1)).epsilon(1e-14));
  }
  CHECK(t36.r() == doctest::Approx(1.0));
  CHECK(build_solution(find_family("T4R6"), 1.0)(0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  // r^2 = 4 lambda: the surd vanishes and a0 = r/12.
  const SolutionFamily& t31 = find_family("T3R1");
  CHECK(t31.offset.evaluate(0.0, 2.0, 1.0) == doctest::Approx(2.0 / 12).epsilon(1e-15));
}

TEST_CASE("admissibility") {
  CHECK_THROWS_AS(build_solution(find_family("T3R1"), 3.0, 2.0), DomainError);   // r^2 < 4 lambda
  CHECK_THROWS_AS(build_solution(find_family("T1R1"), 1.0, -3.0), DomainError);  // r < 0
  CHECK_THROWS_AS(build_solution(find_family("T2R1"), 1.0, 3.0), DomainError);   // r > 0
  CHECK_THROWS_AS(build_solution(find_family("T3R6"), 0.0), DomainError);        // lambda = 0
  CHECK_THROWS_AS(build_solution(find_family("T3R6"), 0.25, 3.0), DomainError);  // r fixed by lambda
  CHECK_THROWS_AS(build_solution(find_family("T3R1"), 1.0), DomainError);        // r missing
  CHECK_NOTHROW(build_solution(find_family("T3R6"), 0.25, 1.0));
  CHECK(instantiate(find_family("T2R4"), 1.0, std::nullopt).r == doctest::Approx(-2.0));
  CHECK(instantiate(find_family("T2R1"), 1.0, -3.0).r_eff == doctest::Approx(3.0));
  try {
    build_solution(find_family("T3R1"), 3.0, 2.0);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("r^2 - 4*lambda >= 0") != std::string::npos);
  }
}

TEST_CASE("taylor_eval: traveling wave, poles, negative controls") {
  const ClosedForm u = build_solution(find_family("T4R6"), 1.0);
  const Jet j = taylor_eval(u, 0.7, 0.3);
  CHECK(j.dt == doctest::Approx(u.speed() * j.dx[0]).epsilon(1e-13));
  CHECK(j.value == doctest::Approx(u(0.7, 0.3)).epsilon(1e-15));
  const ClosedForm singular = build_solution(find_family("T4R5"), 1.0);
  CHECK_THROWS_AS(taylor_eval(singular, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(taylor_eval(singular, -0.5, 0.5 + 1e-5), DomainError);
  CHECK_NOTHROW(taylor_eval(singular, 0.5, 0.0));
  CHECK_FALSE(singular.regular(1e-4, 0.0, kPoleMargin));
  const ClosedForm scaled = u.with_shape_scale(1.1);
  CHECK(scaled(0.2, 0.1) - u.with_shape_scale(0.0)(0.2, 0.1) ==
        doctest::Approx(1.1 * (u(0.2, 0.1) - u.with_shape_scale(0.0)(0.2, 0.1))));
  CHECK(u.to_string().find("lambda = 1") != std::string::npos);
}

TEST_CASE("substituted ansatz agrees with jet evaluation of the ODE on a Case III trajectory") {
  using sym::Symbol;
  const red::DiffPoly ode = red::reduce_to_ode(red::KdV5Params::cdg());
  const sym::SigmaTauExpr expr = red::substitute_ansatz(ode, red::Ansatz::symbolic(1));
  const RiccatiParams rp{-1, -1, 0.3, 1.7, 1.0};
  const double a0 = 0.2, a1 = -0.4, b1 = 0.7, lambda = 0.9;
  for (double xi0 : {0.37, -1.2, 2.5}) {
    const auto [sigma, tau] = sigma_tau(rp.e_val == -1 ? CaseId::III : CaseId::III, rp, T5::variable(xi0));
    const T5 v = T5(a0) + T5(a1) * sigma + T5(b1) * tau;
    std::array<double, 6> d{};
    for (std::size_t k = 0; k <= 5; ++k) d[k] = v.derivative(k);
    const double direct = d[5] + 30 * d[0] * d[3] + 30 * d[1] * d[2] + 180 * d[0] * d[0] * d[1] + lambda * d[1];
    std::array<double, sym::kSymbolCount> params{};
    params[sym::index_of(Symbol::a0)] = a0;
    params[sym::index_of(Symbol::a1)] = a1;
    params[sym::index_of(Symbol::b1)] = b1;
    params[sym::index_of(Symbol::mu)] = rp.mu;
    params[sym::index_of(Symbol::r)] = rp.r;
    params[sym::index_of(Symbol::lambda)] = lambda;
    params[sym::index_of(Symbol::e)] = rp.e_val;
    params[sym::index_of(Symbol::rho)] = rp.rho_val;
    const double symbolic = expr.evaluate(sigma.c[0], tau.c[0], params);
    const double scale = std::fabs(d[5]) + std::fabs(180 * d[0] * d[0] * d[1]) + std::fabs(lambda * d[1]);
    CHECK(std::fabs(symbolic - direct) / scale < 1e-10);
  }
}

TEST_CASE("families from solver branches") {
  const gen::AlgebraicSystem sys = gen::generate_system(red::reduce_to_ode(red::KdV5Params::cdg()), 1);
  const gen::SolveResult res = gen::solve_m1(sys, -1, -1);
  int built = 0;
  for (const auto& b : res.branches) {
    if (b.assignments.at(sym::Symbol::a1).is_zero()) {
      CHECK_THROWS_AS(family_from_branch(b), DomainError);
      continue;
    }
    for (std::size_t root : {0u, 1u}) {
      const SolutionFamily f = family_from_branch(b, root);
      CHECK(f.effective.case_id == CaseId::III);
      const ClosedForm u = build_solution(f, 0.1, 2.0);
      CHECK(std::isfinite(u(0.5, 0.1)));
      ++built;
      if (f.lambda_rule) {
        CHECK(u.lambda() == doctest::Approx(-4.0));
        break;
      }
    }
  }
  CHECK(built == 6);
  const gen::SolveResult complex_mu = gen::solve_m1(sys, 1, 1);
  CHECK_THROWS_AS(family_from_branch(complex_mu.branches.back()), DomainError);
}
