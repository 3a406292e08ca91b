#include "cdgkit/sysgen/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <set>
#include <stdexcept>

#include "cdgkit/errors.hpp"

namespace cdg::gen {

namespace {

using Complex = std::complex<long double>;
using sym::Integer;

// Best rational approximation with denominator <= max_den.
Rational rationalize(long double x, long max_den = 1000000) {
  long double a = x;
  Integer h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 40; ++it) {
    const long double fl = std::floor(a);
    const Integer ai = static_cast<long>(fl);
    const Integer h2 = ai * h1 + h0;
    const Integer k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const long double frac = a - fl;
    if (std::fabs(frac) < 1e-15L) break;
    a = 1.0L / frac;
  }
  Rational q(h1, k1);
  q.canonicalize();
  return q;
}

std::vector<Complex> numeric_roots(const std::vector<GaussianRational>& coeffs) {
  const std::size_t n = coeffs.size() - 1;
  std::vector<Complex> c(coeffs.size());
  const GaussianRational lead_inv = coeffs.back().inverse();
  for (std::size_t i = 0; i <= n; ++i) {
    const GaussianRational z = coeffs[i] * lead_inv;
    c[i] = Complex(z.re().get_d(), z.im().get_d());
  }
  // Durand-Kerner on the monic polynomial.
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = std::pow(Complex(0.4L, 0.9L), static_cast<long double>(i));
  auto eval = [&](Complex x) {
    Complex acc = 0;
    for (std::size_t i = n + 1; i-- > 0;) acc = acc * x + c[i];
    return acc;
  };
  for (int it = 0; it < 2000; ++it) {
    long double change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const Complex step = eval(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-18L) break;
  }
  return z;
}

struct State {
  std::vector<ParamPoly> eqs;
  std::map<Symbol, ParamPoly> assign;
  std::vector<ResidualConstraint> constraints;
  std::vector<std::string> assumptions;
  std::set<Symbol> nonzero_symbols{Symbol::r};
  std::vector<ParamPoly> nonzero_factors;
};

constexpr Symbol kUnknowns[] = {Symbol::a1, Symbol::b1, Symbol::a0, Symbol::lambda};

bool only_depends_on(const ParamPoly& p, Symbol s) {
  const auto syms = p.symbols();
  return syms.size() == 1 && syms.front() == s;
}

ParamPoly simplify(ParamPoly p, const State& st) {
  for (const auto& c : st.constraints) {
    if (p.depends_on(c.variable)) p = p.divmod(c.poly, c.variable).second;
  }
  if (p.is_zero()) return p;
  for (Symbol s : st.nonzero_symbols) p = p.divide_by_power(s, p.content_power(s));
  for (const auto& f : st.nonzero_factors) {
    const Symbol var = f.symbols().front();
    for (;;) {
      if (!p.depends_on(var)) break;
      auto [q, rem] = p.divmod(f, var);
      if (!rem.is_zero()) break;
      p = q;
    }
  }
  return p.primitive().second;
}

State substitute(State st, Symbol x, const ParamPoly& value, const std::string& note) {
  for (auto& e : st.eqs) e = e.substitute(x, value);
  for (auto& [s, v] : st.assign) v = v.substitute(x, value);
  for (auto& c : st.constraints) c.poly = c.poly.substitute(x, value);
  st.assign[x] = value;
  st.assumptions.push_back(note);
  return st;
}

std::string assignment_note(Symbol x, const ParamPoly& value) {
  return std::string(sym::symbol_name(x)) + " = " + value.to_string();
}

struct Search {
  int e_val;
  int rho_val;
  SolveResult result;
  std::vector<State> solved;

  void run(State st) {
    std::vector<ParamPoly> eqs;
    for (const auto& e : st.eqs) {
      ParamPoly s = simplify(e, st);
      if (s.is_zero()) continue;
      if (s.is_constant()) {
        result.refutations.push_back({st.assumptions, s});
        return;
      }
      if (std::find(eqs.begin(), eqs.end(), s) == eqs.end()) eqs.push_back(std::move(s));
    }
    st.eqs = std::move(eqs);
    if (st.eqs.empty()) {
      solved.push_back(std::move(st));
      return;
    }
    if (branch_on_roots(st)) return;
    if (solve_linear(st, {Symbol::a1, Symbol::b1, Symbol::a0})) return;
    if (install_constraint(st)) return;
    if (solve_linear(st, {Symbol::lambda})) return;
    result.unresolved.push_back(st.assumptions);
  }

  bool branch_on_roots(const State& st) {
    for (Symbol x : {Symbol::a1, Symbol::b1}) {
      for (const auto& e : st.eqs) {
        if (!only_depends_on(e, x)) continue;
        const auto roots = rational_roots(e, x);
        ParamPoly rest = e;
        for (const auto& root : roots) {
          const ParamPoly factor = ParamPoly::symbol(x) - ParamPoly(root);
          for (;;) {
            auto [q, rem] = rest.divmod(factor, x);
            if (!rem.is_zero()) break;
            rest = q;
          }
        }
        if (rest.depends_on(x)) {
          auto path = st.assumptions;
          path.push_back("irrational roots of " + rest.to_string());
          result.unresolved.push_back(path);
        }
        for (const auto& root : roots) {
          if (st.nonzero_symbols.count(x) && root.is_zero()) continue;
          run(substitute(st, x, ParamPoly(root), assignment_note(x, ParamPoly(root))));
        }
        return true;
      }
    }
    return false;
  }

  bool solve_linear(const State& st, std::initializer_list<Symbol> order) {
    for (Symbol x : order) {
      for (const auto& e : st.eqs) {
        if (e.degree(x) != 1) continue;
        const auto c = e.coefficients_in(x);
        if (!c[1].is_constant()) continue;
        const ParamPoly value = c[0] * (-c[1].constant_value().inverse());
        run(substitute(st, x, value, assignment_note(x, value)));
        return true;
      }
    }
    return false;
  }

  bool install_constraint(const State& st) {
    for (const auto& c : st.constraints) {
      if (c.variable == Symbol::a0) return false;
    }
    for (const auto& e : st.eqs) {
      if (e.degree(Symbol::a0) != 2) continue;
      if (e.depends_on(Symbol::a1) || e.depends_on(Symbol::b1)) continue;
      const auto c = e.coefficients_in(Symbol::a0);
      if (!c[2].is_constant()) continue;
      State next = st;
      next.constraints.push_back({Symbol::a0, e});
      next.assumptions.push_back(e.to_string() + " = 0 (constraint on a0)");
      run(std::move(next));
      return true;
    }
    return false;
  }
};

bool is_trivial(const State& st) {
  for (Symbol s : {Symbol::a1, Symbol::b1}) {
    auto it = st.assign.find(s);
    if (it == st.assign.end() || !it->second.is_zero()) return false;
  }
  return true;
}

}  // namespace

std::vector<GaussianRational> rational_roots(const ParamPoly& poly, Symbol variable) {
  const auto c = poly.coefficients_in(variable);
  std::vector<GaussianRational> coeffs;
  for (const auto& ci : c) {
    if (!ci.is_constant()) throw std::invalid_argument("rational_roots: non-constant coefficient in " + poly.to_string());
    coeffs.push_back(ci.constant_value());
  }
  std::vector<GaussianRational> roots;
  std::size_t low = 0;
  while (low < coeffs.size() && coeffs[low].is_zero()) ++low;
  if (low > 0) roots.emplace_back(0);
  coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(low));
  if (coeffs.size() < 2) return roots;
  for (const Complex& z : numeric_roots(coeffs)) {
    const GaussianRational cand(rationalize(z.real()), rationalize(z.imag()));
    if (!poly.substitute(variable, ParamPoly(cand)).is_zero()) continue;
    if (std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
  }
  return roots;
}

std::vector<HighComplex> surd_roots(const std::vector<HighComplex>& c) {
  if (c.size() == 2) return {-c[0] / c[1]};
  if (c.size() == 3) {
    const HighComplex disc = sqrt(c[1] * c[1] - HighComplex(4) * c[2] * c[0]);
    // Root order: the "-" sign first.
    return {(-c[1] - disc) / (HighComplex(2) * c[2]), (-c[1] + disc) / (HighComplex(2) * c[2])};
  }
  throw std::invalid_argument("surd_roots supports degree 1 and 2 only");
}

std::vector<HighAssignment> instantiate(const SolutionBranch& branch, const HighComplex& r, const HighComplex& lambda,
                                        const std::map<Symbol, HighComplex>& free_values) {
  HighAssignment base;
  for (auto& v : base) v = HighComplex(0);
  base[sym::index_of(Symbol::e)] = HighComplex(branch.e_val);
  base[sym::index_of(Symbol::rho)] = HighComplex(branch.rho_val);
  for (Symbol s : branch.free_symbols) {
    auto it = free_values.find(s);
    base[sym::index_of(s)] = it != free_values.end() ? it->second : HighComplex(1);
  }
  if (!branch.assignments.count(Symbol::r)) base[sym::index_of(Symbol::r)] = r;
  if (!branch.assignments.count(Symbol::lambda)) base[sym::index_of(Symbol::lambda)] = lambda;

  std::vector<HighAssignment> points{base};
  for (const auto& c : branch.constraints) {
    std::vector<HighAssignment> next;
    for (const auto& p : points) {
      std::vector<HighComplex> coeffs;
      for (const auto& ci : c.poly.coefficients_in(c.variable)) coeffs.push_back(ci.evaluate(p));
      for (const auto& root : surd_roots(coeffs)) {
        HighAssignment q = p;
        q[sym::index_of(c.variable)] = root;
        next.push_back(q);
      }
    }
    points = std::move(next);
  }
  for (auto& p : points) {
    HighAssignment known = p;
    for (const auto& [s, v] : branch.assignments) p[sym::index_of(s)] = v.evaluate(known);
  }
  return points;
}

SolveResult solve_m1(const AlgebraicSystem& system, int e_val, int rho_val, const SolveOptions& options) {
  if ((e_val != 1 && e_val != -1) || (rho_val != 1 && rho_val != -1)) {
    throw std::invalid_argument("e and rho must be +1 or -1");
  }
  for (const auto& eq : system.equations) {
    for (Symbol s : {Symbol::a2, Symbol::b2, Symbol::a3, Symbol::b3, Symbol::a4, Symbol::b4}) {
      if (eq.depends_on(s)) throw std::invalid_argument("solve_m1 requires the m = 1 system; m >= 2 is out of scope");
    }
  }
  const ParamPoly rho_poly(static_cast<long>(rho_val));
  State root;
  for (const auto& eq : system.equations) {
    root.eqs.push_back(eq.substitute(Symbol::e, ParamPoly(static_cast<long>(e_val))).substitute(Symbol::rho, rho_poly));
  }
  root.assumptions.push_back("e = " + std::to_string(e_val));
  root.assumptions.push_back("rho = " + std::to_string(rho_val));

  Search search{e_val, rho_val, {}, {}};
  const ParamPoly mu2rho = ParamPoly::symbol(Symbol::mu, 2) + rho_poly;
  {
    State st = root;
    st.nonzero_factors.push_back(mu2rho);
    st.assumptions.push_back("mu^2 + rho != 0");
    search.run(std::move(st));
  }
  for (const auto& mu : rational_roots(mu2rho, Symbol::mu)) {
    State st = substitute(root, Symbol::mu, ParamPoly(mu), "mu^2 + rho = 0, mu = " + mu.to_string());
    search.run(substitute(st, Symbol::b1, ParamPoly(), "b1 = 0"));
    State nz = st;
    nz.nonzero_symbols.insert(Symbol::b1);
    nz.assumptions.push_back("b1 != 0");
    search.run(std::move(nz));
  }

  SolveResult result = std::move(search.result);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> u_r(1.0, 4.0), u_l(-2.0, 2.0), u_f(-1.5, 1.5);
  bool trivial_emitted = false;
  for (const State& st : search.solved) {
    const bool trivial = is_trivial(st);
    if (trivial && trivial_emitted) continue;
    SolutionBranch b;
    b.e_val = e_val;
    b.rho_val = rho_val;
    b.assignments = st.assign;
    b.constraints = st.constraints;
    b.assumptions = st.assumptions;
    for (Symbol s : {Symbol::a0, Symbol::mu, Symbol::r, Symbol::lambda}) {
      bool constrained = std::any_of(b.constraints.begin(), b.constraints.end(),
                                     [&](const ResidualConstraint& c) { return c.variable == s; });
      if (!b.assignments.count(s) && !constrained) b.free_symbols.push_back(s);
    }
    double worst = 0.0;
    for (unsigned k = 0; k < options.certificate_samples; ++k) {
      std::map<Symbol, HighComplex> free;
      for (Symbol s : b.free_symbols) free[s] = HighComplex(u_f(rng));
      const HighComplex r(u_r(rng));
      const HighComplex lambda(u_l(rng));
      for (const auto& p : instantiate(b, r, lambda, free)) {
        for (const auto& eq : system.equations) worst = std::max(worst, relative_residual(eq, p).convert_to<double>());
      }
    }
    b.certificate_residual = worst;
    b.certificate_samples = options.certificate_samples;
    if (worst > options.certificate_tolerance) {
      auto path = b.assumptions;
      path.push_back("annihilation certificate failed");
      result.unresolved.push_back(path);
      continue;
    }
    if (trivial) trivial_emitted = true;
    b.id = "e" + std::to_string(e_val) + "_rho" + std::to_string(rho_val) + "_b" + std::to_string(result.branches.size() + 1);
    result.branches.push_back(std::move(b));
  }
  return result;
}

}  // namespace cdg::gen
