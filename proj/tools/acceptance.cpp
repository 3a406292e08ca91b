// Acceptance run: one PASS/FAIL line per criterion, with the tolerance and
// the wall time against its limit. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "cdgkit/io/json_io.hpp"
#include "cdgkit/symkernel/parse.hpp"
#include "cdgkit/symkernel/sigma_tau_expr.hpp"
#include "cdgkit/sysgen/solver.hpp"

using namespace cdg;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int n, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  const bool ok = o.pass && secs < limit_s;
  if (!ok) ++failures;
  std::printf("CRITERION %d %s  %-24s %s; %.3f s (limit %g s)\n", n, ok ? "PASS" : "FAIL", name, o.detail.c_str(),
              secs, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const gen::AlgebraicSystem& cdg_system() {
  static const gen::AlgebraicSystem sys = gen::generate_system(red::reduce_to_ode(red::KdV5Params::cdg()), 1);
  return sys;
}

Outcome regeneration() {
  const gen::AlgebraicSystem& sys = cdg_system();
  const auto ref = gen::load_reference_system(gen::default_reference_path());
  const gen::MatchReport rep = gen::check_structural_match(sys, ref, 24, 20240611);
  std::set<std::size_t> used;
  bool factors_nonzero = true;
  for (const auto& e : rep.entries) {
    factors_nonzero = factors_nonzero && !e.factor.is_zero();
    if (e.generated_index) used.insert(*e.generated_index);
  }
  std::ostringstream os;
  os << "generated " << sys.size() << " groups, " << used.size() << "/" << rep.entries.size()
     << " reference equations proportional at " << rep.points << " points";
  return {sys.size() == 13 && rep.entries.size() == 13 && rep.all_matched() && used.size() == 13 &&
              rep.points >= 20 && factors_nonzero,
          os.str()};
}

Outcome first_integral() {
  using sym::ParamPoly;
  using sym::RiccatiPolynomial;
  using sym::Symbol;
  const ParamPoly e = ParamPoly::symbol(Symbol::e), mu = ParamPoly::symbol(Symbol::mu),
                  r = ParamPoly::symbol(Symbol::r), rho = ParamPoly::symbol(Symbol::rho);
  const ParamPoly two(sym::GaussianRational(sym::make_rational(2, 1)));
  const RiccatiPolynomial sigma = RiccatiPolynomial::sigma(), tau = RiccatiPolynomial::tau();
  // r times the invariant, so every coefficient is polynomial.
  const RiccatiPolynomial invariant = RiccatiPolynomial(r) * tau * tau + RiccatiPolynomial(e * r * r) -
                                      RiccatiPolynomial(two * e * mu * r) * sigma +
                                      RiccatiPolynomial(e * (mu * mu + rho)) * sigma * sigma;
  const sym::SigmaTauExpr d = invariant.xi_derivative().to_normal_form();
  const bool raw_nonzero = !d.is_zero();
  const bool reduced_zero = d.reduce_involutions().is_zero();
  return {raw_nonzero && reduced_zero, std::string("d/dxi invariant ") + (reduced_zero ? "== 0" : "!= 0") +
                                           " after e^2 -> 1, rho^2 -> 1 (exact)"};
}

Outcome balancing() {
  const gen::BalanceReport rep = gen::balance_degrees(red::reduce_to_ode(red::KdV5Params::cdg()));
  std::string ms;
  for (unsigned m : rep.admissible_m) ms += (ms.empty() ? "" : ", ") + std::to_string(m);
  return {rep.admissible_m == std::set<unsigned>{1, 2}, "admissible m = {" + ms + "}, expected {1, 2}"};
}

Outcome solver() {
  const double tol = 1e-10;
  const gen::SolveResult res = gen::solve_m1(cdg_system(), 1, -1);
  const sym::ParamPoly constraint = sym::parse_param_poly("180*a0^2 - 30*a0*r + r^2 + lambda");
  double worst_residual = 0, worst_root = 0;
  int found = 0;
  bool ok = true;
  for (long mu : {-1L, 1L}) {
    // a1 = -mu e / 2 with e = 1.
    const sym::ParamPoly want_mu(sym::GaussianRational(sym::make_rational(mu, 1)));
    const sym::ParamPoly want_a1(sym::GaussianRational(sym::make_rational(-mu, 2)));
    for (const auto& b : res.branches) {
      const auto m = b.assignments.find(sym::Symbol::mu);
      const auto a = b.assignments.find(sym::Symbol::a1);
      const auto b1 = b.assignments.find(sym::Symbol::b1);
      if (m == b.assignments.end() || a == b.assignments.end() || m->second != want_mu || a->second != want_a1) {
        continue;
      }
      ++found;
      ok = ok && b1 != b.assignments.end() && b1->second.is_zero();
      ok = ok && b.constraints.size() == 1 && b.constraints[0].variable == sym::Symbol::a0 &&
           b.constraints[0].poly == constraint;
      for (const auto& [r, lambda] : {std::pair{3.0, 1.0}, std::pair{2.0, -1.0}}) {
        const auto points = gen::instantiate(b, HighComplex(r), HighComplex(lambda));
        ok = ok && points.size() == 2;
        const double surd = std::sqrt(5.0) * std::sqrt(r * r - 4 * lambda);
        const double roots[] = {(5 * r - surd) / 60, (5 * r + surd) / 60};
        for (std::size_t k = 0; k < points.size() && k < 2; ++k) {
          const HighComplex a0 = points[k][sym::index_of(sym::Symbol::a0)];
          const double dev = std::abs(a0.real().convert_to<double>() - roots[k]) / std::max(1.0, std::fabs(roots[k])) +
                             std::abs(a0.imag().convert_to<double>());
          worst_root = std::max(worst_root, dev);
          for (const auto& eq : cdg_system().equations) {
            worst_residual = std::max(worst_residual, gen::relative_residual(eq, points[k]).convert_to<double>());
          }
        }
      }
    }
  }
  ok = ok && found == 2 && worst_residual < tol && worst_root < 1e-12;
  return {ok, "branches mu = +-1 found " + std::to_string(found) + "/2, a0 root deviation" + fmt(" %.2e", worst_root) +
                  ", max annihilation" + fmt(" %.2e", worst_residual) + " (tol 1e-10)"};
}

ver::CatalogReport catalog_report;

Outcome catalog() {
  const ver::VerifyOptions opt;
  catalog_report = ver::verify_all(opt);
  const auto& fams = catalog_report.families;
  std::size_t bounded_pass = 0, bounded = 0;
  double worst_pass = 0;
  bool consistent = fams.size() == cat::list_families().size() && fams.size() == 21;
  for (const auto& r : fams) {
    const cat::SolutionFamily& f = cat::find_family(r.family_id);
    consistent = consistent && r.samples.size() == opt.samples;
    for (const auto& s : r.samples) consistent = consistent && s.residual.points.size() == opt.grid.points;
    if (f.bounded) {
      ++bounded;
      if (r.verdict == ver::Verdict::pass) ++bounded_pass;
    }
    if (r.verdict == ver::Verdict::pass) {
      for (const auto& s : r.samples) {
        for (ver::Oracle o : {ver::Oracle::jet, ver::Oracle::fd}) {
          const auto& st = s.residual.stats(o);
          consistent = consistent && st.evaluated > 0 && st.max_rel < opt.tolerance;
          worst_pass = std::max(worst_pass, st.max_rel);
        }
      }
    } else if (r.verdict == ver::Verdict::fail) {
      // A FAIL must name a worst point whose residual exceeds the tolerance.
      const auto [i, p] = r.worst();
      consistent = consistent && p != nullptr && !r.message.empty() && r.samples[i].residual.max_rel() > opt.tolerance;
    }
  }
  std::ostringstream os;
  os << catalog_report.pass_count << " PASS, " << catalog_report.fail_count << " FAIL, "
     << catalog_report.unresolved_count << " UNRESOLVED; bounded " << bounded_pass << "/" << bounded
     << " PASS; worst PASS max_rel" << fmt(" %.2e", worst_pass) << " (tol 1e-6, both oracles, 40 points x 2 samples)";
  for (const auto& r : fams) {
    if (r.verdict == ver::Verdict::fail) os << "; " << r.family_id << " FAIL as printed";
  }
  return {consistent && bounded_pass == bounded, os.str()};
}

Outcome negative_controls() {
  const ver::VerifyOptions opt;
  const ver::PdeCoefficients coeffs = ver::PdeCoefficients::from(opt.pde);
  std::size_t tried = 0, flipped = 0;
  double weakest = INFINITY;
  for (const auto& r : catalog_report.families) {
    if (r.verdict != ver::Verdict::pass) continue;
    ++tried;
    const cat::SolutionFamily& f = cat::find_family(r.family_id);
    const ver::SampleReport& s = r.samples.front();
    const cat::ClosedForm exact(f.offset, f.shape, s.instance.r, s.instance.lambda);
    const auto grid = ver::regular_grid(exact, opt.grid, s.grid_seed);
    const ver::ResidualReport nr = ver::residual_report(exact.with_shape_scale(1.1), coeffs, grid, opt.fd_step,
                                                        opt.tolerance);
    const double m = std::min(nr.stats(ver::Oracle::jet).max_rel, nr.stats(ver::Oracle::fd).max_rel);
    weakest = std::min(weakest, m);
    if (nr.verdict == ver::PointVerdict::fail && m > 1e-3) ++flipped;
  }
  return {tried > 0 && flipped == tried, std::to_string(flipped) + "/" + std::to_string(tried) +
                                             " PASS families flip under a1 x 1.1; smallest max_rel" +
                                             fmt(" %.2e", weakest) + " (threshold 1e-3)"};
}

Outcome riccati() {
  using cat::CaseId;
  struct Check {
    CaseId c;
    cat::RiccatiParams p;
    double tol;
  };
  const Check checks[] = {
      {CaseId::II_sec, {1, -1, 1.0 / 3, 1.0}, 1e-9}, {CaseId::II_csc, {1, -1, 1.0 / 3, 1.0}, 1e-9},
      {CaseId::III, {-1, -1, 0.25, 1.5}, 1e-9},      {CaseId::IV, {-1, 1, 0.5, 2.0}, 1e-9},
      {CaseId::I, {1, 1, 0.0, 0.0, 1.5}, 1e-12},     {CaseId::I, {-1, 1, 0.0, 0.0, -0.7}, 1e-12},
  };
  bool ok = true;
  double worst_ii_iv = 0, worst_i = 0;
  std::uint64_t seed = 1;
  for (const auto& k : checks) {
    const auto xs = ver::regular_xi_grid(k.c, k.p, 50, -5, 5, ver::kGridMargin, seed++);
    const ver::RiccatiDeviation d = ver::check_riccati_and_integral(k.c, k.p, xs);
    const double dev = d.max();
    ok = ok && d.points == 50 && dev < k.tol;
    (k.c == CaseId::I ? worst_i : worst_ii_iv) = std::max(k.c == CaseId::I ? worst_i : worst_ii_iv, dev);
  }
  return {ok, "Cases II-IV ODE + first integral" + fmt(" %.2e", worst_ii_iv) + " (tol 1e-9), Case I ODE" +
                  fmt(" %.2e", worst_i) + " (tol 1e-12), 50 points each"};
}

Outcome simulation() {
  sim::SimConfig c;  // T3R6, lambda = 1/4, [-20 pi, 20 pi], n = 512, t_end = 1
  const sim::SimMetrics m = sim::run(c);
  const bool ok = m.linf_error < 1e-4 && m.speed_rel_error < 0.01 && m.order_ratio && *m.order_ratio >= 12 &&
                  *m.order_ratio <= 20;
  return {ok, "Linf" + fmt(" %.2e", m.linf_error) + " (tol 1e-4), speed" + fmt(" %.6f", m.peak_speed) +
                  " vs -0.25, rel" + fmt(" %.1e", m.speed_rel_error) + " (tol 1e-2), dt ratio" +
                  fmt(" %.2f", m.order_ratio.value_or(NAN)) + " (range [12, 20])"};
}

}  // namespace

int main() {
  report(1, "system regeneration", 10, regeneration);
  report(2, "first integral", 1, first_integral);
  report(3, "balancing", 1, balancing);
  report(4, "solver reproduction", 10, solver);
  report(5, "catalog verification", 60, catalog);
  report(6, "negative controls", 10, negative_controls);
  report(7, "Riccati cases", 5, riccati);
  report(8, "simulation", 120, simulation);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures;
}
