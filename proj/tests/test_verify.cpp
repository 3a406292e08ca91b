#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cdgkit/sysgen/solver.hpp"
#include "cdgkit/verify/verify.hpp"

using namespace cdg;
using namespace cdg::ver;
using cat::build_solution;
using cat::find_family;

namespace {

const PdeCoefficients kCdg = PdeCoefficients::from(red::KdV5Params::cdg());

const gen::AlgebraicSystem& cdg_system() {
  static const gen::AlgebraicSystem s = gen::generate_system(red::reduce_to_ode(red::KdV5Params::cdg()), 1);
  return s;
}

std::vector<GridPoint> grid_for(const ClosedForm& u, std::uint64_t seed = 7) { return regular_grid(u, GridSpec{}, seed); }

}  // namespace

TEST_CASE("constants have zero residual under both oracles") {
  const ClosedForm u(cat::Formula::parse("7/10"), cat::Formula(), 1.0, 0.3);
  const auto grid = grid_for(u);
  const ResidualReport rep = residual_report(u, kCdg, grid);
  REQUIRE(rep.points.size() == 40);
  for (const auto& p : rep.points) {
    CHECK(p.verdict == PointVerdict::pass);
    CHECK(p.value[0].residual == 0.0);
    CHECK(p.value[1].residual == 0.0);
  }
  CHECK(rep.verdict == PointVerdict::pass);
  CHECK(rep.max_rel() == 0.0);
}

TEST_CASE("T3R6 at lambda = 1/4 passes both oracles on a 40-point grid") {
  const ClosedForm u = build_solution(find_family("T3R6"), 0.25);
  const auto grid = grid_for(u);
  const ResidualReport rep = residual_report(u, kCdg, grid);
  CHECK(rep.verdict == PointVerdict::pass);
  CHECK(rep.stats(Oracle::jet).max_rel < 1e-6);
  CHECK(rep.stats(Oracle::fd).max_rel < 1e-6);
  CHECK(rep.stats(Oracle::jet).skipped == 0);
  CHECK(rep.stats(Oracle::fd).skipped == 0);
  for (const auto& g : grid) {
    CHECK(g.x >= -10.0);
    CHECK(g.x <= 10.0);
    CHECK(g.t >= 0.0);
    CHECK(g.t <= 1.0);
  }
}

TEST_CASE("a1 perturbed by 10% fails") {
  const ClosedForm u = build_solution(find_family("T3R6"), 0.25).with_shape_scale(1.1);
  const ResidualReport rep = residual_report(u, kCdg, grid_for(u));
  CHECK(rep.verdict == PointVerdict::fail);
  CHECK(rep.stats(Oracle::jet).max_rel > 1e-2);
  CHECK(rep.stats(Oracle::fd).max_rel > 1e-2);
  const PointResidual& w = rep.worst_point();
  CHECK(w.verdict == PointVerdict::fail);
}

TEST_CASE("jet and FD agree term by term on T4R6") {
  const ClosedForm u = build_solution(find_family("T4R6"), 0.6);
  for (const auto& g : grid_for(u, 3)) {
    const PdeTerms a = jet_terms(u, kCdg, g.x, g.t);
    const PdeTerms b = fd_terms(u, kCdg, g.x, g.t, kDefaultFdStep);
    const double scale = combine_terms(a).scale;
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(std::fabs(a[k] - b[k]) <= 1e-5 * scale);
  }
}

TEST_CASE("FD skips points too close to a pole for its step") {
  const ClosedForm u = build_solution(find_family("T4R5"), 1.0);  // csch: pole at xi = 0
  const std::vector<GridPoint> grid = {{0.3, 0.0}, {3.0, 0.5}};
  const ResidualReport rep = residual_report(u, kCdg, grid, 0.05);
  CHECK(rep.points[0].verdict == PointVerdict::singular_skipped);
  CHECK(rep.points[0].has[0]);
  CHECK_FALSE(rep.points[0].has[1]);
  CHECK(rep.stats(Oracle::fd).skipped == 1);
  CHECK(rep.points[1].verdict != PointVerdict::singular_skipped);
  CHECK_THROWS_AS(fd_residual(u, kCdg, {{0.3, 0.0}}, 0.05), DomainError);
  CHECK_THROWS_AS(pde_residual(u, kCdg, {{-1.0, 1.0}}), DomainError);  // xi = 0
}

TEST_CASE("residuals scale with the coefficient vector") {
  const ClosedForm u = build_solution(find_family("T3R1"), 0.1, 1.2);
  const auto grid = grid_for(u);
  for (double c : {2.0, -3.0}) {
    const ClosedForm v = u.with_speed(c * u.lambda());
    const PdeCoefficients pc = kCdg.scaled(c);
    for (const auto& g : grid) {
      const double base = combine_terms(jet_terms(u, kCdg, g.x, g.t)).residual;
      const double scaled = combine_terms(jet_terms(v, pc, g.x, g.t / c)).residual;
      const double scale = combine_terms(jet_terms(u, kCdg, g.x, g.t)).scale;
      CHECK(std::fabs(scaled - c * base) <= 1e-13 * std::fabs(c) * scale);
      if (c == 2.0) CHECK(scaled == 2.0 * base);  // powers of two scale exactly
    }
  }
}

TEST_CASE("Riccati cases satisfy the ODEs and the first integral") {
  using cat::CaseId;
  SUBCASE("Case III, mu = 0, r = 1") {
    const cat::RiccatiParams p{-1, -1, 0.0, 1.0};
    const auto xs = regular_xi_grid(CaseId::III, p, 50, -5, 5, kGridMargin, 1);
    CHECK(check_riccati_and_integral(CaseId::III, p, xs).max() < 1e-12);
  }
  SUBCASE("Case IV, mu = 1/2, r = 2") {
    const cat::RiccatiParams p{-1, 1, 0.5, 2.0};
    const auto xs = regular_xi_grid(CaseId::IV, p, 50, -5, 5, kGridMargin, 2);
    const RiccatiDeviation d = check_riccati_and_integral(CaseId::IV, p, xs);
    CHECK(d.points == 50);
    CHECK(d.max() < 1e-9);
  }
  SUBCASE("Case II, mu = 1/3, r = 1") {
    const cat::RiccatiParams p{1, -1, 1.0 / 3, 1.0};
    for (CaseId c : {CaseId::II_sec, CaseId::II_csc}) {
      const auto xs = regular_xi_grid(c, p, 50, -5, 5, kGridMargin, 3);
      CHECK(check_riccati_and_integral(c, p, xs).max() < 1e-9);
    }
  }
  SUBCASE("Case I") {
    for (int e : {1, -1}) {
      const cat::RiccatiParams p{e, 1, 0.0, 0.0, 1.5};
      const auto xs = regular_xi_grid(CaseId::I, p, 50, -5, 5, kGridMargin, 4);
      const RiccatiDeviation d = check_riccati_and_integral(CaseId::I, p, xs);
      CHECK(d.max() < 1e-12);
      CHECK(std::isnan(d.first_integral));
    }
  }
  SUBCASE("wrong parameters are caught") {
    CHECK_THROWS_AS(check_riccati_and_integral(CaseId::III, {1, -1, 0.0, 1.0}, {0.5}), DomainError);
    // Case II sigma with the Case IV signs breaks the first integral.
    const auto [s, t] = cat::sigma_tau(CaseId::II_sec, {1, -1, 0.0, 1.0}, 0.4);
    CHECK(std::fabs(t * t - (1.0 - s * s)) > 1e-3);
  }
}

TEST_CASE("annihilation: constants and the solver branch") {
  gen::HighAssignment a;
  a.fill(HighComplex(0));
  a[sym::index_of(sym::Symbol::a0)] = HighComplex(1);
  a[sym::index_of(sym::Symbol::mu)] = HighComplex(0.3);
  a[sym::index_of(sym::Symbol::r)] = HighComplex(2);
  a[sym::index_of(sym::Symbol::lambda)] = HighComplex(-0.7);
  a[sym::index_of(sym::Symbol::e)] = HighComplex(1);
  a[sym::index_of(sym::Symbol::rho)] = HighComplex(-1);
  const AnnihilationResult c = annihilation_check(cdg_system(), a);
  CHECK(c.residuals.size() == 13);
  CHECK(c.max_rel == 0.0);

  const gen::SolveResult solved = gen::solve_m1(cdg_system(), 1, -1);
  std::size_t checked = 0;
  for (const auto& b : solved.branches) {
    if (b.constraints.empty()) continue;
    for (const auto& point : gen::instantiate(b, HighComplex(3), HighComplex(1))) {
      CHECK(annihilation_check(cdg_system(), point).max_rel < 1e-10);
      ++checked;
    }
  }
  CHECK(checked >= 4);
}

TEST_CASE("T1R1 as printed leaves the top a1 group nonzero") {
  const auto& f = find_family("T1R1");
  CHECK(f.rho_printed == 1);
  const cat::Instance inst = cat::instantiate(f, 0.2, 1.1);
  const AnnihilationResult printed = annihilation_check(cdg_system(), printed_assignment(f, inst));
  const auto& prov = cdg_system().provenance;
  const auto it = std::find(prov.begin(), prov.end(), std::pair<unsigned, unsigned>{5, 1});
  REQUIRE(it != prov.end());
  CHECK(printed.residuals[static_cast<std::size_t>(it - prov.begin())] > 0.5);
  CHECK(annihilation_check(cdg_system(), effective_assignment(f, inst)).max_rel < 1e-40);
}

TEST_CASE("verify_all covers every family with consistent reports") {
  const CatalogReport rep = verify_all();
  REQUIRE(rep.families.size() == 21);
  CHECK(rep.pass_count + rep.fail_count + rep.unresolved_count == 21);
  for (std::size_t i = 0; i < 21; ++i) CHECK(rep.families[i].family_id == cat::list_families()[i].id);
  for (const auto& f : rep.families) {
    CAPTURE(f.family_id);
    REQUIRE(f.samples.size() == 2);
    if (f.verdict == Verdict::pass) {
      for (const auto& s : f.samples) {
        CHECK(s.residual.points.size() == 40);
        CHECK(s.residual.stats(Oracle::jet).max_rel < 1e-6);
        CHECK(s.residual.stats(Oracle::fd).max_rel < 1e-6);
      }
      CHECK(f.samples[0].instance.lambda != f.samples[1].instance.lambda);
      REQUIRE(f.negative_control);
      CHECK(f.negative_control->flipped);
      CHECK(f.negative_control->max_rel > 1e-3);
    }
    if (f.verdict == Verdict::fail) {
      const auto [i, p] = f.worst();
      REQUIRE(p != nullptr);
      CHECK(p->verdict == PointVerdict::fail);
      CHECK(f.message.find("worst point") != std::string::npos);
    }
  }
  for (const auto& f : rep.families) {
    if (cat::find_family(f.family_id).bounded) CHECK(f.verdict == Verdict::pass);
  }
}

TEST_CASE("verification is deterministic and honours explicit instances") {
  const auto& f = find_family("T3R6");
  VerifyOptions opt;
  const FamilyReport a = verify_family(f, opt);
  const FamilyReport b = verify_family(f, opt);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].instance.lambda == b.samples[i].instance.lambda);
    CHECK(a.samples[i].residual.max_rel() == b.samples[i].residual.max_rel());
  }
  const FamilyReport c = verify_family(f, opt, {cat::instantiate(f, 0.25, std::nullopt)});
  CHECK(c.verdict == Verdict::pass);
  CHECK(c.samples.size() == 1);
  opt.seed = 99;
  CHECK(verify_family(f, opt).samples[0].instance.lambda != a.samples[0].instance.lambda);
}

TEST_CASE("the printed T2R4 form fails") {
  const FamilyReport r = verify_family(find_family("T2R4"), VerifyOptions{});
  CHECK(r.verdict == Verdict::fail);
  CHECK_FALSE(r.negative_control.has_value());
}

TEST_CASE("gamma = 0 solver families satisfy their PDE") {
  red::KdV5Params pde{sym::Rational(1), sym::Rational(30), sym::Rational(30), sym::Rational(0)};
  const gen::AlgebraicSystem sys = gen::generate_system(red::reduce_to_ode(pde), 1);
  VerifyOptions opt;
  opt.pde = pde;
  std::size_t verified = 0;
  for (int e : {1, -1}) {
    for (int rho : {1, -1}) {
      if (e == 1 && rho == 1) continue;
      for (const auto& b : gen::solve_m1(sys, e, rho).branches) {
        cat::SolutionFamily f;
        try {
          f = cat::family_from_branch(b);
        } catch (const DomainError&) {
          continue;
        }
        CAPTURE(f.id);
        const FamilyReport rep = verify_family(f, opt);
        CHECK(rep.verdict == Verdict::pass);
        ++verified;
      }
    }
  }
  CHECK(verified >= 1);
}

TEST_CASE("plot data lists x, u and the residual") {
  const ClosedForm u = build_solution(find_family("T4R5"), 1.0);
  const std::string text = plot_data(u, kCdg, 0.0, -1.0, 1.0, 5);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "x\tu\tresidual");
  std::size_t rows = 0, nan_rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    if (line.find("nan") != std::string::npos) ++nan_rows;
  }
  CHECK(rows == 5);
  CHECK(nan_rows == 1);  // x = 0
}
