#include "cdgkit/verify/verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "cdgkit/sysgen/sysgen.hpp"

namespace cdg::ver {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t idx(Oracle o) { return static_cast<std::size_t>(o); }

/// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit(rng); }

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t mix(std::uint64_t seed, const std::string& id, std::uint64_t k) {
  return seed ^ fnv1a(id) ^ (0x9e3779b97f4a7c15ull * (k + 1));
}

/// Central difference stencils of second order for d^k/dx^k, k = 1..5,
/// at offsets -3..3 (index 3 is the centre).
constexpr std::array<std::array<int, 7>, 5> kStencil = {{
    {0, 0, -1, 0, 1, 0, 0},
    {0, 0, 2, -4, 2, 0, 0},
    {0, -1, 2, 0, -2, 1, 0},
    {0, 2, -8, 12, -8, 2, 0},
    {-1, 4, -5, 0, 5, -4, 1},
}};
// Each stencil sums to 2 h^k times the derivative.

std::array<HighReal, 5> fd_dx(const ClosedForm& u, const HighReal& x, const HighReal& t, const HighReal& h) {
  std::array<HighReal, 7> f;
  for (int j = -3; j <= 3; ++j) f[j + 3] = u.evaluate_high(x + HighReal(j) * h, t);
  std::array<HighReal, 5> d;
  HighReal hk = 1;
  for (std::size_t k = 0; k < 5; ++k) {
    hk *= h;
    // Stencils sum to zero, so differences from the centre value cancel
    // exactly for constants.
    HighReal s = 0;
    for (std::size_t j = 0; j < 7; ++j) {
      if (kStencil[k][j] != 0) s += HighReal(kStencil[k][j]) * (f[j] - f[3]);
    }
    d[k] = s / (2 * hk);
  }
  return d;
}

HighReal fd_dt(const ClosedForm& u, const HighReal& x, const HighReal& t, const HighReal& h) {
  return (u.evaluate_high(x, t + h) - u.evaluate_high(x, t - h)) / (2 * h);
}

enum : unsigned { kJet = 1, kFd = 2 };

ResidualReport run_oracles(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid, double h,
                           double tolerance, unsigned which) {
  if (which & kFd && !(h > 0)) throw std::invalid_argument("finite-difference step must be positive");
  ResidualReport rep;
  rep.lambda = u.lambda();
  rep.r = u.r();
  rep.tolerance = tolerance;
  rep.fd_step = (which & kFd) ? h : 0.0;
  rep.points.reserve(grid.size());
  const double fd_clearance = 8.0 * h * std::max(1.0, std::fabs(u.speed()));
  for (const auto& g : grid) {
    PointResidual pr;
    pr.x = g.x;
    pr.t = g.t;
    const cat::PoleScan scan = u.pole_scan(g.x, g.t);
    if ((which & kJet) && scan.regular(cat::kPoleMargin)) {
      pr.has[idx(Oracle::jet)] = true;
      pr.value[idx(Oracle::jet)] = combine_terms(jet_terms(u, p, g.x, g.t));
    }
    if ((which & kFd) && scan.regular(fd_clearance)) {
      pr.has[idx(Oracle::fd)] = true;
      pr.value[idx(Oracle::fd)] = combine_terms(fd_terms(u, p, g.x, g.t, h));
    }
    bool failed = false, skipped = false;
    for (Oracle o : {Oracle::jet, Oracle::fd}) {
      const unsigned bit = o == Oracle::jet ? kJet : kFd;
      if (!(which & bit)) continue;
      if (!pr.has[idx(o)]) {
        skipped = true;
      } else if (!(pr.value[idx(o)].rel <= tolerance)) {
        failed = true;
      }
    }
    pr.verdict = failed ? PointVerdict::fail : skipped ? PointVerdict::singular_skipped : PointVerdict::pass;
    rep.points.push_back(pr);
  }
  for (Oracle o : {Oracle::jet, Oracle::fd}) {
    const unsigned bit = o == Oracle::jet ? kJet : kFd;
    if (!(which & bit)) continue;
    OracleStats& st = rep.oracle[idx(o)];
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      const PointResidual& pr = rep.points[i];
      if (!pr.has[idx(o)]) {
        ++st.skipped;
        continue;
      }
      const TermResidual& v = pr.value[idx(o)];
      if (!st.evaluated || !(v.rel <= st.max_rel)) {
        st.max_rel = v.rel;
        st.worst_index = i;
      }
      st.max_abs = std::max(st.max_abs, std::fabs(v.residual));
      if (std::isnan(v.residual)) st.max_abs = kNaN;
      st.evaluated = true;
    }
    if (!st.evaluated) {
      throw DomainError(std::string("every grid point is singular for the ") + oracle_name(o) + " oracle");
    }
  }
  rep.verdict = PointVerdict::pass;
  for (const auto& pr : rep.points) {
    if (pr.verdict == PointVerdict::fail) rep.verdict = PointVerdict::fail;
  }
  return rep;
}

const gen::AlgebraicSystem& system_for(const red::KdV5Params& pde) {
  static const red::KdV5Params cdg = red::KdV5Params::cdg();
  static const gen::AlgebraicSystem cdg_system = gen::generate_system(red::reduce_to_ode(cdg), 1);
  if (pde == cdg) return cdg_system;
  thread_local gen::AlgebraicSystem other;
  thread_local std::optional<red::KdV5Params> other_params;
  if (!other_params || !(*other_params == pde)) {
    other = gen::generate_system(red::reduce_to_ode(pde), 1);
    other_params = pde;
  }
  return other;
}

HighComplex complex_of(const sym::GaussianRational& g) { return sym::coefficient_as<HighComplex>(g); }

}  // namespace

const char* oracle_name(Oracle o) { return o == Oracle::jet ? "jet" : "fd"; }

const char* point_verdict_name(PointVerdict v) {
  switch (v) {
    case PointVerdict::pass: return "PASS";
    case PointVerdict::fail: return "FAIL";
    case PointVerdict::singular_skipped: return "SINGULAR-SKIPPED";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::unresolved: return "UNRESOLVED";
  }
  return "?";
}

PdeCoefficients PdeCoefficients::from(const red::KdV5Params& p) {
  p.validate();
  return {p.omega.get_d(), p.alpha.get_d(), p.beta.get_d(), p.gamma.get_d()};
}

TermResidual combine_terms(const PdeTerms& terms) {
  TermResidual r;
  for (double v : terms) {
    r.residual += v;
    r.scale = std::max(r.scale, std::fabs(v));
  }
  if (r.scale == 0) {
    r.rel = r.residual == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    r.rel = std::fabs(r.residual) / r.scale;
  }
  if (!std::isfinite(r.residual)) r.rel = kNaN;
  return r;
}

PdeTerms jet_terms(const ClosedForm& u, const PdeCoefficients& p, double x, double t) {
  const cat::Jet j = u.jet(x, t);
  const double v = j.value;
  return {j.dt, p.omega * j.dx[4], p.alpha * v * j.dx[2], p.beta * j.dx[0] * j.dx[1], p.gamma * v * v * j.dx[0]};
}

PdeTerms fd_terms(const ClosedForm& u, const PdeCoefficients& p, double x, double t, double h) {
  const HighReal X(x), T(t), H(h), H2 = H / 2;
  const auto coarse = fd_dx(u, X, T, H);
  const auto fine = fd_dx(u, X, T, H2);
  std::array<HighReal, 5> d;
  for (std::size_t k = 0; k < 5; ++k) d[k] = (4 * fine[k] - coarse[k]) / 3;
  const HighReal ut = (4 * fd_dt(u, X, T, H2) - fd_dt(u, X, T, H)) / 3;
  const HighReal v = u.evaluate_high(X, T);
  const auto as_d = [](const HighReal& z) { return static_cast<double>(z); };
  return {as_d(ut), as_d(p.omega * d[4]), as_d(p.alpha * v * d[2]), as_d(p.beta * d[0] * d[1]),
          as_d(p.gamma * v * v * d[0])};
}

double ResidualReport::max_rel() const {
  double m = 0;
  for (const auto& st : oracle) {
    if (st.evaluated && !(st.max_rel <= m)) m = st.max_rel;
  }
  return m;
}

const PointResidual& ResidualReport::worst_point() const {
  const OracleStats& j = oracle[0];
  const OracleStats& f = oracle[1];
  if (!j.evaluated) return points.at(f.worst_index);
  if (!f.evaluated) return points.at(j.worst_index);
  return points.at(!(f.max_rel <= j.max_rel) ? f.worst_index : j.worst_index);
}

ResidualReport pde_residual(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid,
                            double tolerance) {
  return run_oracles(u, p, grid, 0.0, tolerance, kJet);
}

ResidualReport fd_residual(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid, double h,
                           double tolerance) {
  return run_oracles(u, p, grid, h, tolerance, kFd);
}

ResidualReport residual_report(const ClosedForm& u, const PdeCoefficients& p, const std::vector<GridPoint>& grid,
                               double h, double tolerance) {
  return run_oracles(u, p, grid, h, tolerance, kJet | kFd);
}

std::vector<GridPoint> regular_grid(const ClosedForm& u, const GridSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GridPoint> grid;
  grid.reserve(spec.points);
  const std::size_t budget = 1000 * std::max<std::size_t>(spec.points, 1);
  for (std::size_t tries = 0; grid.size() < spec.points; ++tries) {
    if (tries == budget) throw DomainError("no regular grid: too few points clear of poles");
    const double x = uniform(rng, spec.x_min, spec.x_max);
    const double t = uniform(rng, spec.t_min, spec.t_max);
    if (u.regular(x, t, spec.margin)) grid.push_back({x, t});
  }
  return grid;
}

double RiccatiDeviation::max() const {
  double m = std::max(sigma_ode, tau_ode);
  if (!std::isnan(first_integral)) m = std::max(m, first_integral);
  return m;
}

RiccatiDeviation check_riccati_and_integral(cat::CaseId c, const cat::RiccatiParams& p,
                                            const std::vector<double>& xi_grid) {
  cat::validate_case(c, p);
  using D = cat::Dual<double>;
  const double e = p.e_val, mu = p.mu, r = p.r, rho = p.rho_val;
  RiccatiDeviation dev;
  dev.first_integral = c == cat::CaseId::I ? kNaN : 0.0;
  for (double xi : xi_grid) {
    const auto [s, t] = cat::sigma_tau(c, p, D(xi, 1.0));
    dev.sigma_ode = std::max(dev.sigma_ode, std::fabs(s.d - e * s.v * t.v));
    dev.tau_ode = std::max(dev.tau_ode, std::fabs(t.d - (e * t.v * t.v - mu * s.v + r)));
    if (c != cat::CaseId::I) {
      const double inv = t.v * t.v + e * (r - 2 * mu * s.v + (mu * mu + rho) / r * s.v * s.v);
      dev.first_integral = std::max(dev.first_integral, std::fabs(inv));
    }
    ++dev.points;
  }
  return dev;
}

std::vector<double> regular_xi_grid(cat::CaseId c, const cat::RiccatiParams& p, std::size_t n, double lo, double hi,
                                    double margin, std::uint64_t seed) {
  cat::validate_case(c, p);
  std::mt19937_64 rng(seed);
  std::vector<double> xs;
  xs.reserve(n);
  const std::size_t budget = 1000 * std::max<std::size_t>(n, 1);
  for (std::size_t tries = 0; xs.size() < n; ++tries) {
    if (tries == budget) throw DomainError("no regular xi grid: too few points clear of poles");
    const double xi = uniform(rng, lo, hi);
    const cat::CasePoleScan scan = cat::case_pole_scan(c, p, xi);
    if (scan.min_denominator > 1e-6 && scan.min_distance > margin) xs.push_back(xi);
  }
  return xs;
}

AnnihilationResult annihilation_check(const gen::AlgebraicSystem& system, const gen::HighAssignment& values) {
  AnnihilationResult res;
  res.residuals.reserve(system.size());
  for (std::size_t i = 0; i < system.size(); ++i) {
    const double v = static_cast<double>(gen::relative_residual(system.equations[i], values));
    res.residuals.push_back(v);
    if (i == 0 || !(v <= res.max_rel)) {
      res.max_rel = v;
      res.worst_equation = i;
    }
  }
  return res;
}

gen::HighAssignment printed_assignment(const cat::SolutionFamily& f, const cat::Instance& inst) {
  using sym::Symbol, sym::index_of;
  gen::HighAssignment a;
  a.fill(HighComplex(0));
  a[index_of(Symbol::e)] = HighComplex(f.e_printed);
  a[index_of(Symbol::rho)] = HighComplex(f.rho_printed);
  a[index_of(Symbol::mu)] = complex_of(f.mu_printed);
  a[index_of(Symbol::a1)] = complex_of(f.a1_printed);
  a[index_of(Symbol::b1)] = complex_of(f.b1);
  a[index_of(Symbol::r)] = HighComplex(inst.r);
  a[index_of(Symbol::lambda)] = HighComplex(inst.lambda);
  a[index_of(Symbol::a0)] = HighComplex(f.a0_printed.evaluate<HighReal>(HighReal(0), inst.r, inst.lambda));
  return a;
}

gen::HighAssignment effective_assignment(const cat::SolutionFamily& f, const cat::Instance& inst) {
  using sym::Symbol, sym::index_of;
  gen::HighAssignment a;
  a.fill(HighComplex(0));
  a[index_of(Symbol::e)] = HighComplex(f.effective.e_val);
  a[index_of(Symbol::rho)] = HighComplex(f.effective.rho_val);
  a[index_of(Symbol::mu)] = complex_of(f.effective.mu);
  a[index_of(Symbol::a1)] = complex_of(f.effective.a1);
  a[index_of(Symbol::r)] = HighComplex(inst.r_eff);
  a[index_of(Symbol::lambda)] = HighComplex(inst.lambda);
  a[index_of(Symbol::a0)] = HighComplex(f.offset.evaluate<HighReal>(HighReal(0), inst.r, inst.lambda));
  return a;
}

std::pair<std::size_t, const PointResidual*> FamilyReport::worst() const {
  std::pair<std::size_t, const PointResidual*> best{0, nullptr};
  double worst_rel = -1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const ResidualReport& r = samples[i].residual;
    if (r.points.empty()) continue;
    const double m = r.max_rel();
    if (!(m <= worst_rel)) {
      worst_rel = std::isnan(m) ? std::numeric_limits<double>::infinity() : m;
      best = {i, &r.worst_point()};
    }
  }
  return best;
}

std::vector<cat::Instance> choose_samples(const cat::SolutionFamily& f, const VerifyOptions& options) {
  std::mt19937_64 rng(mix(options.seed, f.id, 0));
  std::vector<cat::Instance> out;
  const cat::Admissibility& adm = f.admissibility;
  for (std::size_t attempt = 0; out.size() < options.samples; ++attempt) {
    if (attempt == 1000) throw DomainError(f.id + ": no admissible sample found");
    double lambda = 0;
    std::optional<double> r;
    if (f.effective.r_rule == cat::RRule::two_sqrt_lambda) {
      lambda = uniform(rng, 0.1, 1.0);
    } else {
      const double mag = uniform(rng, 0.5, 1.5);
      r = adm.r_sign < 0 ? -mag : mag;
      const double quarter = mag * mag / 4;
      if (adm.needs_real_surd && adm.needs_positive_lambda) {
        lambda = quarter * uniform(rng, 0.1, 0.9);
      } else if (adm.needs_real_surd) {
        lambda = quarter - uniform(rng, 0.05, 1.0);
      } else if (adm.needs_positive_lambda) {
        lambda = uniform(rng, 0.1, 1.0);
      } else {
        lambda = uniform(rng, -1.0, 1.0);
      }
    }
    try {
      out.push_back(cat::instantiate(f, lambda, r));
    } catch (const DomainError&) {
    }
  }
  return out;
}

FamilyReport verify_family(const cat::SolutionFamily& f, const VerifyOptions& options,
                           const std::vector<cat::Instance>& instances) {
  FamilyReport rep;
  rep.family_id = f.id;
  rep.table = f.table;
  rep.row = f.row;
  const PdeCoefficients coeffs = PdeCoefficients::from(options.pde);
  const gen::AlgebraicSystem& system = system_for(options.pde);
  const std::vector<cat::Instance> chosen = instances.empty() ? choose_samples(f, options) : instances;
  bool any_fail = false, all_pass = !chosen.empty();
  std::vector<GridPoint> first_grid;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    SampleReport s;
    s.instance = chosen[i];
    s.grid_seed = mix(options.seed, f.id, i + 1);
    const ClosedForm u(f.offset, f.shape, s.instance.r, s.instance.lambda);
    try {
      const auto grid = regular_grid(u, options.grid, s.grid_seed);
      s.residual = residual_report(u, coeffs, grid, options.fd_step, options.tolerance);
      if (i == 0) first_grid = grid;
    } catch (const DomainError& err) {
      rep.message = err.what();
      all_pass = false;
      rep.samples.push_back(std::move(s));
      continue;
    }
    s.residual.family_id = f.id;
    s.annihilation_printed = annihilation_check(system, printed_assignment(f, s.instance));
    s.annihilation_effective = annihilation_check(system, effective_assignment(f, s.instance));
    if (s.residual.verdict == PointVerdict::fail) any_fail = true;
    if (s.residual.verdict != PointVerdict::pass) all_pass = false;
    rep.samples.push_back(std::move(s));
  }
  rep.verdict = any_fail ? Verdict::fail : all_pass ? Verdict::pass : Verdict::unresolved;
  if (rep.verdict == Verdict::pass) {
    const cat::Instance& inst = rep.samples.front().instance;
    const ClosedForm bad = ClosedForm(f.offset, f.shape, inst.r, inst.lambda).with_shape_scale(options.negative_scale);
    const ResidualReport nr = residual_report(bad, coeffs, first_grid, options.fd_step, options.tolerance);
    NegativeControl nc;
    nc.shape_scale = options.negative_scale;
    // Both oracles must see the perturbation.
    nc.max_rel = std::min(nr.stats(Oracle::jet).max_rel, nr.stats(Oracle::fd).max_rel);
    nc.flipped = nr.verdict == PointVerdict::fail && nc.max_rel > options.negative_threshold;
    rep.negative_control = nc;
  }
  if (rep.verdict == Verdict::fail) {
    const auto [i, p] = rep.worst();
    std::ostringstream os;
    os << std::setprecision(6) << "worst point x = " << p->x << ", t = " << p->t << " in sample " << i
       << ", max_rel = " << rep.samples[i].residual.max_rel();
    rep.message = os.str();
  }
  return rep;
}

CatalogReport verify_all(const VerifyOptions& options) {
  CatalogReport rep;
  rep.options = options;
  const auto& families = cat::list_families();
  system_for(options.pde);  // build the shared system before fanning out
  std::vector<std::future<FamilyReport>> jobs;
  jobs.reserve(families.size());
  for (const auto& f : families) {
    jobs.push_back(std::async(std::launch::async, [&f, &options] { return verify_family(f, options); }));
  }
  for (auto& j : jobs) rep.families.push_back(j.get());
  for (const auto& f : rep.families) {
    switch (f.verdict) {
      case Verdict::pass: ++rep.pass_count; break;
      case Verdict::fail: ++rep.fail_count; break;
      case Verdict::unresolved: ++rep.unresolved_count; break;
    }
  }
  return rep;
}

std::string plot_data(const ClosedForm& u, const PdeCoefficients& p, double t, double x0, double x1, std::size_t n) {
  std::ostringstream os;
  os << std::setprecision(17) << "x\tu\tresidual\n";
  for (std::size_t i = 0; i < n; ++i) {
    const double x = n == 1 ? x0 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(n - 1);
    os << x << '\t';
    if (u.regular(x, t, cat::kPoleMargin)) {
      os << u(x, t) << '\t' << combine_terms(jet_terms(u, p, x, t)).residual << '\n';
    } else {
      os << "nan\tnan\n";
    }
  }
  return os.str();
}

}  // namespace cdg::ver
