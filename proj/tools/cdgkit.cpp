#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "cdgkit/io/json_io.hpp"
#include "cdgkit/symkernel/gaussian_rational.hpp"

using namespace cdg;

namespace {

enum Exit : int { kOk = 0, kFail = 1, kUsage = 2, kInadmissible = 3 };

/// Thrown for invalid flag values detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  bool json = true;
  bool latex = false;
  std::uint64_t seed = 20240611;
  double tol = ver::kDefaultTolerance;
};

struct PdeFlags {
  bool cdg = false;
  std::optional<std::string> omega, alpha, beta, gamma;

  void add(CLI::App* cmd) {
    cmd->add_flag("--cdg", cdg, "Use the CDG coefficients (1, 30, 30, 180); the default");
    cmd->add_option("--omega", omega, "Coefficient of u_xxxxx (rational)");
    cmd->add_option("--alpha", alpha, "Coefficient of u u_xxx (rational)");
    cmd->add_option("--beta", beta, "Coefficient of u_x u_xx (rational)");
    cmd->add_option("--gamma", gamma, "Coefficient of u^2 u_x (rational)");
  }

  red::KdV5Params params() const {
    red::KdV5Params p = red::KdV5Params::cdg();
    if (cdg && (omega || alpha || beta || gamma)) throw UsageError("--cdg cannot be combined with coefficients");
    if (omega) p.omega = rational(*omega);
    if (alpha) p.alpha = rational(*alpha);
    if (beta) p.beta = rational(*beta);
    if (gamma) p.gamma = rational(*gamma);
    check(p);
    return p;
  }

  static sym::Rational rational(const std::string& text) {
    try {
      return sym::parse_rational(text);
    } catch (const std::exception&) {
      throw UsageError("'" + text + "' is not a rational number");
    }
  }

  static void check(const red::KdV5Params& p) {
    try {
      p.validate();
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
  }
};

void print(const Global& g, const io::json& doc, const std::string& latex) {
  if (g.latex) {
    std::cout << latex << (latex.empty() || latex.back() == '\n' ? "" : "\n");
  } else {
    std::cout << io::dump(doc);
  }
}

int cmd_reduce(const Global& g, const std::vector<std::string>& coeffs) {
  if (coeffs.size() != 4) throw UsageError("reduce expects OMEGA ALPHA BETA GAMMA");
  red::KdV5Params p{PdeFlags::rational(coeffs[0]), PdeFlags::rational(coeffs[1]), PdeFlags::rational(coeffs[2]),
                    PdeFlags::rational(coeffs[3])};
  PdeFlags::check(p);
  const red::DiffPoly ode = red::reduce_to_ode(p);
  print(g, io::ode_json(ode, p), ode.to_latex() + " = 0");
  return kOk;
}

int cmd_balance(const Global& g, const PdeFlags& f) {
  const gen::BalanceReport rep = gen::balance_degrees(red::reduce_to_ode(f.params()));
  std::string latex = "m \\in \\{";
  bool first = true;
  for (unsigned m : rep.admissible_m) {
    latex += (first ? "" : ", ") + std::to_string(m);
    first = false;
  }
  print(g, io::balance_json(rep), latex + "\\}");
  return kOk;
}

int cmd_gensys(const Global& g, const PdeFlags& f, unsigned m, bool check_paper, const std::string& reference,
               unsigned points) {
  if (m < 1 || m > sym::kMaxAnsatzOrder) {
    throw UsageError("--m must be between 1 and " + std::to_string(sym::kMaxAnsatzOrder));
  }
  const gen::AlgebraicSystem sys = gen::generate_system(red::reduce_to_ode(f.params()), m);
  io::json doc = io::system_json(sys, m);
  int code = kOk;
  if (check_paper) {
    if (m != 1) throw UsageError("--check-paper compares the m = 1 system");
    const auto ref = gen::load_reference_system(reference.empty() ? gen::default_reference_path() : std::filesystem::path(reference));
    const gen::MatchReport rep = gen::check_structural_match(sys, ref, points, g.seed);
    doc["check_paper"] = io::match_json(rep);
    if (!rep.all_matched()) code = kFail;
  }
  print(g, doc, gen::system_to_latex(sys));
  return code;
}

int cmd_solve(const Global& g, const PdeFlags& f, int e, int rho, unsigned m) {
  if (m != 1) {
    throw UsageError("out of scope: the solver handles m = 1 only; the m = 2 system is excluded");
  }
  if ((e != 1 && e != -1) || (rho != 1 && rho != -1)) throw UsageError("--e and --rho must be +1 or -1");
  const gen::AlgebraicSystem sys = gen::generate_system(red::reduce_to_ode(f.params()), 1);
  gen::SolveOptions opt;
  opt.seed = g.seed;
  const gen::SolveResult res = gen::solve_m1(sys, e, rho, opt);
  std::string latex;
  for (const auto& b : res.branches) {
    latex += b.id + ":";
    for (const auto& [s, p] : b.assignments) latex += " " + std::string(sym::symbol_latex(s)) + " = " + p.to_latex() + ",";
    for (const auto& c : b.constraints) latex += " " + c.poly.to_latex() + " = 0,";
    if (latex.back() == ',') latex.pop_back();
    latex += "\n";
  }
  print(g, io::solve_json(res, e, rho), latex);
  return kOk;
}

int cmd_catalog(const Global& g, const std::string& action, const std::string& id) {
  if (action == "list") {
    const auto& fams = cat::list_families();
    std::string latex;
    for (const auto& f : fams) latex += f.id + ": u = " + f.u().to_latex() + "\n";
    print(g, io::catalog_json(fams), latex);
    return kOk;
  }
  if (action == "show") {
    if (id.empty()) throw UsageError("catalog show requires a family id");
    const cat::SolutionFamily& f = cat::find_family(id);
    print(g, io::family_json(f), "u = " + f.u().to_latex());
    return kOk;
  }
  throw UsageError("catalog action must be 'list' or 'show'");
}

int cmd_verify(const Global& g, const std::string& family, std::optional<double> lambda, std::optional<double> r,
               bool all, bool points, const std::string& plot) {
  ver::VerifyOptions opt;
  opt.seed = g.seed;
  opt.tolerance = g.tol;
  if (all == !family.empty()) throw UsageError("verify needs exactly one of --family or --all");
  if (all) {
    if (lambda || r || !plot.empty()) throw UsageError("--lambda, --r and --plot apply to --family only");
    const ver::CatalogReport rep = ver::verify_all(opt);
    std::string text;
    for (const auto& f : rep.families) text += f.family_id + " " + ver::verdict_name(f.verdict) + "\n";
    print(g, io::catalog_report_json(rep, points), text);
    return rep.pass_count == rep.families.size() ? kOk : kFail;
  }
  const cat::SolutionFamily& f = cat::find_family(family);
  std::vector<cat::Instance> instances;
  if (lambda || r) {
    instances.push_back(cat::instantiate(f, lambda.value_or(0.0), r));
  }
  const ver::FamilyReport rep = ver::verify_family(f, opt, instances);
  if (!plot.empty()) {
    if (rep.samples.empty()) throw UsageError("no sample to plot");
    const cat::Instance& inst = rep.samples.front().instance;
    const cat::ClosedForm u(f.offset, f.shape, inst.r, inst.lambda);
    std::ofstream out(plot);
    if (!out) throw std::runtime_error("cannot write '" + plot + "'");
    out << ver::plot_data(u, ver::PdeCoefficients::from(opt.pde), 0.0, opt.grid.x_min, opt.grid.x_max, 401);
  }
  print(g, io::family_report_json(rep, points), f.id + " " + ver::verdict_name(rep.verdict));
  return rep.verdict == ver::Verdict::pass ? kOk : kFail;
}

int cmd_simulate(const Global& g, const std::string& config, double max_error) {
  const sim::SimConfig c = sim::load_config(config);
  const sim::SimMetrics m = sim::run(c);
  const cat::SolutionFamily& f = cat::find_family(c.family_id);
  const cat::Instance inst = cat::instantiate(f, c.lambda, c.r);
  if (!c.snapshot_file.empty()) {
    std::ofstream out(c.snapshot_file);
    if (!out) throw std::runtime_error("cannot write '" + c.snapshot_file + "'");
    out << sim::snapshot_text(m, cat::ClosedForm(f.offset, f.shape, inst.r, inst.lambda));
  }
  io::json checks = {{"linf_error", m.linf_error < max_error}, {"peak_speed", m.speed_rel_error < 0.01}};
  if (m.order_ratio) checks["order_ratio"] = *m.order_ratio >= 12 && *m.order_ratio <= 20;
  bool ok = true;
  for (const auto& [k, v] : checks.items()) ok = ok && v.get<bool>();
  io::json doc = {{"config", io::sim_config_json(c)}, {"metrics", io::sim_metrics_json(m)}, {"checks", checks},
                  {"verdict", ok ? "PASS" : "FAIL"}};
  print(g, doc, "");
  return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Traveling-wave reductions, solution catalog and verification for fifth-order KdV equations"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  bool json_flag = false;
  app.add_flag("--json", json_flag, "Print JSON (the default)");
  app.add_flag("--latex", g.latex, "Print LaTeX (display only)");
  app.add_option("--seed", g.seed, "Seed for sampled points and instances")->capture_default_str();
  app.add_option("--tol", g.tol, "Relative PDE residual tolerance for PASS")->capture_default_str();

  auto* reduce = app.add_subcommand("reduce", "Traveling-wave ODE of u_t + omega u5 + alpha u u3 + beta u1 u2 + gamma u^2 u1 = 0");
  std::vector<std::string> coeffs;
  reduce->add_option("coefficients", coeffs, "OMEGA ALPHA BETA GAMMA (rationals)")->expected(4)->required();

  PdeFlags balance_pde, gensys_pde, solve_pde;
  auto* balance = app.add_subcommand("balance", "Admissible expansion orders m by degree balancing");
  balance_pde.add(balance);

  auto* gensys = app.add_subcommand("gensys", "Coefficient equations of the order-m ansatz");
  gensys_pde.add(gensys);
  unsigned m = 1, points = 24;
  bool check_paper = false;
  std::string reference;
  gensys->add_option("--m", m, "Expansion order")->capture_default_str();
  gensys->add_flag("--check-paper", check_paper, "Compare with the shipped reference transcription");
  gensys->add_option("--reference", reference, "Reference transcription file");
  gensys->add_option("--points", points, "Random rational points for the proportionality test")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Solution branches of the m = 1 system");
  solve_pde.add(solve);
  int e_val = 1, rho_val = -1;
  unsigned solve_m = 1;
  solve->add_option("--e", e_val, "Riccati sign e (+1 or -1)")->capture_default_str();
  solve->add_option("--rho", rho_val, "Riccati sign rho (+1 or -1)")->capture_default_str();
  solve->add_option("--m", solve_m, "Expansion order (only 1 is supported)")->capture_default_str();

  auto* catalog = app.add_subcommand("catalog", "Solution families of the four tables");
  std::string action, family_id;
  catalog->add_option("action", action, "list | show")->required();
  catalog->add_option("id", family_id, "Family id for show");

  auto* verify = app.add_subcommand("verify", "PDE residual verification of catalog families");
  std::string vfamily, plot;
  std::optional<double> vlambda, vr;
  bool vall = false, vpoints = false;
  verify->add_option("--family", vfamily, "Family id, e.g. T3R6");
  verify->add_option("--lambda", vlambda, "Wave speed parameter");
  verify->add_option("--r", vr, "Riccati parameter r (derived for sqrt(lambda) rows)");
  verify->add_flag("--all", vall, "Verify every family");
  verify->add_flag("--points", vpoints, "Include per-point residuals");
  verify->add_option("--plot", plot, "Write x, u, residual columns for the first sample");

  auto* simulate = app.add_subcommand("simulate", "Pseudospectral run of a bounded family");
  std::string config;
  double max_error = 1e-4;
  simulate->add_option("--config", config, "key = value or JSON configuration")->required();
  simulate->add_option("--max-error", max_error, "L-infinity error accepted as PASS")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kUsage;
  }
  if (json_flag && g.latex) {
    std::cerr << "error: --json and --latex are exclusive\n";
    return kUsage;
  }

  try {
    if (*reduce) return cmd_reduce(g, coeffs);
    if (*balance) return cmd_balance(g, balance_pde);
    if (*gensys) return cmd_gensys(g, gensys_pde, m, check_paper, reference, points);
    if (*solve) return cmd_solve(g, solve_pde, e_val, rho_val, solve_m);
    if (*catalog) return cmd_catalog(g, action, family_id);
    if (*verify) return cmd_verify(g, vfamily, vlambda, vr, vall, vpoints, plot);
    if (*simulate) return cmd_simulate(g, config, max_error);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const sim::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "inadmissible: " << e.what() << "\n";
    return kInadmissible;
  } catch (const sim::BlowUp& e) {
    std::cerr << "blow-up: " << e.what() << " at t = " << e.time() << "\n";
    return kFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
