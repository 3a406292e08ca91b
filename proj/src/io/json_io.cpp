#include "cdgkit/io/json_io.hpp"

#include <cmath>

namespace cdg::io {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string rational(const sym::Rational& q) { return sym::to_string(q); }

json oracle_json(const ver::ResidualReport& r, ver::Oracle o) {
  const ver::OracleStats& st = r.stats(o);
  if (!st.evaluated) return nullptr;
  const ver::PointResidual& w = r.points.at(st.worst_index);
  return {{"max_abs", number(st.max_abs)},
          {"max_rel", number(st.max_rel)},
          {"skipped", st.skipped},
          {"worst", {{"x", w.x}, {"t", w.t}}}};
}

json annihilation_json(const ver::AnnihilationResult& a) {
  json res = json::array();
  for (double v : a.residuals) res.push_back(number(v));
  return {{"max_rel", number(a.max_rel)}, {"worst_equation", a.worst_equation + 1}, {"residuals", res}};
}

}  // namespace

json params_json(const red::KdV5Params& p) {
  return {{"omega", rational(p.omega)}, {"alpha", rational(p.alpha)}, {"beta", rational(p.beta)},
          {"gamma", rational(p.gamma)}};
}

json ode_json(const red::DiffPoly& ode, const red::KdV5Params& p) {
  json terms = json::array();
  for (const auto& t : ode.terms()) {
    terms.push_back({{"factors", red::render_factors(t)}, {"coefficient", t.coefficient.to_string()}});
  }
  return {{"params", params_json(p)}, {"ode", ode.to_string() + " = 0"}, {"latex", ode.to_latex() + " = 0"},
          {"terms", terms}};
}

json balance_json(const gen::BalanceReport& r) {
  json weightings = json::array();
  for (const auto& w : r.weightings) {
    json degrees = json::array();
    for (const auto& d : w.degrees) degrees.push_back({{"degree", d.degree.to_string()}, {"sources", d.sources}});
    weightings.push_back(
        {{"name", w.name}, {"tau_weight", rational(w.tau_weight)}, {"degrees", degrees}, {"admitted", w.admitted}});
  }
  return {{"admissible_m", std::vector<unsigned>(r.admissible_m.begin(), r.admissible_m.end())},
          {"weightings", weightings}};
}

json system_json(const gen::AlgebraicSystem& s, unsigned m) {
  json eqs = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    eqs.push_back({{"index", i + 1},
                   {"group", {{"sigma", s.provenance[i].first}, {"tau", s.provenance[i].second}}},
                   {"equation", s.equations[i].to_string() + " = 0"}});
  }
  return {{"m", m}, {"count", s.size()}, {"r_clearing_power", s.r_clearing_power}, {"equations", eqs}};
}

json match_json(const gen::MatchReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json j = {{"reference", e.reference_number}, {"matched", e.matched}};
    if (e.generated_index) {
      j["generated_index"] = *e.generated_index + 1;
      j["group"] = {{"sigma", e.group.first}, {"tau", e.group.second}};
    }
    if (e.matched) {
      j["factor"] = e.factor.to_string();
      j["r_power"] = e.r_power;
      j["e_power"] = e.e_power;
    }
    entries.push_back(j);
  }
  return {{"all_matched", r.all_matched()}, {"generated_count", r.generated_count}, {"points", r.points},
          {"seed", r.seed},                 {"entries", entries}};
}

json solve_json(const gen::SolveResult& r, int e_val, int rho_val) {
  json branches = json::array();
  for (const auto& b : r.branches) {
    json assignments = json::object();
    for (const auto& [s, p] : b.assignments) assignments[std::string(sym::symbol_name(s))] = p.to_string();
    json constraints = json::array();
    for (const auto& c : b.constraints) {
      constraints.push_back({{"variable", std::string(sym::symbol_name(c.variable))}, {"equation", c.poly.to_string() + " = 0"}});
    }
    json free = json::array();
    for (auto s : b.free_symbols) free.push_back(std::string(sym::symbol_name(s)));
    branches.push_back({{"id", b.id},
                        {"assignments", assignments},
                        {"constraints", constraints},
                        {"assumptions", b.assumptions},
                        {"free_symbols", free},
                        {"certificate_residual", number(b.certificate_residual)},
                        {"certificate_samples", b.certificate_samples}});
  }
  json refutations = json::array();
  for (const auto& f : r.refutations) {
    refutations.push_back({{"assumptions", f.assumptions}, {"witness", f.witness.to_string()}});
  }
  return {{"e", e_val}, {"rho", rho_val}, {"branches", branches}, {"refutations", refutations}};
}

json family_json(const cat::SolutionFamily& f) {
  json j = {{"id", f.id},
            {"table", f.table},
            {"row", f.row},
            {"e", f.e_printed},
            {"rho", f.rho_printed},
            {"r_condition", f.r_condition},
            {"mu", f.mu_printed.to_string()},
            {"a1", f.a1_printed.to_string()},
            {"a0", f.a0_printed.to_string()},
            {"b1", f.b1.to_string()},
            {"u", f.u().to_string()},
            {"u_latex", f.u().to_latex()},
            {"bounded", f.bounded},
            {"admissibility", f.admissibility.describe()},
            {"effective",
             {{"case", cat::case_name(f.effective.case_id)},
              {"e", f.effective.e_val},
              {"rho", f.effective.rho_val},
              {"mu", f.effective.mu.to_string()},
              {"a1", f.effective.a1.to_string()},
              {"r_rule", cat::r_rule_name(f.effective.r_rule)}}}};
  if (f.lambda_rule) j["lambda_rule"] = f.lambda_rule->to_string();
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

json catalog_json(const std::vector<cat::SolutionFamily>& families) {
  json list = json::array();
  for (const auto& f : families) list.push_back(family_json(f));
  return {{"count", families.size()}, {"families", list}};
}

json residual_json(const ver::ResidualReport& r, bool points) {
  json j = {{"lambda", r.lambda},
            {"r", r.r},
            {"tolerance", r.tolerance},
            {"fd_step", r.fd_step},
            {"grid_points", r.points.size()},
            {"verdict", ver::point_verdict_name(r.verdict)},
            {"jet", oracle_json(r, ver::Oracle::jet)},
            {"fd", oracle_json(r, ver::Oracle::fd)}};
  if (points) {
    json list = json::array();
    for (const auto& p : r.points) {
      json e = {{"x", p.x}, {"t", p.t}, {"verdict", ver::point_verdict_name(p.verdict)}};
      e["jet_rel"] = p.has[0] ? number(p.value[0].rel) : json(nullptr);
      e["fd_rel"] = p.has[1] ? number(p.value[1].rel) : json(nullptr);
      list.push_back(e);
    }
    j["points"] = list;
  }
  return j;
}

json family_report_json(const ver::FamilyReport& r, bool points) {
  json samples = json::array();
  for (const auto& s : r.samples) {
    json j = {{"r", s.instance.r}, {"lambda", s.instance.lambda}, {"r_eff", s.instance.r_eff}, {"grid_seed", s.grid_seed}};
    if (!s.residual.points.empty()) {
      j["residual"] = residual_json(s.residual, points);
      j["annihilation_printed"] = annihilation_json(s.annihilation_printed);
      j["annihilation_effective"] = annihilation_json(s.annihilation_effective);
    }
    samples.push_back(j);
  }
  json j = {{"id", r.family_id}, {"table", r.table}, {"row", r.row}, {"verdict", ver::verdict_name(r.verdict)},
            {"samples", samples}};
  if (r.negative_control) {
    j["negative_control"] = {{"shape_scale", r.negative_control->shape_scale},
                             {"max_rel", number(r.negative_control->max_rel)},
                             {"flipped", r.negative_control->flipped}};
  }
  if (!r.message.empty()) j["message"] = r.message;
  if (r.verdict == ver::Verdict::fail) {
    const auto [i, p] = r.worst();
    if (p != nullptr) j["worst"] = {{"sample", i}, {"x", p->x}, {"t", p->t}};
  }
  return j;
}

json catalog_report_json(const ver::CatalogReport& r, bool points) {
  json fams = json::array();
  for (const auto& f : r.families) fams.push_back(family_report_json(f, points));
  return {{"seed", r.options.seed},
          {"tolerance", r.options.tolerance},
          {"fd_step", r.options.fd_step},
          {"grid_points", r.options.grid.points},
          {"families", fams},
          {"summary", {{"PASS", r.pass_count}, {"FAIL", r.fail_count}, {"UNRESOLVED", r.unresolved_count}}}};
}

json sim_config_json(const sim::SimConfig& c) {
  json j = {{"family", c.family_id},
            {"lambda", c.lambda},
            {"n_modes", c.n_modes},
            {"L", c.half_length},
            {"dt", c.dt},
            {"t_end", c.t_end},
            {"dealias", c.dealias},
            {"scheme", sim::scheme_name(c.scheme)},
            {"snapshot_every", c.snapshot_every},
            {"order_check", c.order_check}};
  if (c.r) j["r"] = *c.r;
  if (!c.snapshot_file.empty()) j["snapshot_file"] = c.snapshot_file;
  return j;
}

json sim_metrics_json(const sim::SimMetrics& m) {
  json j = {{"linf_error", number(m.linf_error)},
            {"l2_error", number(m.l2_error)},
            {"peak_speed", number(m.peak_speed)},
            {"expected_speed", number(m.expected_speed)},
            {"speed_rel_error", number(m.speed_rel_error)},
            {"mean_drift", number(m.mean_drift)},
            {"boundary_decay", number(m.boundary_decay)},
            {"steps", m.steps},
            {"snapshots", m.snapshots.size()}};
  if (m.order_ratio) j["order_ratio"] = number(*m.order_ratio);
  if (m.linf_error_half_dt) j["linf_error_half_dt"] = number(*m.linf_error_half_dt);
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cdg::io
