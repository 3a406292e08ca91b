#pragma once

#include <string>

#include <json.hpp>

#include "cdgkit/catalog/catalog.hpp"
#include "cdgkit/pdesim/pdesim.hpp"
#include "cdgkit/reduction/reduction.hpp"
#include "cdgkit/sysgen/solver.hpp"
#include "cdgkit/sysgen/sysgen.hpp"
#include "cdgkit/verify/verify.hpp"

/// JSON documents of the command outputs. Objects keep sorted keys and
/// doubles print as shortest round-trip decimals, so dumps are byte-stable;
/// non-finite doubles become null.
namespace cdg::io {

using nlohmann::json;

json params_json(const red::KdV5Params& p);
json ode_json(const red::DiffPoly& ode, const red::KdV5Params& p);
json balance_json(const gen::BalanceReport& r);
json system_json(const gen::AlgebraicSystem& s, unsigned m);
json match_json(const gen::MatchReport& r);
json solve_json(const gen::SolveResult& r, int e_val, int rho_val);
json family_json(const cat::SolutionFamily& f);
json catalog_json(const std::vector<cat::SolutionFamily>& families);
/// Points are included when `points` is set.
json residual_json(const ver::ResidualReport& r, bool points);
json family_report_json(const ver::FamilyReport& r, bool points);
json catalog_report_json(const ver::CatalogReport& r, bool points);
json sim_config_json(const sim::SimConfig& c);
json sim_metrics_json(const sim::SimMetrics& m);

/// Indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace cdg::io
