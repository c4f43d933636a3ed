#include "graphnls/serialize.hpp"

#include <cmath>

namespace graphnls {

using nlohmann::json;

namespace {

// JSON has no infinity; non-finite numbers become null.
json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json numbers(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(number(x));
  return out;
}

json table_json(const std::vector<RcutEntry>& table) {
  json out = json::array();
  for (const auto& e : table) {
    out.push_back({{"r_cut", e.r_cut},
                   {"energy", number(e.energy)},
                   {"iterations", e.iterations},
                   {"converged", e.converged}});
  }
  return out;
}

json run_json(const MinimizationResult& r) {
  return {{"verdict", to_string(r.verdict)},
          {"mu", r.mu},
          {"p", r.p},
          {"energy_report", to_json(r.report)},
          {"el_report", to_json(r.el)},
          {"r_cut_table", table_json(r.r_cut_table)},
          {"iterations", r.trace.empty() ? 0 : r.trace.back().iter},
          {"min_value", r.min_value},
          {"strictly_positive", r.strictly_positive},
          {"converged", r.converged}};
}

const char* verdict_note(Verdict v) {
  switch (v) {
    case Verdict::NegativeMinimum:
      return "negative energy state stable under truncation: existence certificate up to discretisation";
    case Verdict::ZeroInfimumSuspected:
      return "numerical evidence only: energies trend to zero with the truncation, not a proof of nonexistence";
    case Verdict::Inconclusive:
      return "no verdict: run did not converge or the truncation trend is ambiguous";
  }
  return "";
}

}  // namespace

json to_json(const ValidationReport& report) {
  json v = json::array();
  for (const auto& x : report.violations) v.push_back({{"code", x.code}, {"message", x.message}});
  return {{"schema_version", kSchemaVersion}, {"valid", report.ok()}, {"violations", v}};
}

json to_json(const EnergyReport& r) {
  return {{"energy", r.energy},       {"kinetic", r.kinetic},       {"potential", r.potential},
          {"mass", r.mass},           {"linf", r.linf},             {"gn_slack_p", r.gn_slack_p},
          {"gn_slack_inf", r.gn_slack_inf}};
}

json to_json(const ELReport& r) {
  return {{"lambda", r.lambda},
          {"lambda_fit", r.lambda_fit},
          {"interior_residuals", numbers(r.interior_residuals)},
          {"kirchhoff_residuals", numbers(r.kirchhoff_residuals)},
          {"max_interior_residual", r.max_interior()},
          {"max_kirchhoff_residual", r.max_kirchhoff()}};
}

json to_json(const MinimizationResult& result) {
  json out = run_json(result);
  out["schema_version"] = kSchemaVersion;
  out["verdict_note"] = verdict_note(result.verdict);
  // Flat copies of the report fields under their fixed key names.
  const json energy = to_json(result.report);
  for (const auto& [k, v] : energy.items()) out[k] = v;
  out["lambda"] = result.el.lambda;
  out["kirchhoff_residuals"] = numbers(result.el.kirchhoff_residuals);
  return out;
}

json to_json(const DichotomyResult& result) {
  json runs = json::array();
  for (const auto& run : result.runs) {
    json r = run_json(run.result);
    r["label"] = run.label;
    runs.push_back(std::move(r));
  }
  return {{"schema_version", kSchemaVersion},
          {"verdict", to_string(result.verdict)},
          {"verdict_note", verdict_note(result.verdict)},
          {"table", table_json(result.table)},
          {"extrapolated_limit", number(extrapolated_limit(result.table))},
          {"best_run", result.runs.empty() ? "" : result.runs[result.best].label},
          {"runs", runs}};
}

json to_json(const ThresholdReport& r) {
  json out = {{"schema_version", kSchemaVersion},
              {"p", r.p},
              {"mu", r.mu},
              {"N", r.half_lines},
              {"c", r.c},
              {"C", r.C},
              {"L1_exist", r.L1_exist},
              {"L2_nonexist", r.L2_nonexist},
              {"C_p", r.C_p ? json(*r.C_p) : json(nullptr)},
              {"scaling_invariant_L1", r.scaling_invariant_L1},
              {"scaling_invariant_L2", r.scaling_invariant_L2},
              {"consistent", r.consistent},
              {"gap", "meas(K) in [L2, L1] is UNKNOWN"},
              {"constants_note", "conservative GN constants; L2 is valid but not optimal"}};
  return out;
}

json to_json(const NonexistenceCertificate& cert, const MetricGraph& graph) {
  json parts = json::array();
  if (cert.partition) {
    for (std::size_t i = 0; i < cert.partition->parts.size(); ++i) {
      json ids = json::array();
      for (auto e : cert.partition->parts[i]) ids.push_back(graph.edge(e).id);
      parts.push_back({{"edges", ids}, {"core_measure", cert.part_core_measures[i]}});
    }
  }
  return {{"schema_version", kSchemaVersion},
          {"valid", cert.valid},
          {"L2", cert.L2},
          {"core_measure", cert.core_measure},
          {"whole_graph_valid", cert.whole_graph_valid},
          {"route", cert.partition ? "partition" : "whole_graph"},
          {"partition", cert.partition ? parts : json(nullptr)},
          {"part_core_measures", cert.part_core_measures},
          {"offending_parts", cert.offending_parts}};
}

}  // namespace graphnls
