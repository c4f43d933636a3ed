#include "graphnls/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "graphnls/analysis.hpp"
#include "parallel.hpp"

namespace graphnls {

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::CoreScale: return "core_scale";
    case SweepAxis::Mu: return "mu";
    case SweepAxis::P: return "p";
  }
  return "core_scale";
}

void SweepSpec::check() const {
  if (grid.empty()) throw Error("sweep grid must be nonempty");
  for (double v : grid) {
    if (!std::isfinite(v)) throw Error("sweep grid values must be finite");
    switch (axis) {
      case SweepAxis::CoreScale:
        if (!(v > 0.0)) throw Error("core_scale values must be positive");
        break;
      case SweepAxis::Mu:
        if (!(v > 0.0)) throw Error("mu values must be positive");
        break;
      case SweepAxis::P:
        require_subcritical(v);
        break;
    }
  }
  if (axis != SweepAxis::Mu && !(mu > 0.0)) throw Error("mu must be positive");
  if (axis != SweepAxis::P) require_subcritical(p);
  solver.check();
}

SweepSpec parse_sweep_spec(const std::string& json_text, const std::string& base_dir) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(std::string("sweep spec: ") + e.what());
  }
  try {
    SweepSpec s;
    const auto axis = j.at("axis").get<std::string>();
    if (axis == "core_scale") {
      s.axis = SweepAxis::CoreScale;
    } else if (axis == "mu") {
      s.axis = SweepAxis::Mu;
    } else if (axis == "p") {
      s.axis = SweepAxis::P;
    } else {
      throw Error("sweep spec: unknown axis '" + axis + "' (core_scale, mu, p)");
    }
    s.grid = j.at("grid").get<std::vector<double>>();
    std::filesystem::path graph = j.at("graph").get<std::string>();
    if (graph.is_relative()) graph = std::filesystem::path(base_dir) / graph;
    s.graph_file = graph.string();
    s.mu = j.value("mu", 1.0);
    s.p = j.value("p", 4.0);
    std::filesystem::path out = j.value("out", std::string("."));
    if (out.is_relative()) out = std::filesystem::path(base_dir) / out;
    s.out_dir = out.lexically_normal().string();
    s.parallelism = j.value("parallelism", std::size_t{0});
    s.seed = j.value("seed", std::uint64_t{1});
    s.solver.seed = s.seed;
    if (j.contains("C") && !j.contains("c")) throw Error("sweep spec: \"C\" requires \"c\"");
    if (j.contains("c")) {
      GnConstants k;
      k.c = j.at("c").get<double>();
      k.C = j.contains("C") ? j.at("C").get<double>() : std::pow(k.c, s.p - 2.0);
      s.constants = k;
    }
    if (j.contains("solver")) {
      const auto& c = j.at("solver");
      s.solver.h_max = c.value("h_max", s.solver.h_max);
      s.solver.max_iters = c.value("max_iters", s.solver.max_iters);
      s.solver.grad_tol = c.value("grad_tol", s.solver.grad_tol);
      s.solver.energy_tol = c.value("energy_tol", s.solver.energy_tol);
      s.solver.r_cut_schedule = c.value("r_cut_schedule", s.solver.r_cut_schedule);
    }
    s.check();
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("sweep spec: ") + e.what());
  }
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_sweep_spec(buffer.str(), std::filesystem::path(path).parent_path().string());
}

SweepResult run_sweep(const SweepSpec& spec, const MetricGraph& base) {
  spec.check();
  const std::size_t n = spec.grid.size();
  const std::size_t workers = spec.parallelism ? spec.parallelism : default_thread_count();
  SweepResult result;
  result.rows.resize(n);

  detail::parallel_for(n, workers, [&](std::size_t i) {
    const double v = spec.grid[i];
    SweepRow& row = result.rows[i];
    row.axis_value = v;
    row.e_min = std::nan("");
    try {
      const MetricGraph graph = spec.axis == SweepAxis::CoreScale ? homothety(base, v) : base;
      const double mu = spec.axis == SweepAxis::Mu ? v : spec.mu;
      const double p = spec.axis == SweepAxis::P ? v : spec.p;

      const double ell = measure_core(graph);
      if (p < 4.0) {
        row.band = "EXIST_BAND";
      } else {
        const auto t = thresholds(p, mu, graph.half_line_count(), spec.constants);
        row.L1 = t.L1_exist;
        row.L2 = t.L2_nonexist;
        row.band = ell > t.L1_exist ? "EXIST_BAND" : ell < t.L2_nonexist ? "NONEXIST_BAND" : "GAP";
      }
      SolverConfig config = spec.solver;
      config.seed = spec.seed;
      const auto d = existence_dichotomy(graph, mu, p, config, workers > 1 ? 1 : 0);
      row.e_min = d.table.back().energy;
      row.verdict = d.verdict;
    } catch (const std::exception& e) {
      row.verdict = Verdict::Inconclusive;
      row.error = e.what();
      if (row.band.empty()) row.band = "GAP";
    }
  });

  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = result.rows[i];
    if (row.band == "EXIST_BAND" && row.verdict != Verdict::NegativeMinimum) result.violations.push_back(i);
  }
  return result;
}

void write_phase_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result) {
  out << "# graphnls phase v1 axis=" << to_string(spec.axis) << '\n';
  out << "axis_value,E_min,verdict,L1,L2,band\n";
  char buf[64];
  auto num = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  for (const auto& row : result.rows) {
    out << num(row.axis_value) << ',' << (std::isnan(row.e_min) ? "" : num(row.e_min)) << ','
        << to_string(row.verdict) << ',' << (row.L1 ? num(*row.L1) : "") << ','
        << (row.L2 ? num(*row.L2) : "") << ',' << row.band << '\n';
  }
}

}  // namespace graphnls
