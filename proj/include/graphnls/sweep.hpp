#ifndef GRAPHNLS_SWEEP_HPP
#define GRAPHNLS_SWEEP_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "graphnls/solver.hpp"

namespace graphnls {

enum class SweepAxis { CoreScale, Mu, P };

struct SweepSpec {
  SweepAxis axis = SweepAxis::CoreScale;
  std::vector<double> grid;
  std::string graph_file;  // resolved relative to the sweep file
  double mu = 1.0;
  double p = 4.0;
  SolverConfig solver;
  std::string out_dir = ".";
  std::size_t parallelism = 0;  // 0: GRAPHNLS_THREADS / hardware
  std::uint64_t seed = 1;
  std::optional<GnConstants> constants;

  void check() const;
};

/// JSON sweep description, e.g.
///   {"axis": "core_scale", "grid": [0.25, 3], "graph": "line.graph",
///    "mu": 1, "p": 4, "out": "phase", "parallelism": 2, "seed": 1,
///    "solver": {"h_max": 0.05, "r_cut_schedule": [10, 20, 40]}}
SweepSpec parse_sweep_spec(const std::string& json_text, const std::string& base_dir = ".");
SweepSpec load_sweep_spec(const std::string& path);

struct SweepRow {
  double axis_value = 0.0;
  double e_min = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<double> L1;  // absent for p < 4
  std::optional<double> L2;
  std::string band;          // EXIST_BAND, NONEXIST_BAND or GAP
  std::string error;         // non-empty when the point failed
};

struct SweepResult {
  std::vector<SweepRow> rows;  // grid order
  std::vector<std::size_t> violations;  // EXIST_BAND rows without NEGATIVE_MINIMUM

  bool sound() const { return violations.empty(); }
};

SweepResult run_sweep(const SweepSpec& spec, const MetricGraph& base);

/// Versioned header line, then axis_value,E_min,verdict,L1,L2,band.
void write_phase_csv(std::ostream& out, const SweepSpec& spec, const SweepResult& result);

std::string_view to_string(SweepAxis axis);

}  // namespace graphnls

#endif  // GRAPHNLS_SWEEP_HPP
