#ifndef GRAPHNLS_SOLVER_HPP
#define GRAPHNLS_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "graphnls/energy.hpp"

namespace graphnls {

enum class Initializer { Competitor, Soliton, Random };
enum class Verdict { NegativeMinimum, ZeroInfimumSuspected, Inconclusive };

std::string_view to_string(Initializer init);
std::string_view to_string(Verdict verdict);
Initializer parse_initializer(std::string_view name);

struct SolverConfig {
  std::size_t max_iters = 5000;
  double step0 = 1.0;
  double max_step = 8.0;
  double backtrack = 0.5;   // in (0,1)
  double armijo_c1 = 1e-4;
  double grad_tol = 1e-8;
  double energy_tol = 1e-6;
  /// Increasing truncation lengths. Empty selects the default schedule
  /// [10, 20, 40] times the competitor decay-length heuristic, capped at 50.
  std::vector<double> r_cut_schedule;
  double h_max = 0.05;
  Initializer init = Initializer::Competitor;
  /// Soliton centre; defaults to the midpoint of the longest core edge.
  std::optional<std::string> soliton_edge;
  std::optional<double> soliton_offset;
  std::uint64_t seed = 1;
  NonlinearScope scope = NonlinearScope::Core;

  /// Throws Error on a non-admissible configuration.
  void check() const;
};

struct TracePoint {
  std::size_t iter = 0;
  double energy = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

/// One descent run on a fixed mesh.
struct DescentResult {
  GraphFunction state;
  std::vector<TracePoint> trace;  // accepted iterates, energies nonincreasing
  bool converged = false;
  double grad_norm = 0.0;
};

DescentResult descend(const GraphFunction& initial, double mu, double p, const SolverConfig& config);

struct RcutEntry {
  double r_cut = 0.0;
  double energy = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct MinimizationResult {
  GraphFunction state;
  std::vector<TracePoint> trace;  // of the run at the largest r_cut
  EnergyReport report;
  ELReport el;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<RcutEntry> r_cut_table;
  double mu = 0.0;
  double p = 0.0;
  double min_value = 0.0;
  bool strictly_positive = false;
  bool converged = false;
};

MinimizationResult minimize(const MetricGraph& graph, double mu, double p, const SolverConfig& config);

/// Verdict from the energy-vs-truncation table.
Verdict classify(const std::vector<RcutEntry>& table, double energy_tol);

/// Aitken extrapolation of the last three energies (last value if fewer).
double extrapolated_limit(const std::vector<RcutEntry>& table);

/// Default truncation schedule for (graph, mu, p).
std::vector<double> default_r_cut_schedule(const MetricGraph& graph, double mu, double p);

/// Amplitude used by the competitor initializer on K.
double competitor_amplitude(double core_measure, double mu, std::size_t half_lines, double p);

GraphFunction initializer_competitor(std::shared_ptr<const Mesh> mesh, double mu, double p);
GraphFunction initializer_soliton(std::shared_ptr<const Mesh> mesh, double mu, double p,
                                  EdgeIndex center_edge, double center_offset);
GraphFunction initializer_random(std::shared_ptr<const Mesh> mesh, double mu, std::uint64_t seed);

/// Unit-mass soliton phi_1(x) = amplitude * sech(rate x)^(2/(p-2)), solving
/// phi'' + phi^(p-1) = lambda phi on the real line.
struct SolitonConstants {
  double amplitude = 0.0;
  double rate = 0.0;
  double lambda = 0.0;
};

SolitonConstants soliton_constants(double p);
/// phi_mu(x) = mu^alpha phi_1(mu^beta x).
double soliton_profile(double x, double mu, double p);

enum class DirichletDomain { Line, HalfLine };

struct DirichletConfig {
  double h = 0.01;
  double r_cut = 30.0;
  std::size_t max_iters = 2000;
  double grad_tol = 1e-10;
  DirichletDomain domain = DirichletDomain::Line;
};

struct DirichletResult {
  double kinetic = 0.0;  // |v'|^2
  std::vector<double> x;
  std::vector<double> values;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Minimises |v'|^2 over {|v|^2 = m, v(0) = a} on the truncated line or
/// half-line by projected gradient with the pinned node.
DirichletResult dirichlet_line_min(double m, double a, const DirichletConfig& config);

struct DichotomyRun {
  std::string label;
  MinimizationResult result;
};

struct DichotomyResult {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<RcutEntry> table;  // minimum energy over runs per r_cut
  std::vector<DichotomyRun> runs;
  std::size_t best = 0;  // run with the lowest energy at the largest r_cut
};

/// Runs minimize from the competitor, three soliton placements and three
/// random seeds. `threads` == 0 picks the worker count from GRAPHNLS_THREADS.
DichotomyResult existence_dichotomy(const MetricGraph& graph, double mu, double p,
                                    const SolverConfig& config, std::size_t threads = 0);

/// Worker count: GRAPHNLS_THREADS if set, else hardware concurrency.
std::size_t default_thread_count();

/// result.json, trace.csv and state.csv under `dir` (created if needed).
void write_run_artifacts(const std::string& dir, const MinimizationResult& result);

}  // namespace graphnls

#endif  // GRAPHNLS_SOLVER_HPP
