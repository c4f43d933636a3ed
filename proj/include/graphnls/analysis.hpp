#ifndef GRAPHNLS_ANALYSIS_HPP
#define GRAPHNLS_ANALYSIS_HPP

#include <optional>
#include <vector>

#include "graphnls/energy.hpp"

namespace graphnls {

/// Existence (L1) and nonexistence (L2) thresholds on meas(K) for
/// p in [4,6), together with the constants they were computed from.
struct ThresholdReport {
  double p = 0.0;
  double mu = 0.0;
  std::size_t half_lines = 0;
  double c = 0.0;
  double C = 0.0;
  double L1_exist = 0.0;
  double L2_nonexist = 0.0;
  std::optional<double> C_p;  // only for p in (4,6)
  double scaling_invariant_L1 = 0.0;  // mu^((p-2)/(6-p)) L1
  double scaling_invariant_L2 = 0.0;
  bool consistent = true;  // L2 <= L1
};

/// p in (4,6): the constant of the existence threshold.
double const_Cp(double p);

/// L1 = N^2/(2 mu) at p = 4, C_p mu^((2-p)/(6-p)) N^(4/(6-p)) for p in (4,6).
double threshold_exist(double p, double mu, std::size_t half_lines);

/// L2 = C^((4-p)/(6-p)) mu^((2-p)/(6-p)) c^(-p), p in [4,6).
double threshold_nonexist(double p, double mu, double C, double c);

ThresholdReport thresholds(double p, double mu, std::size_t half_lines,
                           std::optional<GnConstants> constants = std::nullopt);

/// Energy of the constant-on-K, exponential-on-half-lines competitor in the
/// untruncated limit; a must lie in (0, sqrt(mu/L)).
double competitor_energy(double a, double L, double mu, std::size_t half_lines, double p);

struct CriticalPoint {
  double a_bar = 0.0;
  double g_min = 0.0;          // g(a_bar)
  bool admissible = false;     // a_bar < sqrt(mu/L)
  bool below_mass = false;     // g(a_bar) < mu
};

/// g(a) = a^2 L + N^2 p a^(4-p) / (8 L); E < 0 iff g(a) < mu.
double g_function(double a, double L, std::size_t half_lines, double p);
CriticalPoint g_critical_point(double L, double mu, std::size_t half_lines, double p);

struct NonexistenceCertificate {
  std::optional<Partition> partition;  // empty: whole-graph route
  std::vector<double> part_core_measures;
  double L2 = 0.0;
  bool valid = false;
  std::vector<std::size_t> offending_parts;  // parts with meas(K_i) >= L2
  bool whole_graph_valid = false;
  double core_measure = 0.0;
};

/// Checks meas(K) < L2 and, when N >= 2, each supplied partition (or all
/// enumerated ones up to N parts) for meas(K_i) < L2. Reports the partition
/// minimising max_i meas(K_i).
NonexistenceCertificate certify_nonexistence(const MetricGraph& graph, double p, double mu,
                                             std::optional<std::vector<Partition>> partitions = std::nullopt,
                                             std::optional<GnConstants> constants = std::nullopt);

struct ScalingCheck {
  double lhs = 0.0;  // E(w, G')
  double rhs = 0.0;  // lambda^((2+p)/(6-p)) E(u, G)
  double relative_gap = 0.0;
  double mass_w = 0.0;
  double mass_target = 0.0;  // lambda |u|^2
};

/// Builds w(x) = lambda^(2/(6-p)) u(lambda^((p-2)/(6-p)) x) on the
/// homothetic graph by interpolation onto the homothetic mesh.
ScalingCheck scaling_check(const GraphFunction& u, double lambda, double p);

struct MassThresholds {
  double mu1 = 0.0;  // mu > mu1: existence
  double mu2 = 0.0;  // mu < mu2: nonexistence
  bool consistent = true;  // mu2 <= mu1
};

MassThresholds mass_thresholds(double p, double L, std::size_t half_lines,
                               std::optional<GnConstants> constants = std::nullopt);

struct InductiveRow {
  std::size_t n = 0;
  double bound = 0.0;
  bool satisfied = false;
};

struct InductiveTable {
  bool applicable = false;  // E(u) <= 0
  double kinetic = 0.0;     // |u'|^2
  std::vector<InductiveRow> rows;
};

InductiveTable inductive_bound_check(const GraphFunction& u, double p, double c, std::size_t n_max);

}  // namespace graphnls

#endif  // GRAPHNLS_ANALYSIS_HPP
