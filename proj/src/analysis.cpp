#include "graphnls/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace graphnls {

namespace {

bool is_quartic(double p) { return std::fabs(p - 4.0) < 1e-12; }

void require_supercubic(double p) {
  if (!(p >= 4.0 - 1e-12 && p < 6.0)) throw Error("p must be in [4,6)");
}

double scaling_exponent(double p) { return (p - 2.0) / (6.0 - p); }

GnConstants resolve(std::optional<GnConstants> constants, std::size_t half_lines, double p) {
  const auto k = constants ? *constants : default_gn_constants(half_lines, p);
  if (!(k.c > 0.0) || !(k.C > 0.0)) throw Error("GN constants must be positive");
  return k;
}

}  // namespace

double const_Cp(double p) {
  if (!(p > 4.0 && p < 6.0)) throw Error("C_p is defined for p in (4,6)");
  const double q = p * (p - 4.0) / 16.0;
  const double inner = std::pow(q, 2.0 / (p - 2.0)) + p / 8.0 * std::pow(q, (4.0 - p) / (p - 2.0));
  return std::pow(inner, (p - 2.0) / (6.0 - p));
}

double threshold_exist(double p, double mu, std::size_t half_lines) {
  require_supercubic(p);
  if (!(mu > 0.0)) throw Error("mu must be positive");
  if (half_lines < 1) throw Error("N ≥ 1 required");
  const double n = static_cast<double>(half_lines);
  if (is_quartic(p)) return n * n / (2.0 * mu);
  return const_Cp(p) * std::pow(mu, (2.0 - p) / (6.0 - p)) * std::pow(n, 4.0 / (6.0 - p));
}

double threshold_nonexist(double p, double mu, double C, double c) {
  require_supercubic(p);
  if (!(mu > 0.0)) throw Error("mu must be positive");
  if (!(C > 0.0) || !(c > 0.0)) throw Error("GN constants must be positive");
  return std::pow(C, (4.0 - p) / (6.0 - p)) * std::pow(mu, (2.0 - p) / (6.0 - p)) * std::pow(c, -p);
}

ThresholdReport thresholds(double p, double mu, std::size_t half_lines,
                           std::optional<GnConstants> constants) {
  require_supercubic(p);
  const auto k = resolve(constants, half_lines, p);
  ThresholdReport r;
  r.p = p;
  r.mu = mu;
  r.half_lines = half_lines;
  r.c = k.c;
  r.C = k.C;
  r.L1_exist = threshold_exist(p, mu, half_lines);
  r.L2_nonexist = threshold_nonexist(p, mu, k.C, k.c);
  if (!is_quartic(p)) r.C_p = const_Cp(p);
  const double s = std::pow(mu, scaling_exponent(p));
  r.scaling_invariant_L1 = s * r.L1_exist;
  r.scaling_invariant_L2 = s * r.L2_nonexist;
  r.consistent = r.L2_nonexist <= r.L1_exist;
  return r;
}

double competitor_energy(double a, double L, double mu, std::size_t half_lines, double p) {
  if (!(L > 0.0) || !(mu > 0.0)) throw Error("L and mu must be positive");
  if (!(a > 0.0 && a * a * L < mu)) throw Error("a must lie in (0, sqrt(mu/L))");
  const double n = static_cast<double>(half_lines);
  return std::pow(a, 4.0) * n * n / (8.0 * (mu - a * a * L)) - std::pow(a, p) * L / p;
}

double g_function(double a, double L, std::size_t half_lines, double p) {
  const double n = static_cast<double>(half_lines);
  return a * a * L + n * n * p / (8.0 * L) * std::pow(a, 4.0 - p);
}

CriticalPoint g_critical_point(double L, double mu, std::size_t half_lines, double p) {
  if (!(p > 4.0 && p < 6.0)) throw Error("p must be in (4,6)");
  if (!(L > 0.0) || !(mu > 0.0)) throw Error("L and mu must be positive");
  const double n = static_cast<double>(half_lines);
  const double x = n * n * p * (p - 4.0) / 16.0;
  CriticalPoint cp;
  cp.a_bar = std::pow(x / (L * L), 1.0 / (p - 2.0));
  cp.g_min = std::pow(L, -(6.0 - p) / (p - 2.0)) *
             (std::pow(x, 2.0 / (p - 2.0)) + n * n * p / 8.0 * std::pow(x, (4.0 - p) / (p - 2.0)));
  cp.admissible = cp.a_bar * cp.a_bar * L < mu;
  cp.below_mass = cp.g_min < mu;
  return cp;
}

NonexistenceCertificate certify_nonexistence(const MetricGraph& graph, double p, double mu,
                                             std::optional<std::vector<Partition>> partitions,
                                             std::optional<GnConstants> constants) {
  require_supercubic(p);
  const std::size_t n = graph.half_line_count();
  const auto k = resolve(constants, n, p);

  NonexistenceCertificate cert;
  cert.L2 = threshold_nonexist(p, mu, k.C, k.c);
  cert.core_measure = measure_core(graph);
  cert.whole_graph_valid = cert.core_measure < cert.L2;
  cert.valid = cert.whole_graph_valid;

  std::vector<Partition> candidates;
  if (partitions) {
    for (const auto& part : *partitions) {
      const auto problems = check_partition(graph, part);
      if (!problems.empty()) throw Error("invalid partition: " + problems.front());
      candidates.push_back(canonical(part));
    }
  } else if (n >= 2) {
    try {
      candidates = enumerate_partitions(graph, n);
    } catch (const Error&) {
      candidates = enumerate_partitions(graph, 2);
    }
  }

  double best_max = kInfiniteLength;
  for (const auto& part : candidates) {
    double worst = 0.0;
    for (const auto& edges : part.parts) worst = std::max(worst, measure_core(graph, edges));
    if (worst < best_max) {
      best_max = worst;
      cert.partition = part;
    }
  }
  if (cert.partition) {
    for (std::size_t i = 0; i < cert.partition->parts.size(); ++i) {
      const double m = measure_core(graph, cert.partition->parts[i]);
      cert.part_core_measures.push_back(m);
      if (!(m < cert.L2)) cert.offending_parts.push_back(i);
    }
    cert.valid = cert.valid || cert.offending_parts.empty();
  } else {
    cert.part_core_measures.push_back(cert.core_measure);
    if (!cert.whole_graph_valid) cert.offending_parts.push_back(0);
  }
  return cert;
}

ScalingCheck scaling_check(const GraphFunction& u, double lambda, double p) {
  require_subcritical(p);
  if (!(lambda > 0.0)) throw Error("lambda must be positive");
  const auto& mesh = u.mesh();
  const double factor = std::pow(lambda, (2.0 - p) / (6.0 - p));
  const double amplitude = std::pow(lambda, 2.0 / (6.0 - p));
  // The mesh is scaled with the graph, so nodes map onto nodes.
  auto scaled = std::make_shared<const Mesh>(homothety(mesh.graph(), factor), mesh.h_max() * factor,
                                             mesh.r_cut() * factor);
  const auto w = interpolate(scaled, [&](EdgeIndex e, double x) {
    return amplitude * u.evaluate(e, x / factor);
  });

  ScalingCheck s;
  s.lhs = energy_value(w, p);
  s.rhs = std::pow(lambda, (2.0 + p) / (6.0 - p)) * energy_value(u, p);
  const double denom = std::max(std::fabs(s.rhs), 1e-300);
  s.relative_gap = std::fabs(s.lhs - s.rhs) / denom;
  s.mass_w = l2_norm_sq(w);
  s.mass_target = lambda * l2_norm_sq(u);
  return s;
}

MassThresholds mass_thresholds(double p, double L, std::size_t half_lines,
                               std::optional<GnConstants> constants) {
  require_supercubic(p);
  if (!(L > 0.0)) throw Error("L must be positive");
  const auto k = resolve(constants, half_lines, p);
  const double n = static_cast<double>(half_lines);
  MassThresholds m;
  const double inv = (6.0 - p) / (p - 2.0);
  if (is_quartic(p)) {
    m.mu1 = n * n / (2.0 * L);
  } else {
    m.mu1 = std::pow(const_Cp(p) * std::pow(n, 4.0 / (6.0 - p)) / L, inv);
  }
  const double k2 = std::pow(k.C, (4.0 - p) / (6.0 - p)) * std::pow(k.c, -p);
  m.mu2 = std::pow(k2 / L, inv);
  m.consistent = m.mu2 <= m.mu1;
  return m;
}

InductiveTable inductive_bound_check(const GraphFunction& u, double p, double c, std::size_t n_max) {
  require_supercubic(p);
  if (!(c > 0.0)) throw Error("c must be positive");
  InductiveTable t;
  t.applicable = energy_value(u, p) <= 0.0;
  t.kinetic = kinetic_energy(u);
  const double mu = l2_norm_sq(u);
  const double ell = measure_core(u.mesh().graph());
  const double linf = linf_norm(u);
  if (!(mu > 0.0) || !(linf > 0.0)) throw Error("inductive bound needs a nonzero function");

  const double c4 = std::pow(c, 4.0);
  const double q = p / 4.0;
  double power = 1.0;  // q^i
  double geometric = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    geometric += power;
    power *= q;  // now q^(n+1)
    const double log_bound = -std::log(c4 * mu) + 4.0 * power * std::log(linf) +
                             geometric * std::log(c4 * mu * ell);
    InductiveRow row;
    row.n = n;
    row.bound = std::exp(log_bound);
    row.satisfied = t.kinetic <= row.bound * (1.0 + 1e-12);
    t.rows.push_back(row);
  }
  return t;
}

}  // namespace graphnls
