#include "graphnls/energy.hpp"

#include <algorithm>
#include <cmath>

namespace graphnls {

void require_subcritical(double p) {
  if (!(p > 2.0 && p < 6.0)) throw Error("p must be in (2,6)");
}

GnConstants default_gn_constants(std::size_t half_lines, double p) {
  GnConstants k;
  k.c = half_lines >= 2 ? 1.0 : std::sqrt(2.0);
  k.C = std::pow(k.c, p - 2.0);
  return k;
}

double energy_value(const GraphFunction& u, double p, NonlinearScope scope) {
  require_subcritical(p);
  return 0.5 * kinetic_energy(u) - lp_power(u, p, scope) / p;
}

EnergyReport energy(const GraphFunction& u, double p, NonlinearScope scope) {
  return energy(u, p, default_gn_constants(u.mesh().graph().half_line_count(), p), scope);
}

EnergyReport energy(const GraphFunction& u, double p, const GnConstants& constants,
                    NonlinearScope scope) {
  require_subcritical(p);
  EnergyReport r;
  r.kinetic = 0.5 * kinetic_energy(u);
  r.potential = lp_power(u, p, scope) / p;
  r.energy = r.kinetic - r.potential;
  r.mass = l2_norm_sq(u);
  r.linf = linf_norm(u);
  const auto slack = gn_check(u, p, constants.C, constants.c);
  r.gn_slack_p = slack.slack_p;
  r.gn_slack_inf = slack.slack_inf;
  return r;
}

namespace {

// d/du |u|^p / p
double load(double u, double p) { return u == 0.0 ? 0.0 : pow_abs(u, p - 2.0) * u; }

}  // namespace

GraphFunction energy_gradient(const GraphFunction& u, double p, NonlinearScope scope) {
  require_subcritical(p);
  const auto& mesh = u.mesh();
  GraphFunction g(u.mesh_ptr());
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    const bool nonlinear = mesh.weighted(e, scope);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const double a = u[d[i]], b = u[d[i + 1]];
      const double flux = (b - a) / h;
      g[d[i]] -= flux;
      g[d[i + 1]] += flux;
      if (nonlinear) {
        // Simpson on the cell: h/6 (|a|^p + 4|m|^p + |b|^p) / p
        const double fm = load(0.5 * (a + b), p);
        g[d[i]] -= h / 6.0 * (load(a, p) + 2.0 * fm);
        g[d[i + 1]] -= h / 6.0 * (load(b, p) + 2.0 * fm);
      }
    }
  }
  return g;
}

GnSlack gn_check(const GraphFunction& u, double p, double C, double c) {
  GnSlack s;
  const double l2 = std::sqrt(l2_norm_sq(u));
  const double d2 = std::sqrt(kinetic_energy(u));
  s.degenerate = d2 == 0.0;
  s.slack_p = C * std::pow(l2, 0.5 * p + 1.0) * std::pow(d2, 0.5 * p - 1.0) -
              lp_power(u, p, NonlinearScope::Everywhere);
  s.slack_inf = c * std::sqrt(l2) * std::sqrt(d2) - linf_norm(u);
  return s;
}

double ELReport::max_interior() const {
  return interior_residuals.empty()
             ? 0.0
             : *std::max_element(interior_residuals.begin(), interior_residuals.end());
}

double ELReport::max_kirchhoff() const {
  return kirchhoff_residuals.empty()
             ? 0.0
             : *std::max_element(kirchhoff_residuals.begin(), kirchhoff_residuals.end());
}

ELReport el_residual(const GraphFunction& u, double p, NonlinearScope scope) {
  require_subcritical(p);
  const double mass = l2_norm_sq(u);
  if (!(mass > 0.0)) throw Error("EL residual of the zero function is undefined");
  const auto& mesh = u.mesh();
  const auto& graph = mesh.graph();

  ELReport r;
  r.lambda = (lp_power(u, p, scope) - kinetic_energy(u)) / mass;

  // Second differences on edge interiors only.
  struct Row {
    double h, lap_plus_load, u;
  };
  std::vector<std::vector<Row>> rows(mesh.edge_count());
  double num = 0.0, den = 0.0;
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    const double kappa = mesh.weighted(e, scope) ? 1.0 : 0.0;
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
      const double lap = (u[d[i + 1]] - 2.0 * u[d[i]] + u[d[i - 1]]) / (h * h);
      const double v = u[d[i]];
      rows[e].push_back({h, lap + kappa * load(v, p), v});
      num += h * v * (lap + kappa * load(v, p));
      den += h * v * v;
    }
  }
  r.lambda_fit = den > 0.0 ? num / den : 0.0;
  r.interior_residuals.resize(mesh.edge_count());
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    double sum = 0.0;
    for (const auto& row : rows[e]) {
      const double res = row.lap_plus_load - r.lambda * row.u;
      sum += row.h * res * res;
    }
    r.interior_residuals[e] = std::sqrt(sum);
  }

  // Outgoing derivatives: u_e'(0) at the start, -u_e'(l_e) at the end,
  // both by second-order one-sided differences.
  r.kirchhoff_residuals.assign(graph.vertices().size(), 0.0);
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    const std::size_t n = d.size();
    const double start = (-3.0 * u[d[0]] + 4.0 * u[d[1]] - u[d[2]]) / (2.0 * h);
    r.kirchhoff_residuals[graph.edge(e).from] += start;
    if (!graph.edge(e).is_half_line()) {
      const double end = (3.0 * u[d[n - 1]] - 4.0 * u[d[n - 2]] + u[d[n - 3]]) / (2.0 * h);
      r.kirchhoff_residuals[graph.edge(e).to] -= end;
    }
  }
  for (auto& k : r.kirchhoff_residuals) k = std::fabs(k);
  return r;
}

}  // namespace graphnls
