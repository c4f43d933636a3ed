#ifndef GRAPHNLS_ENERGY_HPP
#define GRAPHNLS_ENERGY_HPP

#include <vector>

#include "graphnls/function_space.hpp"

namespace graphnls {

/// Throws Error unless 2 < p < 6.
void require_subcritical(double p);

/// Constants of the L^inf and L^p Gagliardo-Nirenberg inequalities.
struct GnConstants {
  double c = 1.0;  // L^inf constant
  double C = 1.0;  // L^p constant
};

/// Conservative explicit constants: c = sqrt(2) with one half-line, c = 1
/// with two or more, and C = c^(p-2) from |u|_p^p <= |u|_inf^(p-2) |u|_2^2.
GnConstants default_gn_constants(std::size_t half_lines, double p);

struct EnergyReport {
  double energy = 0.0;
  double kinetic = 0.0;    // 1/2 |u'|^2
  double potential = 0.0;  // 1/p int_K |u|^p
  double mass = 0.0;
  double linf = 0.0;
  double gn_slack_p = 0.0;
  double gn_slack_inf = 0.0;
};

EnergyReport energy(const GraphFunction& u, double p,
                    NonlinearScope scope = NonlinearScope::Core);
EnergyReport energy(const GraphFunction& u, double p, const GnConstants& constants,
                    NonlinearScope scope = NonlinearScope::Core);

/// E alone, without the report extras.
double energy_value(const GraphFunction& u, double p,
                    NonlinearScope scope = NonlinearScope::Core);

/// Nodal gradient of the discrete energy: stiffness action minus the
/// nonlinear load. <gradient, v> is the exact directional derivative.
GraphFunction energy_gradient(const GraphFunction& u, double p,
                              NonlinearScope scope = NonlinearScope::Core);

struct GnSlack {
  double slack_p = 0.0;
  double slack_inf = 0.0;
  bool degenerate = false;  // |u'| == 0
};

/// slack_p uses |u|_p^p over all of the graph, not just K.
GnSlack gn_check(const GraphFunction& u, double p, double C, double c);

struct ELReport {
  double lambda = 0.0;      // from pairing the equation with u
  double lambda_fit = 0.0;  // least-squares fit of the interior residual
  std::vector<double> interior_residuals;  // per edge, discrete L2 norm
  std::vector<double> kirchhoff_residuals;  // per vertex

  double max_interior() const;
  double max_kirchhoff() const;
};

ELReport el_residual(const GraphFunction& u, double p,
                     NonlinearScope scope = NonlinearScope::Core);

}  // namespace graphnls

#endif  // GRAPHNLS_ENERGY_HPP
