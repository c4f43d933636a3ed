#ifndef GRAPHNLS_FUNCTION_SPACE_HPP
#define GRAPHNLS_FUNCTION_SPACE_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "graphnls/graph.hpp"

namespace graphnls {

/// Where the nonlinear term acts. Everywhere is a diagnostic mode
/// (kappa = 1 on every edge) used to compare against full-line problems.
enum class NonlinearScope { Core, Everywhere };

/// Uniform P1 mesh of every edge; half-lines are truncated at r_cut and
/// keep a free far end. Each vertex is one shared degree of freedom.
class Mesh {
 public:
  Mesh(MetricGraph graph, double h_max, double r_cut);

  const MetricGraph& graph() const { return graph_; }
  double h_max() const { return h_max_; }
  double r_cut() const { return r_cut_; }

  std::size_t dof_count() const { return mass_.size(); }
  std::size_t edge_count() const { return dofs_.size(); }
  std::size_t node_count(EdgeIndex e) const { return dofs_.at(e).size(); }
  double spacing(EdgeIndex e) const { return spacing_.at(e); }
  /// Meshed length of the edge (its length, or r_cut for a half-line).
  double extent(EdgeIndex e) const;
  double coordinate(EdgeIndex e, std::size_t local) const {
    return static_cast<double>(local) * spacing_.at(e);
  }
  std::span<const std::size_t> edge_dofs(EdgeIndex e) const { return dofs_.at(e); }
  std::size_t vertex_dof(VertexIndex v) const { return v; }
  bool weighted(EdgeIndex e, NonlinearScope scope) const {
    return scope == NonlinearScope::Everywhere || !graph_.edge(e).is_half_line();
  }

  /// Trapezoid (lumped) mass weight of each dof.
  const std::vector<double>& lumped_mass() const { return mass_; }
  double total_measure() const;
  std::uint64_t hash() const;

 private:
  MetricGraph graph_;
  double h_max_;
  double r_cut_;
  std::vector<std::vector<std::size_t>> dofs_;
  std::vector<double> spacing_;
  std::vector<double> mass_;
};

/// Continuous piecewise-linear function on a mesh, one value per dof.
class GraphFunction {
 public:
  explicit GraphFunction(std::shared_ptr<const Mesh> mesh);
  GraphFunction(std::shared_ptr<const Mesh> mesh, std::vector<double> values);

  const Mesh& mesh() const { return *mesh_; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return mesh_; }

  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  /// Value at node `local` of edge e.
  double at(EdgeIndex e, std::size_t local) const { return values_[mesh_->edge_dofs(e)[local]]; }
  /// Linear interpolation at coordinate x of edge e (clamped to the mesh).
  double evaluate(EdgeIndex e, double x) const;

  GraphFunction& operator*=(double s);
  GraphFunction abs() const;
  double min_value() const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  std::vector<double> values_;
};

/// |x|^p with |x| below 1e-300 treated as zero.
double pow_abs(double x, double p);

double l2_norm_sq(const GraphFunction& u);
double kinetic_energy(const GraphFunction& u);
/// Simpson quadrature of |u|^p on the weighted edges (p-th power, no root).
double lp_power(const GraphFunction& u, double p, NonlinearScope scope = NonlinearScope::Core);
double lp_norm_core(const GraphFunction& u, double p);
double linf_norm(const GraphFunction& u);

/// Exact integral of |u|^r for the piecewise-linear interpolant.
double power_integral(const GraphFunction& u, double r);

GraphFunction project_mass(const GraphFunction& u, double mass);

/// Breakpoint representation of a continuous piecewise-linear function on
/// [x.front(), x.back()].
struct Profile1D {
  std::vector<double> x;
  std::vector<double> value;

  double length() const { return x.empty() ? 0.0 : x.back() - x.front(); }
  double kinetic_energy() const;
  double power_integral(double r) const;
  double operator()(double at) const;
  bool nonincreasing() const;
};

/// Decreasing rearrangement of a nonnegative u onto [0, total meshed measure].
/// Level-set lengths are taken on the interpolant, so the result is exactly
/// equimeasurable with u.
Profile1D decreasing_rearrangement(const GraphFunction& u);

using Placement = std::function<double(EdgeIndex, double)>;

/// Samples `profile(edge, x)` at every node. All samples landing on a shared
/// vertex must agree within 1e-9, otherwise Error.
GraphFunction interpolate(std::shared_ptr<const Mesh> mesh, const Placement& profile);

void write_function_csv(std::ostream& out, const GraphFunction& u);
GraphFunction read_function_csv(std::istream& in, std::shared_ptr<const Mesh> mesh);

}  // namespace graphnls

#endif  // GRAPHNLS_FUNCTION_SPACE_HPP
