#include "graphnls/function_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace graphnls {

Mesh::Mesh(MetricGraph graph, double h_max, double r_cut)
    : graph_(std::move(graph)), h_max_(h_max), r_cut_(r_cut) {
  if (!(h_max > 0.0) || !std::isfinite(h_max)) throw Error("h_max must be positive");
  if (!(r_cut > 0.0) || !std::isfinite(r_cut)) throw Error("r_cut must be positive");
  const auto report = validate(graph_);
  if (!report.ok()) throw Error("inadmissible graph: " + report.violations.front().message);

  const auto& edges = graph_.edges();
  std::size_t next = graph_.vertices().size();
  mass_.assign(next, 0.0);
  dofs_.resize(edges.size());
  spacing_.resize(edges.size());
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    const double len = extent(e);
    const auto cells = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(len / h_max - 1e-9)));
    const double h = len / static_cast<double>(cells);
    spacing_[e] = h;
    auto& d = dofs_[e];
    d.resize(cells + 1);
    d.front() = edges[e].from;
    for (std::size_t i = 1; i < cells; ++i) d[i] = next++;
    d.back() = edges[e].is_half_line() ? next++ : edges[e].to;
    mass_.resize(next, 0.0);
    for (std::size_t i = 0; i < cells; ++i) {
      mass_[d[i]] += 0.5 * h;
      mass_[d[i + 1]] += 0.5 * h;
    }
  }
}

double Mesh::extent(EdgeIndex e) const {
  const auto& edge = graph_.edge(e);
  return edge.is_half_line() ? r_cut_ : edge.length;
}

double Mesh::total_measure() const {
  double m = 0.0;
  for (EdgeIndex e = 0; e < edge_count(); ++e) m += extent(e);
  return m;
}

std::uint64_t Mesh::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  mix(edge_count());
  mix(std::bit_cast<std::uint64_t>(r_cut_));
  for (EdgeIndex e = 0; e < edge_count(); ++e) {
    const auto& edge = graph_.edge(e);
    for (char c : edge.id) mix(static_cast<unsigned char>(c));
    mix(edge.from);
    mix(edge.to);
    mix(node_count(e));
    mix(std::bit_cast<std::uint64_t>(extent(e)));
  }
  return h;
}

// ---------------------------------------------------------------------------

GraphFunction::GraphFunction(std::shared_ptr<const Mesh> mesh)
    : mesh_(std::move(mesh)), values_(mesh_->dof_count(), 0.0) {}

GraphFunction::GraphFunction(std::shared_ptr<const Mesh> mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (values_.size() != mesh_->dof_count()) throw Error("value count does not match mesh");
  for (double v : values_)
    if (!std::isfinite(v)) throw Error("graph function values must be finite");
}

double GraphFunction::evaluate(EdgeIndex e, double x) const {
  const auto dofs = mesh_->edge_dofs(e);
  const double h = mesh_->spacing(e);
  const double s = std::clamp(x / h, 0.0, static_cast<double>(dofs.size() - 1));
  const auto i = std::min(static_cast<std::size_t>(s), dofs.size() - 2);
  const double t = s - static_cast<double>(i);
  return (1.0 - t) * values_[dofs[i]] + t * values_[dofs[i + 1]];
}

GraphFunction& GraphFunction::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

GraphFunction GraphFunction::abs() const {
  GraphFunction out = *this;
  for (auto& v : out.values_) v = std::fabs(v);
  return out;
}

double GraphFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

// ---------------------------------------------------------------------------

double pow_abs(double x, double p) {
  const double a = std::fabs(x);
  if (a < 1e-300) return 0.0;
  return std::exp(p * std::log(a));
}

double l2_norm_sq(const GraphFunction& u) {
  const auto& w = u.mesh().lumped_mass();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += w[i] * u[i] * u[i];
  return sum;
}

double kinetic_energy(const GraphFunction& u) {
  const auto& mesh = u.mesh();
  double sum = 0.0;
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const double du = u[d[i + 1]] - u[d[i]];
      sum += du * du / h;
    }
  }
  return sum;
}

double lp_power(const GraphFunction& u, double p, NonlinearScope scope) {
  const auto& mesh = u.mesh();
  double sum = 0.0;
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    if (!mesh.weighted(e, scope)) continue;
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    double edge_sum = 0.0;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const double a = u[d[i]], b = u[d[i + 1]];
      edge_sum += pow_abs(a, p) + 4.0 * pow_abs(0.5 * (a + b), p) + pow_abs(b, p);
    }
    sum += edge_sum * h / 6.0;
  }
  return sum;
}

double lp_norm_core(const GraphFunction& u, double p) {
  return std::pow(lp_power(u, p, NonlinearScope::Core), 1.0 / p);
}

double linf_norm(const GraphFunction& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::fabs(v));
  return m;
}

namespace {

// Exact integral of |linear|^r over a cell of length h with end values a, b.
double cell_power_integral(double a, double b, double r, double h) {
  if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
    const double s0 = a / (a - b);
    return h * (s0 * pow_abs(a, r) + (1.0 - s0) * pow_abs(b, r)) / (r + 1.0);
  }
  const double lo = std::min(std::fabs(a), std::fabs(b));
  const double hi = std::max(std::fabs(a), std::fabs(b));
  const double delta = hi - lo;
  if (delta <= 1e-6 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid == 0.0) return 0.0;
    const double q = delta / mid;
    return h * pow_abs(mid, r) * (1.0 + r * (r - 1.0) * q * q / 24.0);
  }
  return h * (pow_abs(hi, r + 1.0) - pow_abs(lo, r + 1.0)) / ((r + 1.0) * delta);
}

}  // namespace

double power_integral(const GraphFunction& u, double r) {
  const auto& mesh = u.mesh();
  double sum = 0.0;
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) sum += cell_power_integral(u[d[i]], u[d[i + 1]], r, h);
  }
  return sum;
}

GraphFunction project_mass(const GraphFunction& u, double mass) {
  if (!(mass > 0.0)) throw Error("mass must be positive");
  const double current = l2_norm_sq(u);
  if (!(current > 0.0)) throw Error("cannot project the zero function onto a mass sphere");
  GraphFunction out = u;
  out *= std::sqrt(mass / current);
  return out;
}

// ---------------------------------------------------------------------------

double Profile1D::kinetic_energy() const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    const double dv = value[i + 1] - value[i];
    if (dx > 0.0) sum += dv * dv / dx;
  }
  return sum;
}

double Profile1D::power_integral(double r) const {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double dx = x[i + 1] - x[i];
    if (dx > 0.0) sum += cell_power_integral(value[i], value[i + 1], r, dx);
  }
  return sum;
}

double Profile1D::operator()(double at) const {
  if (x.empty()) return 0.0;
  if (at <= x.front()) return value.front();
  if (at >= x.back()) return value.back();
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  const auto i = static_cast<std::size_t>(it - x.begin()) - 1;
  const double dx = x[i + 1] - x[i];
  if (dx <= 0.0) return value[i];
  const double t = (at - x[i]) / dx;
  return (1.0 - t) * value[i] + t * value[i + 1];
}

bool Profile1D::nonincreasing() const {
  for (std::size_t i = 0; i + 1 < value.size(); ++i)
    if (value[i + 1] > value[i] || x[i + 1] < x[i]) return false;
  return true;
}

Profile1D decreasing_rearrangement(const GraphFunction& u) {
  const auto& mesh = u.mesh();
  for (double v : u.values())
    if (v < 0.0) throw Error("decreasing rearrangement needs a nonnegative function (take |u|)");

  struct Cell {
    double lo, hi, h;
  };
  std::vector<Cell> rising;  // cells with hi > lo
  std::map<double, double, std::greater<>> flat;  // level -> measure of constant cells
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double h = mesh.spacing(e);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      const double a = u[d[i]], b = u[d[i + 1]];
      if (a == b) {
        flat[a] += h;
      } else {
        rising.push_back({std::min(a, b), std::max(a, b), h});
      }
    }
  }

  std::vector<double> levels(u.values().begin(), u.values().end());
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Slope of rho between consecutive levels changes where cells start or end.
  std::map<double, double, std::greater<>> slope_on, slope_off;
  for (const auto& c : rising) {
    const double s = c.h / (c.hi - c.lo);
    slope_on[c.hi] += s;
    slope_off[c.lo] += s;
  }

  Profile1D out;
  double rho = 0.0;
  double slope = 0.0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double t = levels[k];
    if (k > 0) rho += slope * (levels[k - 1] - t);
    out.x.push_back(rho);
    out.value.push_back(t);
    if (auto it = slope_off.find(t); it != slope_off.end()) slope -= it->second;
    if (auto it = slope_on.find(t); it != slope_on.end()) slope += it->second;
    if (auto it = flat.find(t); it != flat.end()) {
      rho += it->second;
      out.x.push_back(rho);
      out.value.push_back(t);
    }
  }
  if (out.x.size() == 1) {
    out.x.push_back(out.x.front());
    out.value.push_back(out.value.front());
  }
  return out;
}

// ---------------------------------------------------------------------------

GraphFunction interpolate(std::shared_ptr<const Mesh> mesh, const Placement& profile) {
  const std::size_t n = mesh->dof_count();
  std::vector<double> values(n, 0.0);
  std::vector<bool> set(n, false);
  for (EdgeIndex e = 0; e < mesh->edge_count(); ++e) {
    const auto d = mesh->edge_dofs(e);
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double v = profile(e, mesh->coordinate(e, i));
      if (!std::isfinite(v)) throw Error("placement produced a non-finite value");
      if (set[d[i]]) {
        const double prev = values[d[i]];
        if (std::fabs(prev - v) > 1e-9 * std::max(1.0, std::fabs(prev)))
          throw Error("discontinuous placement at a vertex of edge '" + mesh->graph().edge(e).id + "'");
      } else {
        values[d[i]] = v;
        set[d[i]] = true;
      }
    }
  }
  return GraphFunction(std::move(mesh), std::move(values));
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void write_function_csv(std::ostream& out, const GraphFunction& u) {
  const auto& mesh = u.mesh();
  out << "# graphnls state v1 mesh_hash=" << hex64(mesh.hash()) << '\n';
  out << "edge_id,local_coordinate,value\n";
  out << std::setprecision(17);
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto& id = mesh.graph().edge(e).id;
    for (std::size_t i = 0; i < mesh.node_count(e); ++i)
      out << id << ',' << mesh.coordinate(e, i) << ',' << u.at(e, i) << '\n';
  }
}

GraphFunction read_function_csv(std::istream& in, std::shared_ptr<const Mesh> mesh) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "empty state file");
  const std::string key = "mesh_hash=";
  const auto pos = line.find(key);
  if (line.rfind("#", 0) != 0 || pos == std::string::npos) throw ParseError(1, "missing mesh hash header");
  if (line.substr(pos + key.size(), 16) != hex64(mesh->hash()))
    throw ParseError(1, "mesh hash mismatch");
  if (!std::getline(in, line) || line != "edge_id,local_coordinate,value")
    throw ParseError(2, "expected column header edge_id,local_coordinate,value");

  std::vector<double> values(mesh->dof_count(), 0.0);
  std::vector<std::size_t> cursor(mesh->edge_count(), 0);
  std::size_t number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, xs, vs;
    if (!std::getline(ss, id, ',') || !std::getline(ss, xs, ',') || !std::getline(ss, vs))
      throw ParseError(number, "expected three columns");
    const auto e = mesh->graph().find_edge(id);
    if (!e) throw ParseError(number, "unknown edge '" + id + "'");
    auto& i = cursor[*e];
    if (i >= mesh->node_count(*e)) throw ParseError(number, "too many nodes for edge '" + id + "'");
    double v = 0.0;
    try {
      v = std::stod(vs);
    } catch (const std::exception&) {
      throw ParseError(number, "malformed value");
    }
    values[mesh->edge_dofs(*e)[i]] = v;
    ++i;
  }
  for (EdgeIndex e = 0; e < mesh->edge_count(); ++e)
    if (cursor[e] != mesh->node_count(e))
      throw ParseError(number, "missing nodes for edge '" + mesh->graph().edge(e).id + "'");
  return GraphFunction(std::move(mesh), std::move(values));
}

}  // namespace graphnls
