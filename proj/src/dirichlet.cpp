#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "graphnls/solver.hpp"

namespace graphnls {

namespace {

// Symmetric tridiagonal system on the free nodes: diag[i], off[i] couples
// i and i+1 (zero across the pinned node).
std::vector<double> thomas(const std::vector<double>& diag, const std::vector<double>& off,
                           const std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n), x(n);
  double denom = diag[0];
  c[0] = n > 1 ? off[0] / denom : 0.0;
  d[0] = rhs[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = diag[i] - off[i - 1] * c[i - 1];
    c[i] = i + 1 < n ? off[i] / denom : 0.0;
    d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace

DirichletResult dirichlet_line_min(double m, double a, const DirichletConfig& config) {
  if (!(m > 0.0) || !(a > 0.0)) throw Error("m and a must be positive");
  if (!(config.h > 0.0) || !(config.r_cut > config.h)) throw Error("need 0 < h < r_cut");
  if (!(config.grad_tol > 0.0) || config.max_iters == 0) throw Error("invalid solver tolerances");

  const auto cells = static_cast<std::size_t>(std::ceil(config.r_cut / config.h - 1e-9));
  const double h = config.r_cut / static_cast<double>(cells);
  const bool line = config.domain == DirichletDomain::Line;
  const std::size_t nodes = line ? 2 * cells + 1 : cells + 1;
  const std::size_t pin = line ? cells : 0;

  DirichletResult result;
  result.x.resize(nodes);
  std::vector<double> w(nodes, h);
  for (std::size_t i = 0; i < nodes; ++i)
    result.x[i] = (static_cast<double>(i) - static_cast<double>(pin)) * h;
  w.front() = w.back() = 0.5 * h;

  const double free_mass = m - w[pin] * a * a;
  if (!(free_mass > 0.0)) throw Error("infeasible: a^2 h exceeds the mass at this mesh");

  auto& v = result.values;
  v.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) v[i] = a * std::exp(-std::fabs(result.x[i]));
  auto retract = [&](std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes; ++i)
      if (i != pin) s += w[i] * u[i] * u[i];
    const double f = std::sqrt(free_mass / s);
    for (std::size_t i = 0; i < nodes; ++i)
      if (i != pin) u[i] *= f;
    u[pin] = a;
  };
  auto kinetic = [&](const std::vector<double>& u) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < nodes; ++i) s += (u[i + 1] - u[i]) * (u[i + 1] - u[i]) / h;
    return s;
  };
  retract(v);

  // Free-node index list and preconditioner structure.
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < nodes; ++i)
    if (i != pin) free.push_back(i);
  const std::size_t nf = free.size();
  const double sigma_floor = std::pow(std::numbers::pi / (result.x.back() - result.x.front()), 2.0);

  const double eps = std::numeric_limits<double>::epsilon();
  double step = 1.0;
  double value = kinetic(v);
  for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
    result.iterations = iter;
    // Gradient of |v'|^2 on the free nodes.
    std::vector<double> g(nf), wv(nf);
    double vg = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
      const std::size_t i = free[k];
      double av = 0.0;
      if (i > 0) av += (v[i] - v[i - 1]) / h;
      if (i + 1 < nodes) av += (v[i] - v[i + 1]) / h;
      g[k] = 2.0 * av;
      wv[k] = w[i] * v[i];
      vg += v[i] * g[k];
    }
    const double nu = -0.5 * vg / free_mass;
    double grad_norm = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
      const double r = 0.5 * g[k] + nu * wv[k];
      grad_norm += r * r / w[free[k]];
    }
    grad_norm = std::sqrt(grad_norm);
    if (grad_norm < config.grad_tol) {
      result.converged = true;
      break;
    }

    const double sigma = std::max(nu, sigma_floor);
    std::vector<double> diag(nf), off(nf > 0 ? nf - 1 : 0);
    for (std::size_t k = 0; k < nf; ++k) {
      const std::size_t i = free[k];
      diag[k] = ((i > 0) + (i + 1 < nodes)) / h + sigma * w[i];
      if (k + 1 < nf) off[k] = free[k + 1] == i + 1 ? -1.0 / h : 0.0;
    }
    std::vector<double> half_g(nf);
    for (std::size_t k = 0; k < nf; ++k) half_g[k] = 0.5 * g[k];
    const auto z1 = thomas(diag, off, half_g);
    const auto z2 = thomas(diag, off, wv);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
      num += wv[k] * z1[k];
      den += wv[k] * z2[k];
    }
    const double beta = num / den;
    std::vector<double> d(nf);
    double slope = 0.0;
    for (std::size_t k = 0; k < nf; ++k) {
      d[k] = z1[k] - beta * z2[k];
      slope += g[k] * d[k];
    }
    if (!(slope > 100.0 * eps * value)) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    std::vector<double> trial(nodes);
    while (step * slope > 10.0 * eps * value) {
      trial = v;
      for (std::size_t k = 0; k < nf; ++k) trial[free[k]] -= step * d[k];
      retract(trial);
      const double t = kinetic(trial);
      if (t <= value - 1e-4 * step * slope) {
        v.swap(trial);
        value = t;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step = std::min(2.0 * step, 8.0);
  }
  result.kinetic = value;
  return result;
}

}  // namespace graphnls
