#include "graphnls/check.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "graphnls/analysis.hpp"
#include "graphnls/solver.hpp"

namespace graphnls {

namespace {

std::vector<MetricGraph> shapes() {
  return {line_graph(1.5), double_bridge(1.0, 0.7), star_graph({1.0, 0.5, 0.8}, 1)};
}

// Random nonnegative function vanishing at the far ends of the half-lines.
GraphFunction random_function(const std::shared_ptr<const Mesh>& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.05, 1.0);
  GraphFunction u(mesh);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = uniform(rng);
  const auto& graph = mesh->graph();
  for (EdgeIndex e = 0; e < mesh->edge_count(); ++e) {
    if (!graph.edge(e).is_half_line()) continue;
    const auto d = mesh->edge_dofs(e);
    const double r = mesh->extent(e);
    for (std::size_t k = 1; k < d.size(); ++k) {
      const double x = mesh->coordinate(e, k);
      u[d[k]] *= std::exp(-x) * (1.0 - x / r);
    }
  }
  return u;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

CheckItem gradient_check(std::mt19937_64& rng) {
  CheckItem item{"gradient", true, ""};
  std::uniform_real_distribution<double> pdist(2.2, 5.8), sym(-1.0, 1.0);
  double worst = 0.0;
  std::size_t trials = 0;
  for (const auto& graph : shapes()) {
    auto mesh = std::make_shared<const Mesh>(graph, 0.1, 4.0);
    for (int k = 0; k < 34 && trials < 100; ++k, ++trials) {
      const double p = pdist(rng);
      auto u = random_function(mesh, rng);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += 0.2 * sym(rng);
      GraphFunction v(mesh);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = sym(rng);
      const auto g = energy_gradient(u, p);
      double analytic = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) analytic += g[i] * v[i];
      const double eps = 1e-5;
      GraphFunction up = u, um = u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        up[i] += eps * v[i];
        um[i] -= eps * v[i];
      }
      const double fd = (energy_value(up, p) - energy_value(um, p)) / (2.0 * eps);
      const double rel = std::fabs(fd - analytic) / std::max(std::fabs(analytic), 1e-8);
      worst = std::max(worst, rel);
      if (rel > 1e-4) item.passed = false;
    }
  }
  item.detail = std::to_string(trials) + " directions, worst relative error " + fmt(worst);
  return item;
}

CheckItem rearrangement_check(std::mt19937_64& rng) {
  CheckItem item{"rearrangement", true, ""};
  std::uniform_real_distribution<double> pdist(2.2, 5.8);
  double worst_eq = 0.0, worst_ps = 0.0;
  const auto graphs = shapes();
  for (int k = 0; k < 50; ++k) {
    auto mesh = std::make_shared<const Mesh>(graphs[k % graphs.size()], 0.1, 3.0);
    const auto u = random_function(mesh, rng);
    const auto star = decreasing_rearrangement(u);
    const double p = pdist(rng);
    for (double r : {2.0, p}) {
      const double a = power_integral(u, r), b = star.power_integral(r);
      worst_eq = std::max(worst_eq, std::fabs(a - b) / a);
    }
    worst_ps = std::min(worst_ps, kinetic_energy(u) - star.kinetic_energy());
    if (!star.nonincreasing()) item.passed = false;
  }
  if (worst_eq > 1e-8 || worst_ps < -1e-10) item.passed = false;
  item.detail = "50 functions, equimeasurability " + fmt(worst_eq) + ", Polya-Szego slack " + fmt(worst_ps);
  return item;
}

CheckItem gn_check_item(std::mt19937_64& rng, std::optional<double> inject_c) {
  CheckItem item{"gn_slack", true, ""};
  std::uniform_real_distribution<double> pdist(2.2, 5.8);
  std::size_t violations = 0, total = 0;
  auto graphs = shapes();
  graphs.push_back(star_graph({1.0}, 1));
  for (int k = 0; k < 40; ++k) {
    const auto& graph = graphs[k % graphs.size()];
    auto mesh = std::make_shared<const Mesh>(graph, 0.05, 6.0);
    const double p = pdist(rng);
    auto constants = default_gn_constants(graph.half_line_count(), p);
    if (inject_c) constants = {*inject_c, std::pow(*inject_c, p - 2.0)};
    auto u = random_function(mesh, rng);
    if (k % 4 == 0) {
      // Near-extremal profile for the L^inf inequality.
      u = interpolate(mesh, [&](EdgeIndex e, double x) {
        const auto& edge = graph.edge(e);
        const double r = mesh->extent(e);
        return edge.is_half_line() ? std::exp(-x) * (1.0 - x / r) : 1.0;
      });
    }
    const auto s = gn_check(u, p, constants.C, constants.c);
    const double tol = 1e-12 * std::max(1.0, linf_norm(u));
    total += 2;
    if (s.slack_inf < -tol) ++violations;
    if (s.slack_p < -tol) ++violations;
  }
  item.passed = violations == 0;
  item.detail = std::to_string(violations) + " violations in " + std::to_string(total) + " inequalities";
  if (inject_c) item.detail += " (injected c = " + fmt(*inject_c) + ")";
  return item;
}

CheckItem gn_equality_check() {
  CheckItem item{"gn_equality", true, ""};
  auto mesh = std::make_shared<const Mesh>(line_graph(0.02), 1e-3, 30.0);
  const auto u = interpolate(mesh, [&](EdgeIndex e, double x) {
    const auto& edge = mesh->graph().edge(e);
    if (!edge.is_half_line()) return std::exp(-std::fabs(x - 0.01));
    return std::exp(-(x + 0.01));
  });
  const auto s = gn_check(u, 4.0, 1.0, 1.0);
  item.passed = std::fabs(s.slack_inf) < 1e-3;
  item.detail = "slack_inf of exp(-|x|) with c = 1: " + fmt(s.slack_inf);
  return item;
}

CheckItem descent_check() {
  CheckItem item{"descent", true, ""};
  SolverConfig config;
  config.h_max = 0.1;
  config.r_cut_schedule = {8.0, 16.0};
  config.max_iters = 400;
  std::size_t runs = 0;
  for (auto init : {Initializer::Competitor, Initializer::Soliton, Initializer::Random}) {
    config.init = init;
    const auto r = minimize(line_graph(1.0), 1.0, 3.0, config);
    ++runs;
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
      if (r.trace[i].energy > r.trace[i - 1].energy) item.passed = false;
    }
    if (std::fabs(l2_norm_sq(r.state) - 1.0) > 1e-10) item.passed = false;
  }
  item.detail = std::to_string(runs) + " runs: nonincreasing traces, mass within 1e-10";
  return item;
}

CheckItem mass_projection_check(std::mt19937_64& rng) {
  CheckItem item{"mass_projection", true, ""};
  std::uniform_real_distribution<double> mdist(0.1, 10.0);
  double worst = 0.0;
  for (const auto& graph : shapes()) {
    auto mesh = std::make_shared<const Mesh>(graph, 0.1, 5.0);
    for (int k = 0; k < 10; ++k) {
      const double mu = mdist(rng);
      const auto u = project_mass(random_function(mesh, rng), mu);
      worst = std::max(worst, std::fabs(l2_norm_sq(u) - mu) / mu);
    }
  }
  item.passed = worst < 1e-10;
  item.detail = "worst relative mass error " + fmt(worst);
  return item;
}

CheckItem threshold_scaling_check() {
  CheckItem item{"threshold_scaling", true, ""};
  double worst = 0.0;
  for (double p : {4.0, 4.5, 5.0, 5.5}) {
    for (std::size_t n : {1u, 2u, 3u}) {
      const auto ref = thresholds(p, 1.0, n);
      for (double mu : {0.1, 0.5, 2.0, 7.0}) {
        const auto t = thresholds(p, mu, n);
        worst = std::max(worst, std::fabs(t.scaling_invariant_L1 / ref.scaling_invariant_L1 - 1.0));
        worst = std::max(worst, std::fabs(t.scaling_invariant_L2 / ref.scaling_invariant_L2 - 1.0));
        if (!t.consistent) item.passed = false;
      }
    }
  }
  if (worst > 1e-12) item.passed = false;
  item.detail = "invariants over a mu grid agree to " + fmt(worst) + "; L2 <= L1 throughout";
  return item;
}

CheckItem g_convexity_check() {
  CheckItem item{"g_convexity", true, ""};
  for (double p : {4.1, 4.5, 5.0, 5.5, 5.9}) {
    const double step = 0.01;
    for (double a = 0.05; a < 3.0; a += step) {
      const double second = g_function(a + step, 1.3, 2, p) - 2.0 * g_function(a, 1.3, 2, p) +
                            g_function(a - step, 1.3, 2, p);
      if (!(second > 0.0)) item.passed = false;
    }
  }
  item.detail = "second differences of g positive on p in {4.1,...,5.9}";
  return item;
}

CheckItem competitor_bridge_check(std::mt19937_64& rng) {
  CheckItem item{"competitor_bridge", true, ""};
  std::uniform_real_distribution<double> pdist(4.0, 5.9), mdist(0.2, 5.0), over(1.01, 3.0);
  std::uniform_int_distribution<int> ndist(1, 4);
  int cases = 0;
  for (int k = 0; k < 200; ++k, ++cases) {
    const double p = k % 5 == 0 ? 4.0 : pdist(rng);
    const double mu = mdist(rng);
    const auto n = static_cast<std::size_t>(ndist(rng));
    const double L = threshold_exist(p, mu, n) * over(rng);
    double a = 0.0;
    if (p == 4.0) {
      a = std::sqrt(0.5 * (mu - n * n / (2.0 * L)) / L);
    } else {
      a = g_critical_point(L, mu, n, p).a_bar;
    }
    if (!(competitor_energy(a, L, mu, n, p) < 0.0)) item.passed = false;
  }
  item.detail = std::to_string(cases) + " instances above L1 give a negative competitor";
  return item;
}

CheckItem dirichlet_check() {
  CheckItem item{"dirichlet_bound", true, ""};
  DirichletConfig config;
  config.h = 0.02;
  std::ostringstream detail;
  for (auto [m, a] : {std::pair{1.0, 1.0}, std::pair{4.0, 1.0}, std::pair{2.0, 0.8}}) {
    const auto r = dirichlet_line_min(m, a, config);
    const double exact = std::pow(a, 4.0) / m;
    if (r.kinetic < exact * (1.0 - 1e-3)) item.passed = false;
    detail << "(" << m << "," << a << "): " << fmt(r.kinetic) << " vs " << fmt(exact) << "  ";
  }
  item.detail = detail.str();
  return item;
}

CheckItem scaling_law_check(std::mt19937_64& rng) {
  CheckItem item{"scaling_law", true, ""};
  auto mesh = std::make_shared<const Mesh>(line_graph(2.0), 0.02, 8.0);
  double worst = 0.0, worst_mass = 0.0;
  for (double lambda : {0.5, 2.0}) {
    for (double p : {3.0, 4.5}) {
      const auto u = random_function(mesh, rng);
      const auto s = scaling_check(u, lambda, p);
      worst = std::max(worst, s.relative_gap);
      worst_mass = std::max(worst_mass, std::fabs(s.mass_w - s.mass_target) / s.mass_target);
    }
  }
  item.passed = worst < 1e-3 && worst_mass < 1e-6;
  item.detail = "energy gap " + fmt(worst) + ", mass gap " + fmt(worst_mass);
  return item;
}

CheckItem inductive_check() {
  CheckItem item{"inductive_bound", true, ""};
  auto mesh = std::make_shared<const Mesh>(line_graph(4.0), 0.05, 20.0);
  const auto u = initializer_competitor(mesh, 1.0, 4.0);
  const auto t = inductive_bound_check(u, 4.0, 1.0, 5);
  item.passed = t.applicable && !t.rows.empty() && t.rows.front().satisfied;
  item.detail = "base case n = 0 " + std::string(item.passed ? "holds" : "fails");
  return item;
}

CheckItem certificate_check() {
  CheckItem item{"certificate", true, ""};
  const auto yes = certify_nonexistence(double_bridge(0.9, 0.9), 4.0, 1.0);
  const auto no = certify_nonexistence(double_bridge(1.0, 1.0), 4.0, 1.0);
  item.passed = yes.valid && !yes.whole_graph_valid && !no.valid && !no.offending_parts.empty();
  item.detail = "double_bridge(0.9,0.9) valid via partition, (1,1) invalid";
  return item;
}

}  // namespace

std::vector<CheckItem> run_property_checks(const CheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::vector<CheckItem> items;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      items.push_back(fn());
    } catch (const std::exception& e) {
      items.push_back({name, false, std::string("exception: ") + e.what()});
    }
  };
  guarded("gradient", [&] { return gradient_check(rng); });
  guarded("rearrangement", [&] { return rearrangement_check(rng); });
  guarded("gn_slack", [&] { return gn_check_item(rng, options.inject_c); });
  guarded("gn_equality", [&] { return gn_equality_check(); });
  guarded("mass_projection", [&] { return mass_projection_check(rng); });
  guarded("descent", [&] { return descent_check(); });
  guarded("threshold_scaling", [&] { return threshold_scaling_check(); });
  guarded("g_convexity", [&] { return g_convexity_check(); });
  guarded("competitor_bridge", [&] { return competitor_bridge_check(rng); });
  guarded("dirichlet_bound", [&] { return dirichlet_check(); });
  guarded("scaling_law", [&] { return scaling_law_check(rng); });
  guarded("inductive_bound", [&] { return inductive_check(); });
  guarded("certificate", [&] { return certificate_check(); });
  return items;
}

}  // namespace graphnls
