// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance [--known-failures 3,11] [--only 1,2]
//
// Exit status is 0 when every failing criterion is listed as known.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "graphnls/analysis.hpp"
#include "graphnls/solver.hpp"

using namespace graphnls;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::set<int> parse_list(const char* s) {
  std::set<int> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.insert(std::stoi(item));
  return out;
}

std::shared_ptr<const Mesh> mesh_of(const MetricGraph& g, double h, double r_cut) {
  return std::make_shared<const Mesh>(g, h, r_cut);
}

// Nonnegative random function vanishing at the truncation ends.
GraphFunction random_decaying(std::shared_ptr<const Mesh> mesh, std::mt19937_64& rng, bool signed_values) {
  std::uniform_real_distribution<double> uniform(signed_values ? -1.0 : 0.0, 1.0);
  std::vector<double> v(mesh->dof_count());
  for (auto& x : v) x = uniform(rng);
  GraphFunction u(mesh, v);
  const auto& g = mesh->graph();
  for (EdgeIndex e = 0; e < mesh->edge_count(); ++e) {
    if (!g.edge(e).is_half_line()) continue;
    const auto dofs = mesh->edge_dofs(e);
    for (std::size_t j = 1; j < dofs.size(); ++j) {
      const double x = mesh->coordinate(e, j);
      u[dofs[j]] *= std::exp(-x) * (1.0 - x / mesh->r_cut());
    }
  }
  return u;
}

SolverConfig with_schedule(std::vector<double> r, double h = 0.05) {
  SolverConfig c;
  c.r_cut_schedule = std::move(r);
  c.h_max = h;
  return c;
}

// 1. Competitor energy against its closed form.
Outcome competitor_energy_match() {
  Timer t;
  const double a = 0.5, L = 1.0, mu = 1.0, p = 4.0;
  const std::size_t n = 2;
  const double m = (mu - a * a * L) / n;
  const double exact = std::pow(a, 4) * n * n / (8.0 * (mu - a * a * L)) - std::pow(a, p) * L / p;
  const auto g = line_graph(L);
  const auto u = interpolate(mesh_of(g, 1e-3, 40.0), [&](EdgeIndex e, double x) {
    return g.edge(e).is_half_line() ? a * std::exp(-a * a * x / (2.0 * m)) : a;
  });
  const double e = energy_value(u, p);
  const double rel = std::fabs(e - exact) / exact;
  const double secs = t.seconds();
  return {rel < 1e-3 && secs < 10.0,
          fmt("E_h = %.8f, closed form %.8f, rel err %.2e, %.2f s", e, exact, rel, secs)};
}

// 2. Threshold table.
Outcome threshold_table() {
  const double L1_quartic = thresholds(4.0, 1.0, 2).L1_exist;
  const double x = 5.0 * (5.0 - 4.0) / 16.0;
  const double c5 = std::pow(std::pow(x, 2.0 / 3.0) + 5.0 / 8.0 * std::pow(x, -1.0 / 3.0), 3.0);
  const double L1_quintic = thresholds(5.0, 1.0, 1).L1_exist;
  const bool ok = std::fabs(L1_quartic - 2.0) <= 1e-12 && std::fabs(L1_quintic - c5) <= 1e-12;
  return {ok, fmt("p=4,N=2: L1 = %.15g; p=5,N=1: L1 = %.15g vs C_5 = %.15g", L1_quartic, L1_quintic, c5)};
}

// 3. Existence band: stable negative minimum across truncations.
Outcome existence_band(std::vector<MinimizationResult>& keep) {
  bool ok = true;
  std::string detail;
  for (double L : {3.0, 4.0}) {
    Timer t;
    auto r = minimize(line_graph(L), 1.0, 4.0, with_schedule({20.0, 40.0}));
    const double e20 = r.r_cut_table[0].energy, e40 = r.r_cut_table[1].energy;
    const double drift = std::fabs(e40 - e20) / std::fabs(e40);
    const double secs = t.seconds();
    const bool point = r.verdict == Verdict::NegativeMinimum && drift < 0.01 && secs < 120.0;
    ok = ok && point;
    detail += fmt("%sL=%g: %s, E(20) = %.7f, E(40) = %.7f, drift %.2f%%, %.1f s", detail.empty() ? "" : "; ", L,
                  std::string(to_string(r.verdict)).c_str(), e20, e40, 100.0 * drift, secs);
    keep.push_back(std::move(r));
  }
  return {ok, detail};
}

// 4. Nonexistence band: energies rise monotonically to zero.
Outcome nonexistence_band() {
  bool ok = true;
  std::string detail;
  for (double L : {0.25, 0.5}) {
    const auto r = minimize(line_graph(L), 1.0, 4.0, with_schedule({10.0, 20.0, 40.0}));
    const auto& t = r.r_cut_table;
    const bool monotone = t[0].energy < t[1].energy && t[1].energy < t[2].energy && t[2].energy <= 0.0;
    const bool point = monotone && std::fabs(t[2].energy) < 1e-3 && r.verdict == Verdict::ZeroInfimumSuspected;
    ok = ok && point;
    detail += fmt("%sL=%g: %s, E = %.2e, %.2e, %.2e", detail.empty() ? "" : "; ", L,
                  std::string(to_string(r.verdict)).c_str(), t[0].energy, t[1].energy, t[2].energy);
  }
  return {ok, detail};
}

// 5. Unconditional existence for p in (2,4).
Outcome subquartic_existence() {
  bool ok = true;
  int runs = 0, negative = 0;
  std::string worst;
  double worst_e = -1e300;
  const std::pair<std::string, MetricGraph> graphs[] = {{"line(1)", line_graph(1.0)},
                                                        {"double_bridge(0.5,0.5)", double_bridge(0.5, 0.5)}};
  for (double p : {2.5, 3.0, 3.5}) {
    for (const auto& [name, g] : graphs) {
      const auto d = existence_dichotomy(g, 1.0, p, SolverConfig{});
      ok = ok && d.verdict == Verdict::NegativeMinimum;
      for (const auto& run : d.runs) {
        ++runs;
        if (run.result.verdict == Verdict::NegativeMinimum) ++negative;
        if (run.result.report.energy > worst_e) {
          worst_e = run.result.report.energy;
          worst = fmt("%s p=%g %s", name.c_str(), p, run.label.c_str());
        }
      }
    }
  }
  ok = ok && negative == runs;
  return {ok, fmt("%d/%d runs NEGATIVE_MINIMUM; highest energy %.3e (%s)", negative, runs, worst_e, worst.c_str())};
}

// 6. Dirichlet benchmark.
Outcome dirichlet_benchmark() {
  DirichletConfig c;
  c.h = 0.005;
  c.r_cut = 30.0;
  const double line = dirichlet_line_min(1.0, 1.0, c).kinetic;
  c.domain = DirichletDomain::HalfLine;
  const double half = dirichlet_line_min(1.0, 1.0, c).kinetic;
  const bool ok = line >= 0.99 && line <= 1.02 && half >= 0.2475 && half <= 0.255;
  return {ok, fmt("line %.6f (exact 1), half-line %.6f (exact 0.25)", line, half)};
}

// 7. Rearrangement suite.
Outcome rearrangement_suite() {
  std::mt19937_64 rng(7);
  const MetricGraph shapes[] = {line_graph(1.5), double_bridge(1.0, 0.5), star_graph({0.5, 1.0, 1.5}, 1)};
  const double p = 4.0;
  double worst_eq = 0.0, worst_ps = 1e300;
  int count = 0;
  for (int i = 0; i < 50; ++i, ++count) {
    const auto mesh = mesh_of(shapes[i % 3], 0.05, 6.0);
    const auto u = random_decaying(mesh, rng, false);
    const auto r = decreasing_rearrangement(u);
    for (double q : {2.0, p}) {
      const double lhs = power_integral(u, q);
      worst_eq = std::max(worst_eq, std::fabs(r.power_integral(q) - lhs) / lhs);
    }
    worst_ps = std::min(worst_ps, kinetic_energy(u) - r.kinetic_energy());
  }
  const bool ok = worst_eq <= 1e-8 && worst_ps >= -1e-10;
  return {ok, fmt("%d functions: max equimeasurability error %.2e, min kinetic slack %.3e", count, worst_eq, worst_ps)};
}

// 8. GN equality case.
Outcome gn_equality() {
  const auto g = line_graph(2.0);
  const auto u = interpolate(mesh_of(g, 1e-3, 30.0), [&](EdgeIndex e, double x) {
    return g.edge(e).is_half_line() ? std::exp(-(1.0 + x)) : std::exp(-std::fabs(x - 1.0));
  });
  const auto s = gn_check(u, 4.0, 1.0, 1.0);
  return {std::fabs(s.slack_inf) < 1e-3 && !s.degenerate, fmt("slack_inf = %.3e", s.slack_inf)};
}

// 9. Gradient check.
Outcome gradient_check() {
  std::mt19937_64 rng(9);
  const MetricGraph shapes[] = {line_graph(1.0), double_bridge(0.7, 1.3), star_graph({0.5, 1.0, 0.8}, 1)};
  std::uniform_real_distribution<double> pu(2.2, 5.8);
  int pass = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto mesh = mesh_of(shapes[i % 3], 0.05, 6.0);
    const double p = pu(rng);
    const auto u = random_decaying(mesh, rng, true);
    const auto v = random_decaying(mesh, rng, true);
    const double eps = 1e-5;
    GraphFunction up = u, um = u;
    for (std::size_t k = 0; k < u.size(); ++k) {
      up[k] += eps * v[k];
      um[k] -= eps * v[k];
    }
    const double fd = (energy_value(up, p) - energy_value(um, p)) / (2.0 * eps);
    const auto g = energy_gradient(u, p);
    double an = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) an += g[k] * v[k];
    const double rel = std::fabs(fd - an) / std::max(std::fabs(an), 1e-300);
    worst = std::max(worst, rel);
    if (rel < 1e-4) ++pass;
  }
  return {pass == 100, fmt("%d/100 within 1e-4, worst relative error %.2e", pass, worst)};
}

// 10. Scaling law.
Outcome scaling_law() {
  const auto g = line_graph(2.0);
  const auto mesh = mesh_of(g, 0.01, 20.0);
  const auto u = interpolate(mesh, [&](EdgeIndex e, double x) {
    if (g.edge(e).is_half_line()) return (g.edge(e).id == "left" ? 0.6 : 0.9) * std::exp(-x);
    return 0.6 + 0.15 * x + 0.4 * std::sin(std::acos(-1.0) * x / 2.0);
  });
  double worst = 0.0;
  for (double lambda : {0.5, 2.0})
    for (double p : {3.0, 4.5}) worst = std::max(worst, scaling_check(u, lambda, p).relative_gap);
  return {worst < 1e-3, fmt("max relative gap %.2e over lambda in {0.5,2}, p in {3,4.5}", worst)};
}

// 11. Euler-Lagrange and Kirchhoff residuals at the existence-band optimum.
Outcome el_kirchhoff(const std::vector<MinimizationResult>& band) {
  bool ok = true;
  std::string detail;
  for (const auto& r : band) {
    const double L = measure_core(r.state.mesh().graph());
    std::vector<double> residual;
    double kirchhoff = r.el.max_kirchhoff();
    for (double h : {0.1, 0.05, 0.025}) {
      const auto run = minimize(line_graph(L), 1.0, 4.0, with_schedule({20.0, 40.0}, h));
      residual.push_back(run.el.max_interior());
      kirchhoff = std::max(kirchhoff, run.el.max_kirchhoff());
      ok = ok && run.converged;
    }
    const double order = std::min(std::log2(residual[0] / residual[1]), std::log2(residual[1] / residual[2]));
    ok = ok && r.converged && kirchhoff < 1e-3 && order >= 1.0;
    detail += fmt("%sL=%g: max Kirchhoff %.2e, interior %.2e/%.2e/%.2e, order %.2f", detail.empty() ? "" : "; ", L,
                  kirchhoff, residual[0], residual[1], residual[2], order);
  }
  return {ok, detail};
}

// 12. Partition certificate.
Outcome partition_certificate() {
  const auto g = double_bridge(0.9, 0.9);
  const Partition split = canonical(Partition{{{*g.find_edge("upper"), *g.find_edge("left")},
                                               {*g.find_edge("lower"), *g.find_edge("right")}}});
  const auto given = certify_nonexistence(g, 4.0, 1.0, std::vector<Partition>{split});
  const auto searched = certify_nonexistence(g, 4.0, 1.0);
  const bool ok = given.valid && !given.whole_graph_valid && searched.valid && searched.partition == split &&
                  std::fabs(given.L2 - 1.0) < 1e-12;
  return {ok, fmt("meas(K) = %.2f vs L2 = %.2f (whole graph %s); parts %.2f + %.2f -> %s", given.core_measure,
                  given.L2, given.whole_graph_valid ? "passes" : "fails", given.part_core_measures[0],
                  given.part_core_measures[1], given.valid ? "valid" : "invalid")};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known, only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-failures" && i + 1 < argc) {
      known = parse_list(argv[++i]);
    } else if (arg == "--only" && i + 1 < argc) {
      only = parse_list(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: acceptance [--known-failures LIST] [--only LIST]\n");
      return 2;
    }
  }

  std::vector<MinimizationResult> band;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"competitor energy match", competitor_energy_match},
      {"threshold table", threshold_table},
      {"existence band", [&] { return existence_band(band); }},
      {"nonexistence band", nonexistence_band},
      {"p in (2,4) existence", subquartic_existence},
      {"Dirichlet benchmark", dirichlet_benchmark},
      {"rearrangement suite", rearrangement_suite},
      {"GN equality case", gn_equality},
      {"gradient check", gradient_check},
      {"scaling law", scaling_law},
      {"EL/Kirchhoff at optimum", [&] {
         if (band.empty()) existence_band(band);
         return el_kirchhoff(band);
       }},
      {"partition certificate", partition_certificate},
  };

  int failed = 0, unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (!known.count(id)) ++unexpected;
    }
  }
  std::printf("%d failed, %d not listed as known\n", failed, unexpected);
  return unexpected == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
