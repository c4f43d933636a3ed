#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>

#include "graphnls/analysis.hpp"
#include "graphnls/solver.hpp"

using namespace graphnls;

namespace {

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

SolverConfig schedule(std::vector<double> r) {
  SolverConfig c;
  c.r_cut_schedule = std::move(r);
  return c;
}

}  // namespace

TEST_CASE("soliton constants solve the profile equation") {
  for (double p : {2.5, 3.0, 4.0, 4.5, 5.5}) {
    const auto k = soliton_constants(p);
    const double m = 2.0 / (p - 2.0);
    // phi = A sech^m(g x): phi'' = A g^2 (m^2 sech^m - m(m+1) sech^(m+2)).
    for (double x : {0.0, 0.3, 1.1, 2.7, 5.0}) {
      const double s = 1.0 / std::cosh(k.rate * x);
      const double phi = k.amplitude * std::pow(s, m);
      const double d2 = k.amplitude * k.rate * k.rate * (m * m * std::pow(s, m) - m * (m + 1.0) * std::pow(s, m + 2.0));
      CHECK(std::fabs(d2 + std::pow(phi, p - 1.0) - k.lambda * phi) < 1e-8);
      CHECK(soliton_profile(x, 1.0, p) == doctest::Approx(phi).epsilon(1e-14));
    }
    const double mass = 2.0 * simpson([&](double x) { return std::pow(soliton_profile(x, 1.0, p), 2); }, 0.0, 200.0 / k.rate, 200000);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    // Mass scaling of the family.
    const double mu = 2.5;
    const double width = 1.0 / (k.rate * std::pow(mu, (p - 2.0) / (6.0 - p)));
    const double mass_mu = 2.0 * simpson([&](double x) { return std::pow(soliton_profile(x, mu, p), 2); }, 0.0, 200.0 * width, 200000);
    CHECK(mass_mu == doctest::Approx(mu).epsilon(1e-9));
  }
  // Quartic case: sech profile with amplitude^2 = 2 lambda.
  const auto k4 = soliton_constants(4.0);
  CHECK(k4.amplitude * k4.amplitude == doctest::Approx(2.0 * k4.lambda).epsilon(1e-14));
  CHECK(k4.rate == doctest::Approx(std::sqrt(k4.lambda)).epsilon(1e-14));
}

TEST_CASE("whole-line soliton has negative energy") {
  const double mu = 1.0, p = 4.0;
  const auto g = line_graph(2.0);
  const auto mesh = std::make_shared<const Mesh>(g, 0.01, 30.0);
  const auto u = project_mass(interpolate(mesh, [&](EdgeIndex e, double x) {
    return soliton_profile(g.edge(e).is_half_line() ? 1.0 + x : std::fabs(x - 1.0), mu, p);
  }), mu);
  CHECK(l2_norm_sq(u) == doctest::Approx(mu).epsilon(1e-10));
  CHECK(energy_value(u, p, NonlinearScope::Everywhere) < 0.0);
}

TEST_CASE("descent keeps the mass and never increases the energy") {
  const double mu = 1.0, p = 3.0;
  const auto mesh = std::make_shared<const Mesh>(double_bridge(1.0, 0.5), 0.05, 30.0);
  SolverConfig config;
  const auto start = initializer_random(mesh, mu, 4);
  CHECK(l2_norm_sq(start) == doctest::Approx(mu).epsilon(1e-10));
  const auto run = descend(start, mu, p, config);
  CHECK(run.converged);
  for (std::size_t i = 1; i < run.trace.size(); ++i) CHECK(run.trace[i].energy <= run.trace[i - 1].energy);
  CHECK(std::fabs(l2_norm_sq(run.state) - mu) <= 1e-10 * mu);

  // Stationarity: gradient minus lambda times the mass action.
  const auto g = energy_gradient(run.state, p);
  const auto& w = mesh->lumped_mass();
  double gu = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) gu += g[i] * run.state[i];
  const double lambda = -gu / mu;
  double res = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g[i] + lambda * w[i] * run.state[i];
    res += r * r / w[i];
  }
  CHECK(std::sqrt(res) < 1e-6);
}

TEST_CASE("initializers") {
  const double mu = 1.0;
  const auto g = line_graph(10.0);
  const auto mesh = std::make_shared<const Mesh>(g, 0.05, 40.0);
  const auto comp = initializer_competitor(mesh, mu, 4.5);
  CHECK(l2_norm_sq(comp) == doctest::Approx(mu).epsilon(1e-10));
  CHECK(energy_value(comp, 4.5) < 0.0);
  // Small amplitude, p below 4: the potential wins.
  CHECK(competitor_energy(0.05, 1.0, 1.0, 2, 3.0) < 0.0);

  const auto core = *g.find_edge("core");
  const auto sol = initializer_soliton(mesh, mu, 4.0, core, 1.5);
  CHECK(l2_norm_sq(sol) == doctest::Approx(mu).epsilon(1e-10));
  std::size_t argmax = 0;
  for (std::size_t j = 0; j < mesh->node_count(core); ++j)
    if (sol.at(core, j) > sol.at(core, argmax)) argmax = j;
  CHECK(mesh->coordinate(core, argmax) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK_THROWS_AS(initializer_soliton(mesh, mu, 4.0, *g.find_edge("left"), 0.0), Error);

  const auto a = initializer_random(mesh, mu, 9), b = initializer_random(mesh, mu, 9);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("verdict classification") {
  const double tol = 1e-6;
  auto table = [](std::vector<double> e) {
    std::vector<RcutEntry> t;
    double r = 10.0;
    for (double x : e) {
      t.push_back({r, x, 5, true});
      r *= 2.0;
    }
    return t;
  };
  CHECK(classify(table({-0.1, -0.1001, -0.1001}), tol) == Verdict::NegativeMinimum);
  CHECK(classify(table({-4e-4, -1e-4, -2.5e-5}), tol) == Verdict::ZeroInfimumSuspected);
  CHECK(classify(table({-0.01, -0.006, -0.005}), tol) == Verdict::Inconclusive);
  auto unconverged = table({-0.1, -0.1, -0.1});
  unconverged.back().converged = false;
  CHECK(classify(unconverged, tol) == Verdict::Inconclusive);

  // Aitken on a geometric sequence recovers its limit.
  CHECK(extrapolated_limit(table({-1.0, -0.5, -0.25})) == doctest::Approx(0.0));
  CHECK(extrapolated_limit(table({-2.0, -1.5, -1.25})) == doctest::Approx(-1.0));
}

TEST_CASE("initializer independence for p below 4") {
  const double mu = 1.0, p = 3.0;
  const auto g = line_graph(2.0);
  std::vector<double> energies;
  for (auto init : {Initializer::Competitor, Initializer::Soliton, Initializer::Random}) {
    auto c = schedule({20.0, 40.0});
    c.init = init;
    const auto r = minimize(g, mu, p, c);
    CHECK(r.verdict == Verdict::NegativeMinimum);
    CHECK(r.strictly_positive);
    CHECK(std::fabs(r.report.mass - mu) <= 1e-10);
    energies.push_back(r.report.energy);
  }
  CHECK(std::fabs(energies[0] - energies[1]) < 1e-4);
  CHECK(std::fabs(energies[0] - energies[2]) < 1e-4);
}

TEST_CASE("soliton start on a long core finds a negative minimum") {
  auto c = schedule({20.0, 40.0});
  c.init = Initializer::Soliton;
  const auto r = minimize(line_graph(4.0), 1.0, 4.0, c);
  CHECK(r.report.energy < 0.0);
  CHECK(r.verdict == Verdict::NegativeMinimum);
}

TEST_CASE("dichotomy") {
  const auto neg = existence_dichotomy(double_bridge(1.0, 1.0), 1.0, 3.0, schedule({10, 20, 40}), 2);
  CHECK(neg.verdict == Verdict::NegativeMinimum);
  CHECK(neg.runs.size() == 7);
  CHECK(neg.table.size() == 3);

  const auto quartic = existence_dichotomy(line_graph(4.0), 1.0, 4.0, schedule({20, 40}), 2);
  CHECK(quartic.verdict == Verdict::NegativeMinimum);

  const auto zero = existence_dichotomy(line_graph(0.5), 1.0, 4.0, schedule({10, 20, 40}), 2);
  CHECK(zero.verdict == Verdict::ZeroInfimumSuspected);

  const auto quintic = existence_dichotomy(line_graph(0.05), 1.0, 5.0, schedule({10, 20, 40}), 2);
  CHECK(quintic.verdict == Verdict::ZeroInfimumSuspected);

  // Thread count does not change the outcome.
  const auto serial = existence_dichotomy(line_graph(0.5), 1.0, 4.0, schedule({10, 20, 40}), 1);
  REQUIRE(serial.table.size() == zero.table.size());
  for (std::size_t i = 0; i < serial.table.size(); ++i) CHECK(serial.table[i].energy == zero.table[i].energy);
}

TEST_CASE("default schedule") {
  const auto s = default_r_cut_schedule(line_graph(3.0), 1.0, 4.0);
  REQUIRE(s.size() == 3);
  CHECK(s[1] == doctest::Approx(2.0 * s[0]));
  CHECK(s[2] == doctest::Approx(4.0 * s[0]));
  CHECK(s[0] >= 10.0);
  CHECK(default_r_cut_schedule(line_graph(0.25), 1.0, 3.5)[2] <= 2000.0 * (1 + 1e-12));
}

TEST_CASE("configuration errors") {
  SolverConfig bad;
  bad.backtrack = 1.5;
  CHECK_THROWS_AS(bad.check(), Error);
  SolverConfig unsorted;
  unsorted.r_cut_schedule = {20.0, 10.0};
  CHECK_THROWS_AS(unsorted.check(), Error);
  CHECK_THROWS_AS(minimize(line_graph(1.0), 1.0, 6.0, SolverConfig{}), Error);
  CHECK_THROWS_AS(minimize(line_graph(1.0), -1.0, 3.0, SolverConfig{}), Error);
  CHECK_THROWS_AS(parse_initializer("gaussian"), Error);
  CHECK(parse_initializer("soliton") == Initializer::Soliton);
}

TEST_CASE("Dirichlet benchmark") {
  DirichletConfig c;
  c.h = 0.005;
  c.r_cut = 30.0;
  const auto line = dirichlet_line_min(1.0, 1.0, c);
  CHECK(line.kinetic == doctest::Approx(1.0).epsilon(0.01));
  const auto wide = dirichlet_line_min(4.0, 1.0, c);
  CHECK(wide.kinetic == doctest::Approx(0.25).epsilon(0.01));

  // Half-line: closed-form kinetic term of a e^{-a^2 x / (2m)}.
  const double a = 1.0, m = 1.0, r = a * a / (2.0 * m);
  const double oracle = simpson([&](double x) { return std::pow(a * r * std::exp(-r * x), 2); }, 0.0, 80.0, 20000);
  c.domain = DirichletDomain::HalfLine;
  const auto half = dirichlet_line_min(m, a, c);
  CHECK(oracle == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(half.kinetic == doctest::Approx(oracle).epsilon(0.01));

  // Minimiser close to the exponential profile in L2.
  double err = 0.0;
  for (std::size_t i = 0; i < wide.x.size(); ++i) err += std::pow(wide.values[i] - std::exp(-std::fabs(wide.x[i]) / 4.0), 2) * c.h;
  CHECK(std::sqrt(err) < 0.05);
}

TEST_CASE("run artifacts") {
  const auto r = minimize(line_graph(3.0), 1.0, 3.0, schedule({10.0, 20.0}));
  const auto dir = std::filesystem::temp_directory_path() / "graphnls_test_artifacts";
  std::filesystem::remove_all(dir);
  write_run_artifacts(dir.string(), r);
  for (auto name : {"result.json", "trace.csv", "state.csv"}) CHECK(std::filesystem::exists(dir / name));
  std::ifstream trace(dir / "trace.csv");
  std::string header;
  std::getline(trace, header);
  CHECK(header == "iter,energy,grad_norm,step");
  std::filesystem::remove_all(dir);
}
