#include "graphnls/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "graphnls/analysis.hpp"
#include "graphnls/serialize.hpp"
#include "parallel.hpp"

namespace graphnls {

std::string_view to_string(Initializer init) {
  switch (init) {
    case Initializer::Competitor: return "competitor";
    case Initializer::Soliton: return "soliton";
    case Initializer::Random: return "random";
  }
  return "unknown";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::NegativeMinimum: return "NEGATIVE_MINIMUM";
    case Verdict::ZeroInfimumSuspected: return "ZERO_INFIMUM_SUSPECTED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

Initializer parse_initializer(std::string_view name) {
  if (name == "competitor") return Initializer::Competitor;
  if (name == "soliton") return Initializer::Soliton;
  if (name == "random") return Initializer::Random;
  throw Error("unknown initializer '" + std::string(name) + "' (competitor, soliton, random)");
}

void SolverConfig::check() const {
  if (max_iters == 0) throw Error("max_iters must be positive");
  if (!(step0 > 0.0)) throw Error("step0 must be positive");
  if (!(max_step >= step0)) throw Error("max_step must be at least step0");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw Error("backtrack must be in (0,1)");
  if (!(armijo_c1 > 0.0 && armijo_c1 < 1.0)) throw Error("armijo_c1 must be in (0,1)");
  if (!(grad_tol > 0.0)) throw Error("grad_tol must be positive");
  if (!(energy_tol > 0.0)) throw Error("energy_tol must be positive");
  if (!(h_max > 0.0) || !std::isfinite(h_max)) throw Error("h_max must be positive");
  for (std::size_t i = 0; i < r_cut_schedule.size(); ++i) {
    if (!(r_cut_schedule[i] > 0.0) || !std::isfinite(r_cut_schedule[i]))
      throw Error("r_cut values must be positive");
    if (i > 0 && !(r_cut_schedule[i] > r_cut_schedule[i - 1]))
      throw Error("r_cut schedule must be strictly increasing");
  }
  if (soliton_offset && !(*soliton_offset >= 0.0)) throw Error("soliton offset must be nonnegative");
}

// ---------------------------------------------------------------------------
// Soliton

SolitonConstants soliton_constants(double p) {
  require_subcritical(p);
  const double s = 4.0 / (p - 2.0);
  const double integral =
      std::sqrt(std::numbers::pi) * std::tgamma(0.5 * s) / std::tgamma(0.5 * (s + 1.0));
  // mass(lambda) = (p/2)^(2/(p-2)) lambda^((6-p)/(2(p-2))) 2 I / (p-2)
  const double base = (p - 2.0) / (2.0 * integral * std::pow(0.5 * p, 2.0 / (p - 2.0)));
  SolitonConstants k;
  k.lambda = std::pow(base, 2.0 * (p - 2.0) / (6.0 - p));
  k.amplitude = std::pow(0.5 * p * k.lambda, 1.0 / (p - 2.0));
  k.rate = 0.5 * (p - 2.0) * std::sqrt(k.lambda);
  return k;
}

double soliton_profile(double x, double mu, double p) {
  const auto k = soliton_constants(p);
  const double alpha = 2.0 / (6.0 - p);
  const double beta = (p - 2.0) / (6.0 - p);
  const double y = k.rate * std::pow(mu, beta) * std::fabs(x);
  const double sech = y > 700.0 ? 0.0 : 1.0 / std::cosh(y);
  return std::pow(mu, alpha) * k.amplitude * std::pow(sech, 2.0 / (p - 2.0));
}

// ---------------------------------------------------------------------------
// Initializers

double competitor_amplitude(double core_measure, double mu, std::size_t half_lines, double p) {
  const double a_max = std::sqrt(mu / core_measure);
  if (p > 4.0) {
    const double n = static_cast<double>(half_lines);
    const double a_bar =
        std::pow(n * n * p * (p - 4.0) / (16.0 * core_measure * core_measure), 1.0 / (p - 2.0));
    if (a_bar < a_max) return a_bar;
  }
  return 0.5 * a_max;
}

GraphFunction initializer_competitor(std::shared_ptr<const Mesh> mesh, double mu, double p) {
  require_subcritical(p);
  if (!(mu > 0.0)) throw Error("mu must be positive");
  const auto& graph = mesh->graph();
  const double ell = measure_core(graph);
  const std::size_t n = graph.half_line_count();
  const double a = competitor_amplitude(ell, mu, n, p);
  const double m = (mu - a * a * ell) / static_cast<double>(n);
  const double rate = a * a / (2.0 * m);
  const auto u = interpolate(mesh, [&](EdgeIndex e, double x) {
    return graph.edge(e).is_half_line() ? a * std::exp(-rate * x) : a;
  });
  return project_mass(u, mu);
}

GraphFunction initializer_soliton(std::shared_ptr<const Mesh> mesh, double mu, double p,
                                  EdgeIndex center_edge, double center_offset) {
  require_subcritical(p);
  if (!(mu > 0.0)) throw Error("mu must be positive");
  const auto& graph = mesh->graph();
  if (center_edge >= graph.edges().size() || !graph.edge(center_edge).in_core)
    throw Error("soliton centre must lie on a core edge");
  const auto& origin = graph.edge(center_edge);
  const auto dist = distances_from_point(graph, center_edge, center_offset);
  const auto u = interpolate(mesh, [&](EdgeIndex e, double x) {
    const auto& edge = graph.edge(e);
    double d = dist[edge.from] + x;
    if (!edge.is_half_line()) d = std::min(d, dist[edge.to] + edge.length - x);
    if (e == center_edge && std::isfinite(origin.length)) d = std::min(d, std::fabs(x - center_offset));
    return soliton_profile(d, mu, p);
  });
  return project_mass(u, mu);
}

GraphFunction initializer_random(std::shared_ptr<const Mesh> mesh, double mu, std::uint64_t seed) {
  if (!(mu > 0.0)) throw Error("mu must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> v(mesh->dof_count());
  for (auto& x : v) x = uniform(rng);

  std::vector<std::vector<std::size_t>> neighbours(v.size());
  for (EdgeIndex e = 0; e < mesh->edge_count(); ++e) {
    const auto d = mesh->edge_dofs(e);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      neighbours[d[i]].push_back(d[i + 1]);
      neighbours[d[i + 1]].push_back(d[i]);
    }
  }
  for (int pass = 0; pass < 5; ++pass) {
    std::vector<double> next(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      double sum = v[i];
      for (auto j : neighbours[i]) sum += v[j];
      next[i] = sum / static_cast<double>(neighbours[i].size() + 1);
    }
    v.swap(next);
  }
  return project_mass(GraphFunction(std::move(mesh), std::move(v)), mu);
}

// ---------------------------------------------------------------------------
// Descent

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

SparseMatrix stiffness(const Mesh& mesh) {
  std::vector<Eigen::Triplet<double>> entries;
  for (EdgeIndex e = 0; e < mesh.edge_count(); ++e) {
    const auto d = mesh.edge_dofs(e);
    const double k = 1.0 / mesh.spacing(e);
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
      entries.emplace_back(d[i], d[i], k);
      entries.emplace_back(d[i + 1], d[i + 1], k);
      entries.emplace_back(d[i], d[i + 1], -k);
      entries.emplace_back(d[i + 1], d[i], -k);
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.dof_count());
  SparseMatrix a(n, n);
  a.setFromTriplets(entries.begin(), entries.end());
  return a;
}

Eigen::Map<const Vector> view(const GraphFunction& u) {
  return {u.values().data(), static_cast<Eigen::Index>(u.size())};
}

struct Evaluation {
  double energy = 0.0;
  double scale = 0.0;  // kinetic + potential magnitude, for the rounding floor
  Vector gradient;
  double lambda = 0.0;
  double grad_norm = 0.0;
};

class Descent {
 public:
  Descent(std::shared_ptr<const Mesh> mesh, double mu, double p, const SolverConfig& config)
      : mesh_(std::move(mesh)), mu_(mu), p_(p), config_(config), a_(stiffness(*mesh_)) {
    const auto& w = mesh_->lumped_mass();
    w_ = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
    const double total = mesh_->total_measure();
    sigma_floor_ = std::pow(std::numbers::pi / total, 2.0);
  }

  Evaluation evaluate(const GraphFunction& u) const {
    Evaluation ev;
    const auto report = energy(u, p_, config_.scope);
    ev.energy = report.energy;
    ev.scale = report.kinetic + report.potential;
    const auto g = energy_gradient(u, p_, config_.scope);
    ev.gradient = view(g);
    const Vector wu = w_.cwiseProduct(view(u));
    ev.lambda = -view(u).dot(ev.gradient) / mu_;
    const Vector r = ev.gradient + ev.lambda * wu;
    ev.grad_norm = std::sqrt(r.cwiseAbs2().cwiseQuotient(w_).sum());
    return ev;
  }

  // Preconditioned tangent gradient z with (W u) . z = 0, so g . z >= 0.
  // Also returns P^-1 W u, used to project other vectors onto the tangent.
  Vector direction(const GraphFunction& u, const Evaluation& ev, Vector& normal) {
    factor(std::max(ev.lambda, sigma_floor_));
    const Vector wu = w_.cwiseProduct(view(u));
    const Vector z1 = solver_.solve(ev.gradient);
    normal = solver_.solve(wu);
    return z1 - (wu.dot(z1) / wu.dot(normal)) * normal;
  }

  GraphFunction retract(const GraphFunction& u, const Vector& search, double t) const {
    GraphFunction out = u;
    auto values = out.values();
    for (std::size_t i = 0; i < values.size(); ++i) values[i] += t * search[static_cast<Eigen::Index>(i)];
    return project_mass(out, mu_);
  }

  DescentResult run(const GraphFunction& initial) {
    GraphFunction u = project_mass(initial, mu_);
    Evaluation ev = evaluate(u);
    DescentResult result{u, {}, false, ev.grad_norm};
    result.trace.push_back({0, ev.energy, ev.grad_norm, 0.0});

    const double eps = std::numeric_limits<double>::epsilon();
    double step = config_.step0;
    Vector search, z_prev;
    double gz_prev = 0.0;
    for (std::size_t iter = 1; iter <= config_.max_iters; ++iter) {
      const auto& trace = result.trace;
      const bool stagnant = trace.size() > 10 &&
                            trace[trace.size() - 11].energy - trace.back().energy < config_.energy_tol;
      if (ev.grad_norm < config_.grad_tol && stagnant) {
        result.converged = true;
        break;
      }

      Vector normal;
      const Vector z = direction(u, ev, normal);
      const double gz = ev.gradient.dot(z);
      const double floor = 100.0 * eps * std::max(ev.scale, 1e-300);
      if (!(gz * config_.max_step > floor)) {
        result.converged = true;
        break;
      }

      // Polak-Ribiere+ momentum in the preconditioned metric, restarted
      // whenever the combined direction is not a descent direction.
      double beta = 0.0;
      if (search.size() > 0) beta = std::max(0.0, ev.gradient.dot(z - z_prev) / gz_prev);
      if (beta > 0.0) {
        const Vector wu = w_.cwiseProduct(view(u));
        Vector transported = search - (wu.dot(search) / wu.dot(normal)) * normal;
        search = -z + beta * transported;
        if (!(ev.gradient.dot(search) < -0.01 * gz)) search = -z;
      } else {
        search = -z;
      }
      const double slope = ev.gradient.dot(search);  // < 0

      bool accepted = false;
      GraphFunction trial = u;
      Evaluation trial_ev;
      double t = std::min(step, config_.max_step);
      while (t * -slope > 0.1 * floor) {
        trial = retract(u, search, t);
        trial_ev = evaluate(trial);
        const double drop = trial_ev.energy - ev.energy;
        // Minimiser of the quadratic through E(0), E'(0) and E(t).
        const double curvature = drop - slope * t;
        const double tq = curvature > 0.0 ? -slope * t * t / (2.0 * curvature) : 4.0 * t;
        if (drop <= config_.armijo_c1 * t * slope) {
          accepted = true;
          const double t2 = std::min(tq, config_.max_step);
          if (std::fabs(t2 - t) > 0.1 * t) {
            auto second = retract(u, search, t2);
            auto second_ev = evaluate(second);
            if (second_ev.energy < trial_ev.energy &&
                second_ev.energy - ev.energy <= config_.armijo_c1 * t2 * slope) {
              trial = std::move(second);
              trial_ev = std::move(second_ev);
              t = t2;
            }
          }
          break;
        }
        t = std::clamp(tq, 0.1 * t, config_.backtrack * t);
      }
      if (!accepted) {
        if (beta > 0.0) {
          search.resize(0);  // retry once as a plain gradient step
          continue;
        }
        result.converged = ev.grad_norm < config_.grad_tol;
        break;
      }
      z_prev = z;
      gz_prev = gz;
      search = (view(trial) - view(u)) / t;  // retracted direction
      u = std::move(trial);
      ev = std::move(trial_ev);
      result.trace.push_back({iter, ev.energy, ev.grad_norm, t});
      step = t;
    }
    result.state = std::move(u);
    result.grad_norm = ev.grad_norm;
    return result;
  }

 private:
  void factor(double sigma) {
    if (factored_ && std::fabs(sigma - sigma_) <= 0.1 * sigma_) return;
    SparseMatrix pmat = a_;
    for (Eigen::Index i = 0; i < w_.size(); ++i) pmat.coeffRef(i, i) += sigma * w_[i];
    solver_.compute(pmat);
    if (solver_.info() != Eigen::Success) throw Error("preconditioner factorisation failed");
    sigma_ = sigma;
    factored_ = true;
  }

  std::shared_ptr<const Mesh> mesh_;
  double mu_;
  double p_;
  const SolverConfig& config_;
  SparseMatrix a_;
  Vector w_;
  double sigma_floor_ = 0.0;
  double sigma_ = 0.0;
  bool factored_ = false;
  Eigen::SimplicialLDLT<SparseMatrix> solver_;
};

// Carries a state to a longer truncation; new half-line tail decays like
// exp(-sqrt(lambda) x).
GraphFunction prolong(const GraphFunction& u, std::shared_ptr<const Mesh> mesh, double decay) {
  const auto& old_mesh = u.mesh();
  return interpolate(std::move(mesh), [&](EdgeIndex e, double x) {
    const double extent = old_mesh.extent(e);
    if (x <= extent) return u.evaluate(e, x);
    return u.evaluate(e, extent) * std::exp(-decay * (x - extent));
  });
}

GraphFunction initial_state(const std::shared_ptr<const Mesh>& mesh, double mu, double p,
                            const SolverConfig& config) {
  switch (config.init) {
    case Initializer::Competitor:
      return initializer_competitor(mesh, mu, p);
    case Initializer::Random:
      return initializer_random(mesh, mu, config.seed);
    case Initializer::Soliton: {
      const auto& graph = mesh->graph();
      EdgeIndex edge = 0;
      if (config.soliton_edge) {
        const auto found = graph.find_edge(*config.soliton_edge);
        if (!found) throw Error("unknown edge '" + *config.soliton_edge + "'");
        edge = *found;
      } else {
        const auto core = graph.core_edges();
        edge = *std::max_element(core.begin(), core.end(), [&](EdgeIndex a, EdgeIndex b) {
          return graph.edge(a).length < graph.edge(b).length;
        });
      }
      if (!graph.edge(edge).in_core) throw Error("soliton centre must lie on a core edge");
      const double length = graph.edge(edge).length;
      const double offset = config.soliton_offset.value_or(0.5 * length);
      if (offset > length) throw Error("soliton offset exceeds the edge length");
      return initializer_soliton(mesh, mu, p, edge, offset);
    }
  }
  throw Error("unknown initializer");
}

}  // namespace

DescentResult descend(const GraphFunction& initial, double mu, double p, const SolverConfig& config) {
  config.check();
  require_subcritical(p);
  if (!(mu > 0.0)) throw Error("mu must be positive");
  Descent descent(initial.mesh_ptr(), mu, p, config);
  return descent.run(initial);
}

// ---------------------------------------------------------------------------
// Truncation schedule and verdicts

// Keeps the longest default truncation at 2000.
constexpr double kMaxScheduleScale = 50.0;

std::vector<double> default_r_cut_schedule(const MetricGraph& graph, double mu, double p) {
  require_subcritical(p);
  const double ell = measure_core(graph);
  const std::size_t n = graph.half_line_count();
  const double a_max = std::sqrt(mu / ell);

  // Best competitor amplitude: coarse scan then golden-section refinement.
  auto f = [&](double a) { return competitor_energy(a, ell, mu, n, p); };
  const int samples = 400;
  int best = 1;
  for (int i = 1; i < samples; ++i) {
    if (f(a_max * i / samples) < f(a_max * best / samples)) best = i;
  }
  double lo = a_max * (best - 1) / samples;
  double hi = a_max * (best + 1) / samples;
  lo = std::max(lo, 1e-12 * a_max);
  hi = std::min(hi, a_max * (1.0 - 1e-12));
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double x1 = hi - ratio * (hi - lo);
    const double x2 = lo + ratio * (hi - lo);
    if (f(x1) < f(x2)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  double a0 = 0.5 * (lo + hi);
  if (!(f(a0) < 0.0)) a0 = 0.5 * a_max;

  const double scale = std::clamp(static_cast<double>(n) * mu / (a0 * a0), 1.0, kMaxScheduleScale);
  return {10.0 * scale, 20.0 * scale, 40.0 * scale};
}

double extrapolated_limit(const std::vector<RcutEntry>& table) {
  if (table.empty()) return 0.0;
  const std::size_t k = table.size();
  if (k < 3) return table.back().energy;
  const double e1 = table[k - 3].energy, e2 = table[k - 2].energy, e3 = table[k - 1].energy;
  const double d1 = e2 - e1, d2 = e3 - e2;
  const double denom = d2 - d1;
  if (std::fabs(denom) <= 1e-14 * std::max({std::fabs(e1), std::fabs(e2), std::fabs(e3), 1e-300}))
    return e3;
  return e3 - d2 * d2 / denom;
}

Verdict classify(const std::vector<RcutEntry>& table, double energy_tol) {
  if (table.empty()) return Verdict::Inconclusive;
  for (const auto& entry : table) {
    if (!entry.converged) return Verdict::Inconclusive;
  }
  const double last = table.back().energy;
  if (last < -10.0 * energy_tol) {
    if (table.size() < 2) return Verdict::NegativeMinimum;
    const double prev = table[table.size() - 2].energy;
    if (std::fabs(last - prev) < 0.01 * std::fabs(last)) return Verdict::NegativeMinimum;
  }
  bool toward_zero = true;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].energy > energy_tol) toward_zero = false;
    if (i > 0 && table[i].energy < table[i - 1].energy) toward_zero = false;
  }
  if (toward_zero &&
      (std::fabs(last) < energy_tol || extrapolated_limit(table) >= -energy_tol))
    return Verdict::ZeroInfimumSuspected;
  return Verdict::Inconclusive;
}

// ---------------------------------------------------------------------------
// Minimisation

MinimizationResult minimize(const MetricGraph& graph, double mu, double p, const SolverConfig& config) {
  config.check();
  require_subcritical(p);
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error("mu must be positive");
  const auto report = validate(graph);
  if (!report.ok()) throw Error("invalid graph: " + report.violations.front().message);

  const auto schedule =
      config.r_cut_schedule.empty() ? default_r_cut_schedule(graph, mu, p) : config.r_cut_schedule;

  std::optional<DescentResult> last;
  double lambda = 0.0;
  std::vector<RcutEntry> table;
  for (double r_cut : schedule) {
    auto mesh = std::make_shared<const Mesh>(graph, config.h_max, r_cut);
    GraphFunction start = last ? prolong(last->state, mesh, std::sqrt(std::max(lambda, 1e-12)))
                               : initial_state(mesh, mu, p, config);
    Descent descent(mesh, mu, p, config);
    auto run = descent.run(start);
    lambda = descent.evaluate(run.state).lambda;
    table.push_back({r_cut, run.trace.back().energy, run.trace.size() - 1, run.converged});
    last = std::move(run);
  }

  GraphFunction state = last->state;
  if (state.min_value() < 0.0) state = state.abs();

  MinimizationResult result{state, std::move(last->trace), {}, {}, Verdict::Inconclusive,
                            std::move(table), mu, p, 0.0, false, false};
  result.report = energy(state, p, default_gn_constants(graph.half_line_count(), p), config.scope);
  result.el = el_residual(state, p, config.scope);
  result.verdict = classify(result.r_cut_table, config.energy_tol);
  result.min_value = state.min_value();
  result.strictly_positive = result.min_value > 0.0;
  result.converged = std::all_of(result.r_cut_table.begin(), result.r_cut_table.end(),
                                 [](const RcutEntry& e) { return e.converged; });
  return result;
}

// ---------------------------------------------------------------------------
// Dichotomy

std::size_t default_thread_count() {
  if (const char* env = std::getenv("GRAPHNLS_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && n > 0) return static_cast<std::size_t>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

DichotomyResult existence_dichotomy(const MetricGraph& graph, double mu, double p,
                                    const SolverConfig& config, std::size_t threads) {
  config.check();
  require_subcritical(p);
  const auto report = validate(graph);
  if (!report.ok()) throw Error("invalid graph: " + report.violations.front().message);

  auto core = graph.core_edges();
  std::stable_sort(core.begin(), core.end(), [&](EdgeIndex a, EdgeIndex b) {
    return graph.edge(a).length > graph.edge(b).length;
  });
  const auto& longest = graph.edge(core.front());

  struct Plan {
    std::string label;
    SolverConfig config;
  };
  std::vector<Plan> plans;
  SolverConfig base = config;
  if (base.r_cut_schedule.empty()) base.r_cut_schedule = default_r_cut_schedule(graph, mu, p);

  auto with = [&](Initializer init) {
    SolverConfig c = base;
    c.init = init;
    c.soliton_edge.reset();
    c.soliton_offset.reset();
    return c;
  };
  plans.push_back({"competitor", with(Initializer::Competitor)});
  auto soliton = [&](const Edge& edge, double offset, const char* where) {
    SolverConfig c = with(Initializer::Soliton);
    c.soliton_edge = edge.id;
    c.soliton_offset = offset;
    plans.push_back({"soliton@" + edge.id + ":" + where, c});
  };
  soliton(longest, 0.5 * longest.length, "1/2");
  soliton(longest, 0.25 * longest.length, "1/4");
  if (core.size() > 1) {
    const auto& second = graph.edge(core[1]);
    soliton(second, 0.5 * second.length, "1/2");
  } else {
    soliton(longest, 0.75 * longest.length, "3/4");
  }
  for (std::uint64_t k = 0; k < 3; ++k) {
    SolverConfig c = with(Initializer::Random);
    c.seed = config.seed + k;
    plans.push_back({"random#" + std::to_string(c.seed), c});
  }

  std::vector<std::optional<MinimizationResult>> results(plans.size());
  detail::parallel_for(plans.size(), threads ? threads : default_thread_count(), [&](std::size_t i) {
    results[i] = minimize(graph, mu, p, plans[i].config);
  });

  DichotomyResult out;
  for (std::size_t i = 0; i < plans.size(); ++i) out.runs.push_back({plans[i].label, std::move(*results[i])});

  const auto& schedule = base.r_cut_schedule;
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    RcutEntry entry{schedule[k], std::numeric_limits<double>::infinity(), 0, true};
    for (const auto& run : out.runs) {
      const auto& e = run.result.r_cut_table[k];
      entry.energy = std::min(entry.energy, e.energy);
      entry.iterations += e.iterations;
      entry.converged = entry.converged && e.converged;
    }
    out.table.push_back(entry);
  }
  for (std::size_t i = 1; i < out.runs.size(); ++i) {
    if (out.runs[i].result.report.energy < out.runs[out.best].result.report.energy) out.best = i;
  }
  const bool any_negative = std::any_of(out.runs.begin(), out.runs.end(), [](const DichotomyRun& r) {
    return r.result.verdict == Verdict::NegativeMinimum;
  });
  out.verdict = any_negative ? Verdict::NegativeMinimum : classify(out.table, config.energy_tol);
  return out;
}

// ---------------------------------------------------------------------------
// Artifacts

void write_run_artifacts(const std::string& dir, const MinimizationResult& result) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "result.json");
    if (!out) throw Error("cannot write " + dir + "/result.json");
    out << to_json(result).dump(2) << '\n';
  }
  {
    std::ofstream out(fs::path(dir) / "trace.csv");
    if (!out) throw Error("cannot write " + dir + "/trace.csv");
    out << "iter,energy,grad_norm,step\n";
    char line[128];
    for (const auto& t : result.trace) {
      std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g\n", t.iter, t.energy, t.grad_norm, t.step);
      out << line;
    }
  }
  {
    std::ofstream out(fs::path(dir) / "state.csv");
    if (!out) throw Error("cannot write " + dir + "/state.csv");
    write_function_csv(out, result.state);
  }
}

}  // namespace graphnls
