// graphnls command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "graphnls/graphnls.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kNoCertificate = 2, kInternal = 3 };

int report(graphnls_status status) {
  std::cerr << "error: " << graphnls_last_error() << '\n';
  return status == GRAPHNLS_E_INTERNAL ? kInternal : kUsage;
}

struct StringDeleter {
  void operator()(char* s) const { graphnls_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct GraphDeleter {
  void operator()(graphnls_graph* g) const { graphnls_graph_free(g); }
};
using OwnedGraph = std::unique_ptr<graphnls_graph, GraphDeleter>;

struct ResultDeleter {
  void operator()(graphnls_result* r) const { graphnls_result_free(r); }
};

nlohmann::json parse(const OwnedString& s) { return nlohmann::json::parse(s.get()); }

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

int load(const std::string& path, OwnedGraph& graph) {
  graphnls_graph* raw = nullptr;
  const auto status = graphnls_graph_load(path.c_str(), &raw);
  if (status != GRAPHNLS_OK) return report(status);
  graph.reset(raw);
  return kOk;
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string graph;
  bool json = false;
};

int cmd_validate(const ValidateArgs& a) {
  OwnedGraph graph;
  if (int rc = load(a.graph, graph)) return rc;
  char* text = nullptr;
  int valid = 0;
  if (auto s = graphnls_graph_validate(graph.get(), &text, &valid)) return report(s);
  OwnedString owned(text);
  if (a.json) {
    std::cout << text << '\n';
  } else if (valid) {
    double measure = 0.0;
    std::size_t n = 0;
    graphnls_graph_core_measure(graph.get(), &measure);
    graphnls_graph_half_line_count(graph.get(), &n);
    std::cout << "valid: meas(K) = " << num(measure) << ", N = " << n << '\n';
  } else {
    const auto j = parse(owned);
    for (const auto& v : j.at("violations"))
      std::cout << v.at("code").get<std::string>() << ": " << v.at("message").get<std::string>() << '\n';
  }
  return valid ? kOk : kUsage;
}

// ---------------------------------------------------------------------------

struct MinimizeArgs {
  std::string graph;
  double mu = 1.0;
  double p = 4.0;
  double h = 0.05;
  std::vector<double> rcut;
  std::string init = "competitor";
  std::uint64_t seed = 1;
  std::optional<std::string> soliton_edge;
  std::optional<double> soliton_offset;
  std::size_t max_iters = 5000;
  double energy_tol = 1e-6;
  double grad_tol = 1e-8;
  bool everywhere = false;
  bool dichotomy = false;
  std::size_t threads = 0;
  std::optional<std::string> out;
  bool json = false;
};

int cmd_minimize(const MinimizeArgs& a) {
  OwnedGraph graph;
  if (int rc = load(a.graph, graph)) return rc;

  graphnls_solver_config config;
  graphnls_solver_config_default(&config);
  config.h_max = a.h;
  config.max_iters = a.max_iters;
  config.energy_tol = a.energy_tol;
  config.grad_tol = a.grad_tol;
  config.seed = a.seed;
  config.nonlinear_everywhere = a.everywhere ? 1 : 0;
  if (!a.rcut.empty()) {
    config.r_cut_schedule = a.rcut.data();
    config.r_cut_count = a.rcut.size();
  }
  if (a.init == "competitor") {
    config.init = GRAPHNLS_INIT_COMPETITOR;
  } else if (a.init == "soliton") {
    config.init = GRAPHNLS_INIT_SOLITON;
  } else {
    config.init = GRAPHNLS_INIT_RANDOM;
  }
  if (a.soliton_edge) config.soliton_edge = a.soliton_edge->c_str();
  if (a.soliton_offset) config.soliton_offset = *a.soliton_offset;

  if (a.dichotomy) {
    char* text = nullptr;
    graphnls_verdict verdict = GRAPHNLS_INCONCLUSIVE;
    if (auto s = graphnls_dichotomy(graph.get(), a.mu, a.p, &config, a.threads, &text, &verdict)) return report(s);
    OwnedString owned(text);
    const auto j = parse(owned);
    if (a.json) {
      std::cout << text << '\n';
      return kOk;
    }
    std::cout << "verdict: " << graphnls_verdict_name(verdict) << '\n';
    std::cout << "note: " << j.at("verdict_note").get<std::string>() << '\n';
    std::cout << "r_cut,E_min\n";
    for (const auto& row : j.at("table"))
      std::cout << num(row.at("r_cut").get<double>()) << ','
                << (row.at("energy").is_null() ? std::string("nan") : num(row.at("energy").get<double>())) << '\n';
    for (const auto& run : j.at("runs"))
      std::cout << "  " << run.at("label").get<std::string>() << ": "
                << run.at("verdict").get<std::string>() << ", E = "
                << num(run.at("energy_report").at("energy").get<double>()) << '\n';
    return kOk;
  }

  graphnls_result* raw = nullptr;
  if (auto s = graphnls_minimize(graph.get(), a.mu, a.p, &config, &raw)) return report(s);
  std::unique_ptr<graphnls_result, ResultDeleter> result(raw);
  if (a.out) {
    if (auto s = graphnls_result_write(result.get(), a.out->c_str())) return report(s);
  }
  char* text = nullptr;
  if (auto s = graphnls_result_json(result.get(), &text)) return report(s);
  OwnedString owned(text);
  if (a.json) {
    std::cout << text << '\n';
    return kOk;
  }
  const auto j = parse(owned);
  if (a.init == "soliton")
    std::cout << "init: soliton centred on " << a.soliton_edge.value_or("the longest core edge") << " at "
              << (a.soliton_offset ? num(*a.soliton_offset) : std::string("its midpoint")) << '\n';
  std::cout << "verdict: " << j.at("verdict").get<std::string>() << '\n';
  std::cout << "note: " << j.at("verdict_note").get<std::string>() << '\n';
  std::cout << "energy: " << num(j.at("energy").get<double>()) << '\n';
  std::cout << "lambda: " << num(j.at("lambda").get<double>()) << '\n';
  std::cout << "min value: " << num(j.at("min_value").get<double>())
            << (j.at("strictly_positive").get<bool>() ? " (strictly positive)" : "") << '\n';
  std::cout << "r_cut,E_min,iterations,converged\n";
  for (const auto& row : j.at("r_cut_table"))
    std::cout << num(row.at("r_cut").get<double>()) << ',' << num(row.at("energy").get<double>()) << ','
              << row.at("iterations").get<std::size_t>() << ',' << row.at("converged").get<bool>() << '\n';
  if (a.out) std::cout << "artifacts: " << *a.out << "/{result.json,trace.csv,state.csv}\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct ThresholdArgs {
  double p = 4.0;
  double mu = 1.0;
  std::size_t n = 1;
  std::optional<double> c;
  std::optional<double> C;
  bool json = false;
};

int cmd_thresholds(const ThresholdArgs& a) {
  if (a.p > 2.0 && a.p < 4.0) {
    if (a.json) {
      std::cout << nlohmann::json{{"schema_version", 1}, {"p", a.p}, {"mu", a.mu}, {"N", a.n},
                                  {"existence", "unconditional for p in (2,4)"}}
                       .dump(2)
                << '\n';
    } else {
      std::cout << "existence unconditional for p in (2,4): a ground state exists for every mass and core\n";
    }
    return kOk;
  }
  char* text = nullptr;
  const double* c = a.c ? &*a.c : nullptr;
  const double* C = a.C ? &*a.C : nullptr;
  if (auto s = graphnls_thresholds(a.p, a.mu, a.n, c, C, &text)) return report(s);
  OwnedString owned(text);
  if (a.json) {
    std::cout << text << '\n';
    return kOk;
  }
  const auto j = parse(owned);
  std::cout << "p        " << num(a.p) << "\nmu       " << num(a.mu) << "\nN        " << a.n << '\n';
  std::cout << "c        " << num(j.at("c").get<double>()) << "\nC        " << num(j.at("C").get<double>()) << '\n';
  if (!j.at("C_p").is_null()) std::cout << "C_p      " << num(j.at("C_p").get<double>()) << '\n';
  std::cout << "L1       " << num(j.at("L1_exist").get<double>()) << "   meas(K) > L1: ground state exists\n";
  std::cout << "L2       " << num(j.at("L2_nonexist").get<double>()) << "   meas(K) < L2: no ground state\n";
  std::cout << "gap      [L2, L1] is UNKNOWN\n";
  std::cout << "mu^((p-2)/(6-p)) L1 = " << num(j.at("scaling_invariant_L1").get<double>())
            << ", mu^((p-2)/(6-p)) L2 = " << num(j.at("scaling_invariant_L2").get<double>()) << '\n';
  if (!j.at("consistent").get<bool>()) std::cout << "warning: L2 > L1 with these constants\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct CertifyArgs {
  std::string graph;
  double p = 4.0;
  double mu = 1.0;
  std::optional<std::string> partition;
  std::optional<double> c;
  std::optional<double> C;
  bool json = false;
};

int cmd_certify(const CertifyArgs& a) {
  OwnedGraph graph;
  if (int rc = load(a.graph, graph)) return rc;
  char* text = nullptr;
  int valid = 0;
  const double* c = a.c ? &*a.c : nullptr;
  const double* C = a.C ? &*a.C : nullptr;
  if (auto s = graphnls_certify(graph.get(), a.p, a.mu, a.partition ? a.partition->c_str() : nullptr, c, C,
                                &text, &valid))
    return report(s);
  OwnedString owned(text);
  const auto j = parse(owned);
  if (a.json) {
    std::cout << text << '\n';
  } else {
    std::cout << "L2 = " << num(j.at("L2").get<double>()) << ", meas(K) = " << num(j.at("core_measure").get<double>())
              << " (whole graph " << (j.at("whole_graph_valid").get<bool>() ? "passes" : "fails") << ")\n";
    if (!j.at("partition").is_null()) {
      std::size_t i = 0;
      for (const auto& part : j.at("partition")) {
        std::cout << "  K_" << ++i << ": {";
        bool first = true;
        for (const auto& id : part.at("edges")) {
          std::cout << (first ? "" : ", ") << id.get<std::string>();
          first = false;
        }
        std::cout << "} meas = " << num(part.at("core_measure").get<double>()) << '\n';
      }
    }
    std::cout << (valid ? "certificate valid: no ground state for this mass\n" : "certificate not found\n");
  }
  return valid ? kOk : kNoCertificate;
}

// ---------------------------------------------------------------------------

int cmd_sweep(const std::string& spec, bool json) {
  char* text = nullptr;
  int sound = 0;
  if (auto s = graphnls_sweep(spec.c_str(), &text, &sound)) return report(s);
  OwnedString owned(text);
  const auto j = parse(owned);
  if (json) {
    std::cout << text << '\n';
  } else {
    std::cout << "axis_value,verdict,band\n";
    for (const auto& row : j.at("rows")) {
      std::cout << num(row.at("axis_value").get<double>()) << ',' << row.at("verdict").get<std::string>() << ','
                << row.at("band").get<std::string>();
      if (!row.at("error").get<std::string>().empty()) std::cout << " (" << row.at("error").get<std::string>() << ')';
      std::cout << '\n';
    }
    std::cout << "wrote " << j.at("phase_csv").get<std::string>() << '\n';
  }
  if (!sound) {
    std::cerr << "error: EXIST_BAND row without NEGATIVE_MINIMUM verdict\n";
    return kInternal;
  }
  return kOk;
}

int cmd_check(std::uint64_t seed, std::optional<double> inject_c, bool json) {
  char* text = nullptr;
  int passed = 0;
  if (auto s = graphnls_check(seed, inject_c.value_or(0.0), &text, &passed)) return report(s);
  OwnedString owned(text);
  if (json) {
    std::cout << text << '\n';
  } else {
    const auto j = parse(owned);
    for (const auto& item : j.at("checks"))
      std::cout << (item.at("passed").get<bool>() ? "PASS " : "FAIL ") << item.at("name").get<std::string>()
                << ": " << item.at("detail").get<std::string>() << '\n';
  }
  return passed ? kOk : kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphnls: NLS ground states on metric graphs with a localized nonlinearity"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", std::string(graphnls_version()));
  app.require_subcommand(1);
  int rc = kOk;

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Parse and validate a graph file");
  validate->add_option("graph", va.graph, "Graph file")->required();
  validate->add_flag("--json", va.json, "Print the report as JSON");
  validate->callback([&] { rc = cmd_validate(va); });

  MinimizeArgs ma;
  auto* minimize = app.add_subcommand("minimize", "Minimise the energy at fixed mass");
  minimize->add_option("graph", ma.graph, "Graph file")->required();
  minimize->add_option("--mu", ma.mu, "Mass")->capture_default_str();
  minimize->add_option("--p", ma.p, "Nonlinearity power in (2,6)")->capture_default_str();
  minimize->add_option("--h", ma.h, "Mesh size")->capture_default_str();
  minimize->add_option("--rcut", ma.rcut, "Increasing truncation lengths (default: scaled [10,20,40])")
      ->delimiter(',');
  minimize->add_option("--init", ma.init, "competitor, soliton or random")
      ->check(CLI::IsMember({"competitor", "soliton", "random"}))
      ->capture_default_str();
  minimize->add_option("--seed", ma.seed, "Random seed")->capture_default_str();
  minimize->add_option("--soliton-edge", ma.soliton_edge, "Core edge holding the soliton centre");
  minimize->add_option("--soliton-offset", ma.soliton_offset, "Centre coordinate on that edge");
  minimize->add_option("--max-iters", ma.max_iters, "Iteration cap per truncation")->capture_default_str();
  minimize->add_option("--energy-tol", ma.energy_tol, "Energy tolerance")->capture_default_str();
  minimize->add_option("--grad-tol", ma.grad_tol, "Projected-gradient tolerance")->capture_default_str();
  minimize->add_flag("--everywhere", ma.everywhere, "Diagnostic: nonlinearity on every edge");
  minimize->add_flag("--dichotomy", ma.dichotomy, "Run all seven initialisations and aggregate");
  minimize->add_option("--threads", ma.threads, "Workers for --dichotomy (0: GRAPHNLS_THREADS)");
  minimize->add_option("--out", ma.out, "Directory for result.json, trace.csv, state.csv");
  minimize->add_flag("--json", ma.json, "Print the result as JSON");
  minimize->callback([&] { rc = cmd_minimize(ma); });

  ThresholdArgs ta;
  auto* thresholds = app.add_subcommand("thresholds", "Existence and nonexistence thresholds");
  thresholds->add_option("--p", ta.p, "Nonlinearity power")->required();
  thresholds->add_option("--mu", ta.mu, "Mass")->capture_default_str();
  thresholds->add_option("--N", ta.n, "Number of half-lines")->capture_default_str();
  thresholds->add_option("--c", ta.c, "L^inf Gagliardo-Nirenberg constant");
  thresholds->add_option("--C", ta.C, "L^p Gagliardo-Nirenberg constant");
  thresholds->add_flag("--json", ta.json, "Print the report as JSON");
  thresholds->callback([&] { rc = cmd_thresholds(ta); });

  CertifyArgs ca;
  auto* certify = app.add_subcommand("certify", "Partition-based nonexistence certificate");
  certify->add_option("graph", ca.graph, "Graph file")->required();
  certify->add_option("--p", ca.p, "Nonlinearity power in [4,6)")->capture_default_str();
  certify->add_option("--mu", ca.mu, "Mass")->capture_default_str();
  certify->add_option("--partition", ca.partition, "Partition file (default: search all)");
  certify->add_option("--c", ca.c, "L^inf Gagliardo-Nirenberg constant");
  certify->add_option("--C", ca.C, "L^p Gagliardo-Nirenberg constant");
  certify->add_flag("--json", ca.json, "Print the certificate as JSON");
  certify->callback([&] { rc = cmd_certify(ca); });

  std::string sweep_spec;
  bool sweep_json = false;
  auto* sweep = app.add_subcommand("sweep", "Parameter sweep writing phase.csv");
  sweep->add_option("spec", sweep_spec, "Sweep spec (JSON)")->required();
  sweep->add_flag("--json", sweep_json, "Print the summary as JSON");
  sweep->callback([&] { rc = cmd_sweep(sweep_spec, sweep_json); });

  std::uint64_t check_seed = 1;
  std::optional<double> inject_c;
  bool check_json = false;
  auto* check = app.add_subcommand("check", "Run the property-check suite");
  check->add_option("--seed", check_seed, "Random seed")->capture_default_str();
  check->add_option("--inject-c", inject_c, "Fault injection: replace the GN constant c");
  check->add_flag("--json", check_json, "Print results as JSON");
  check->callback([&] { rc = cmd_check(check_seed, inject_c, check_json); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInternal;
  }
  return rc;
}
