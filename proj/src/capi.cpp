#include "graphnls/graphnls.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "graphnls/analysis.hpp"
#include "graphnls/check.hpp"
#include "graphnls/serialize.hpp"
#include "graphnls/sweep.hpp"

struct graphnls_graph {
  graphnls::MetricGraph graph;
};

struct graphnls_result {
  graphnls::MinimizationResult result;
};

namespace {

thread_local std::string last_error;

graphnls_status fail(graphnls_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <class Fn>
graphnls_status guard(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const graphnls::ParseError& e) {
    return fail(GRAPHNLS_E_PARSE, e.what());
  } catch (const graphnls::Error& e) {
    return fail(GRAPHNLS_E_INVALID_ARGUMENT, e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(GRAPHNLS_E_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(GRAPHNLS_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(GRAPHNLS_E_INTERNAL, e.what());
  } catch (...) {
    return fail(GRAPHNLS_E_INTERNAL, "unknown error");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

graphnls_status null_argument(const char* name) {
  return fail(GRAPHNLS_E_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

graphnls_verdict to_c(graphnls::Verdict v) {
  switch (v) {
    case graphnls::Verdict::NegativeMinimum: return GRAPHNLS_NEGATIVE_MINIMUM;
    case graphnls::Verdict::ZeroInfimumSuspected: return GRAPHNLS_ZERO_INFIMUM_SUSPECTED;
    case graphnls::Verdict::Inconclusive: return GRAPHNLS_INCONCLUSIVE;
  }
  return GRAPHNLS_INCONCLUSIVE;
}

graphnls::SolverConfig to_cpp(const graphnls_solver_config* c) {
  graphnls::SolverConfig s;
  if (!c) return s;
  s.max_iters = c->max_iters;
  s.step0 = c->step0;
  s.max_step = c->max_step;
  s.backtrack = c->backtrack;
  s.armijo_c1 = c->armijo_c1;
  s.grad_tol = c->grad_tol;
  s.energy_tol = c->energy_tol;
  s.h_max = c->h_max;
  if (c->r_cut_schedule && c->r_cut_count > 0)
    s.r_cut_schedule.assign(c->r_cut_schedule, c->r_cut_schedule + c->r_cut_count);
  switch (c->init) {
    case GRAPHNLS_INIT_COMPETITOR: s.init = graphnls::Initializer::Competitor; break;
    case GRAPHNLS_INIT_SOLITON: s.init = graphnls::Initializer::Soliton; break;
    case GRAPHNLS_INIT_RANDOM: s.init = graphnls::Initializer::Random; break;
    default: throw graphnls::Error("unknown initializer");
  }
  if (c->soliton_edge) s.soliton_edge = c->soliton_edge;
  if (c->soliton_offset >= 0.0) s.soliton_offset = c->soliton_offset;
  s.seed = c->seed;
  s.scope = c->nonlinear_everywhere ? graphnls::NonlinearScope::Everywhere : graphnls::NonlinearScope::Core;
  return s;
}

std::optional<graphnls::GnConstants> constants(const double* c, const double* C, std::size_t n, double p) {
  if (!c && !C) return std::nullopt;
  auto k = graphnls::default_gn_constants(n, p);
  if (c) k.c = *c;
  k.C = C ? *C : std::pow(k.c, p - 2.0);
  return k;
}

}  // namespace

extern "C" {

const char* graphnls_version(void) { return "0.1.0"; }

const char* graphnls_last_error(void) { return last_error.c_str(); }

const char* graphnls_verdict_name(graphnls_verdict verdict) {
  switch (verdict) {
    case GRAPHNLS_NEGATIVE_MINIMUM: return "NEGATIVE_MINIMUM";
    case GRAPHNLS_ZERO_INFIMUM_SUSPECTED: return "ZERO_INFIMUM_SUSPECTED";
    case GRAPHNLS_INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

void graphnls_string_free(char* s) { std::free(s); }

graphnls_status graphnls_graph_load(const char* path, graphnls_graph** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guard([&] {
    if (!std::filesystem::exists(path)) return fail(GRAPHNLS_E_IO, std::string("cannot open ") + path);
    *out = new graphnls_graph{graphnls::load_graph(path)};
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_graph_parse(const char* text, graphnls_graph** out) {
  if (!text) return null_argument("text");
  if (!out) return null_argument("out");
  return guard([&] {
    std::istringstream in(text);
    *out = new graphnls_graph{graphnls::parse_graph(in)};
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_graph_line(double core_length, graphnls_graph** out) {
  if (!out) return null_argument("out");
  return guard([&] {
    *out = new graphnls_graph{graphnls::line_graph(core_length)};
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_graph_double_bridge(double l1, double l2, graphnls_graph** out) {
  if (!out) return null_argument("out");
  return guard([&] {
    *out = new graphnls_graph{graphnls::double_bridge(l1, l2)};
    return GRAPHNLS_OK;
  });
}

void graphnls_graph_free(graphnls_graph* graph) { delete graph; }

graphnls_status graphnls_graph_validate(const graphnls_graph* graph, char** report_json, int* valid) {
  if (!graph) return null_argument("graph");
  return guard([&] {
    const auto report = graphnls::validate(graph->graph);
    if (valid) *valid = report.ok() ? 1 : 0;
    if (report_json) *report_json = duplicate(graphnls::to_json(report).dump(2));
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_graph_core_measure(const graphnls_graph* graph, double* out) {
  if (!graph) return null_argument("graph");
  if (!out) return null_argument("out");
  return guard([&] {
    *out = graphnls::measure_core(graph->graph);
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_graph_half_line_count(const graphnls_graph* graph, size_t* out) {
  if (!graph) return null_argument("graph");
  if (!out) return null_argument("out");
  *out = graph->graph.half_line_count();
  return GRAPHNLS_OK;
}

void graphnls_solver_config_default(graphnls_solver_config* config) {
  if (!config) return;
  const graphnls::SolverConfig d;
  *config = graphnls_solver_config{};
  config->max_iters = d.max_iters;
  config->step0 = d.step0;
  config->max_step = d.max_step;
  config->backtrack = d.backtrack;
  config->armijo_c1 = d.armijo_c1;
  config->grad_tol = d.grad_tol;
  config->energy_tol = d.energy_tol;
  config->h_max = d.h_max;
  config->r_cut_schedule = nullptr;
  config->r_cut_count = 0;
  config->init = GRAPHNLS_INIT_COMPETITOR;
  config->soliton_edge = nullptr;
  config->soliton_offset = -1.0;
  config->seed = d.seed;
  config->nonlinear_everywhere = 0;
}

graphnls_status graphnls_minimize(const graphnls_graph* graph, double mu, double p,
                                  const graphnls_solver_config* config, graphnls_result** out) {
  if (!graph) return null_argument("graph");
  if (!out) return null_argument("out");
  return guard([&] {
    const auto report = graphnls::validate(graph->graph);
    if (!report.ok()) return fail(GRAPHNLS_E_INVALID_GRAPH, report.violations.front().message);
    *out = new graphnls_result{graphnls::minimize(graph->graph, mu, p, to_cpp(config))};
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_result_energy(const graphnls_result* result, double* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  *out = result->result.report.energy;
  return GRAPHNLS_OK;
}

graphnls_status graphnls_result_verdict(const graphnls_result* result, graphnls_verdict* out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  *out = to_c(result->result.verdict);
  return GRAPHNLS_OK;
}

graphnls_status graphnls_result_json(const graphnls_result* result, char** out) {
  if (!result) return null_argument("result");
  if (!out) return null_argument("out");
  return guard([&] {
    *out = duplicate(graphnls::to_json(result->result).dump(2));
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_result_write(const graphnls_result* result, const char* dir) {
  if (!result) return null_argument("result");
  if (!dir) return null_argument("dir");
  return guard([&] {
    try {
      graphnls::write_run_artifacts(dir, result->result);
    } catch (const graphnls::Error& e) {
      return fail(GRAPHNLS_E_IO, e.what());
    }
    return GRAPHNLS_OK;
  });
}

void graphnls_result_free(graphnls_result* result) { delete result; }

graphnls_status graphnls_dichotomy(const graphnls_graph* graph, double mu, double p,
                                   const graphnls_solver_config* config, size_t threads, char** json,
                                   graphnls_verdict* verdict) {
  if (!graph) return null_argument("graph");
  return guard([&] {
    const auto report = graphnls::validate(graph->graph);
    if (!report.ok()) return fail(GRAPHNLS_E_INVALID_GRAPH, report.violations.front().message);
    const auto d = graphnls::existence_dichotomy(graph->graph, mu, p, to_cpp(config), threads);
    if (verdict) *verdict = to_c(d.verdict);
    if (json) *json = duplicate(graphnls::to_json(d).dump(2));
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_thresholds(double p, double mu, size_t half_lines, const double* c,
                                    const double* C, char** json) {
  if (!json) return null_argument("json");
  return guard([&] {
    const auto r = graphnls::thresholds(p, mu, half_lines, constants(c, C, half_lines, p));
    *json = duplicate(graphnls::to_json(r).dump(2));
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_certify(const graphnls_graph* graph, double p, double mu, const char* partition_path,
                                 const double* c, const double* C, char** json, int* valid) {
  if (!graph) return null_argument("graph");
  return guard([&] {
    const auto report = graphnls::validate(graph->graph);
    if (!report.ok()) return fail(GRAPHNLS_E_INVALID_GRAPH, report.violations.front().message);
    std::optional<std::vector<graphnls::Partition>> parts;
    if (partition_path) {
      if (!std::filesystem::exists(partition_path))
        return fail(GRAPHNLS_E_IO, std::string("cannot open ") + partition_path);
      parts = std::vector<graphnls::Partition>{graphnls::load_partition(partition_path, graph->graph)};
    }
    const auto k = constants(c, C, graph->graph.half_line_count(), p);
    const auto cert = graphnls::certify_nonexistence(graph->graph, p, mu, parts, k);
    if (valid) *valid = cert.valid ? 1 : 0;
    if (json) *json = duplicate(graphnls::to_json(cert, graph->graph).dump(2));
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_sweep(const char* spec_path, char** summary_json, int* sound) {
  if (!spec_path) return null_argument("spec_path");
  return guard([&] {
    if (!std::filesystem::exists(spec_path)) return fail(GRAPHNLS_E_IO, std::string("cannot open ") + spec_path);
    const auto spec = graphnls::load_sweep_spec(spec_path);
    if (!std::filesystem::exists(spec.graph_file))
      return fail(GRAPHNLS_E_IO, "cannot open " + spec.graph_file);
    const auto base = graphnls::load_graph(spec.graph_file);
    const auto result = graphnls::run_sweep(spec, base);

    std::filesystem::create_directories(spec.out_dir);
    const auto csv = std::filesystem::path(spec.out_dir) / "phase.csv";
    std::ofstream out(csv);
    if (!out) return fail(GRAPHNLS_E_IO, "cannot write " + csv.string());
    graphnls::write_phase_csv(out, spec, result);

    if (sound) *sound = result.sound() ? 1 : 0;
    if (summary_json) {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& row : result.rows) {
        rows.push_back({{"axis_value", row.axis_value},
                        {"E_min", std::isnan(row.e_min) ? nlohmann::json(nullptr) : nlohmann::json(row.e_min)},
                        {"verdict", graphnls::to_string(row.verdict)},
                        {"band", row.band},
                        {"error", row.error}});
      }
      const nlohmann::json j = {{"schema_version", graphnls::kSchemaVersion},
                                {"axis", graphnls::to_string(spec.axis)},
                                {"phase_csv", csv.string()},
                                {"rows", rows},
                                {"violations", result.violations},
                                {"sound", result.sound()}};
      *summary_json = duplicate(j.dump(2));
    }
    return GRAPHNLS_OK;
  });
}

graphnls_status graphnls_check(uint64_t seed, double inject_c, char** json, int* all_passed) {
  return guard([&] {
    graphnls::CheckOptions options;
    options.seed = seed;
    if (inject_c > 0.0) options.inject_c = inject_c;
    const auto items = graphnls::run_property_checks(options);
    bool ok = true;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& item : items) {
      ok = ok && item.passed;
      list.push_back({{"name", item.name}, {"passed", item.passed}, {"detail", item.detail}});
    }
    if (all_passed) *all_passed = ok ? 1 : 0;
    if (json) *json = duplicate(nlohmann::json{{"schema_version", graphnls::kSchemaVersion},
                                               {"passed", ok},
                                               {"checks", list}}.dump(2));
    return GRAPHNLS_OK;
  });
}

}  // extern "C"
