#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "graphnls/graphnls.h"

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { graphnls_string_free(s); }
  nlohmann::json json() const { return nlohmann::json::parse(s); }
};

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("graphnls_capi_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("graph handles") {
  graphnls_graph* g = nullptr;
  REQUIRE(graphnls_graph_line(2.0, &g) == GRAPHNLS_OK);
  double m = 0.0;
  size_t n = 0;
  CHECK(graphnls_graph_core_measure(g, &m) == GRAPHNLS_OK);
  CHECK(graphnls_graph_half_line_count(g, &n) == GRAPHNLS_OK);
  CHECK(m == 2.0);
  CHECK(n == 2);
  Owned report;
  int valid = 0;
  CHECK(graphnls_graph_validate(g, &report.s, &valid) == GRAPHNLS_OK);
  CHECK(valid == 1);
  CHECK(report.json().at("schema_version") == 1);
  graphnls_graph_free(g);

  graphnls_graph* bad = nullptr;
  CHECK(graphnls_graph_parse("vertex a\nedge e a a 1x\n", &bad) == GRAPHNLS_E_PARSE);
  CHECK(std::string(graphnls_last_error()).find("line 2") != std::string::npos);
  CHECK(bad == nullptr);

  graphnls_graph* compact = nullptr;
  REQUIRE(graphnls_graph_parse("vertex a\nvertex b\nedge e a b 1\n", &compact) == GRAPHNLS_OK);
  Owned r2;
  CHECK(graphnls_graph_validate(compact, &r2.s, &valid) == GRAPHNLS_OK);
  CHECK(valid == 0);
  graphnls_result* res = nullptr;
  graphnls_solver_config cfg;
  graphnls_solver_config_default(&cfg);
  CHECK(graphnls_minimize(compact, 1.0, 3.0, &cfg, &res) == GRAPHNLS_E_INVALID_GRAPH);
  graphnls_graph_free(compact);

  CHECK(graphnls_graph_load("/nonexistent/file.graph", &bad) != GRAPHNLS_OK);
  CHECK(graphnls_graph_line(-1.0, &bad) == GRAPHNLS_E_INVALID_ARGUMENT);
  CHECK(graphnls_graph_core_measure(nullptr, &m) == GRAPHNLS_E_INVALID_ARGUMENT);
}

TEST_CASE("minimisation through the C interface") {
  graphnls_graph* g = nullptr;
  REQUIRE(graphnls_graph_line(3.0, &g) == GRAPHNLS_OK);
  graphnls_solver_config cfg;
  graphnls_solver_config_default(&cfg);
  const double schedule[] = {10.0, 20.0};
  cfg.r_cut_schedule = schedule;
  cfg.r_cut_count = 2;
  graphnls_result* r = nullptr;
  REQUIRE(graphnls_minimize(g, 1.0, 3.0, &cfg, &r) == GRAPHNLS_OK);
  double e = 0.0;
  graphnls_verdict v = GRAPHNLS_INCONCLUSIVE;
  CHECK(graphnls_result_energy(r, &e) == GRAPHNLS_OK);
  CHECK(graphnls_result_verdict(r, &v) == GRAPHNLS_OK);
  CHECK(e < 0.0);
  CHECK(v == GRAPHNLS_NEGATIVE_MINIMUM);
  CHECK(std::string(graphnls_verdict_name(v)) == "NEGATIVE_MINIMUM");

  Owned text;
  REQUIRE(graphnls_result_json(r, &text.s) == GRAPHNLS_OK);
  const auto j = text.json();
  CHECK(j.at("schema_version") == 1);
  for (auto key : {"energy", "kinetic", "potential", "mass", "linf", "gn_slack_p", "gn_slack_inf", "lambda",
                   "kirchhoff_residuals", "verdict", "verdict_note", "r_cut_table"})
    CHECK(j.contains(key));
  CHECK(j.at("energy").get<double>() == e);
  CHECK(j.at("r_cut_table").size() == 2);

  const auto dir = scratch("run");
  CHECK(graphnls_result_write(r, dir.string().c_str()) == GRAPHNLS_OK);
  CHECK(std::filesystem::exists(dir / "result.json"));
  CHECK(std::filesystem::exists(dir / "trace.csv"));
  CHECK(std::filesystem::exists(dir / "state.csv"));
  graphnls_result_free(r);

  cfg.init = GRAPHNLS_INIT_SOLITON;
  cfg.soliton_edge = "nope";
  CHECK(graphnls_minimize(g, 1.0, 3.0, &cfg, &r) == GRAPHNLS_E_INVALID_ARGUMENT);
  cfg.soliton_edge = nullptr;
  CHECK(graphnls_minimize(g, 1.0, 7.0, &cfg, &r) == GRAPHNLS_E_INVALID_ARGUMENT);
  CHECK(std::string(graphnls_last_error()) == "p must be in (2,6)");
  graphnls_graph_free(g);
}

TEST_CASE("dichotomy, thresholds and certificates") {
  graphnls_graph* g = nullptr;
  REQUIRE(graphnls_graph_double_bridge(0.9, 0.9, &g) == GRAPHNLS_OK);

  Owned cert;
  int valid = 0;
  REQUIRE(graphnls_certify(g, 4.0, 1.0, nullptr, nullptr, nullptr, &cert.s, &valid) == GRAPHNLS_OK);
  CHECK(valid == 1);
  CHECK(cert.json().at("schema_version") == 1);

  const auto dir = scratch("cert");
  const auto part = dir / "split.part";
  std::ofstream(part) << "upper left\nlower right\n";
  Owned cert2;
  CHECK(graphnls_certify(g, 4.0, 1.0, part.string().c_str(), nullptr, nullptr, &cert2.s, &valid) == GRAPHNLS_OK);
  CHECK(valid == 1);
  CHECK(graphnls_certify(g, 4.0, 1.0, (dir / "missing").string().c_str(), nullptr, nullptr, nullptr, &valid) ==
        GRAPHNLS_E_IO);

  Owned th;
  REQUIRE(graphnls_thresholds(4.0, 1.0, 2, nullptr, nullptr, &th.s) == GRAPHNLS_OK);
  CHECK(th.json().at("L1_exist").get<double>() == 2.0);
  const double c = 0.5;
  Owned th2;
  REQUIRE(graphnls_thresholds(4.0, 1.0, 2, &c, nullptr, &th2.s) == GRAPHNLS_OK);
  CHECK(th2.json().at("L2_nonexist").get<double>() == doctest::Approx(16.0));

  graphnls_solver_config cfg;
  graphnls_solver_config_default(&cfg);
  const double schedule[] = {10.0, 20.0, 40.0};
  cfg.r_cut_schedule = schedule;
  cfg.r_cut_count = 3;
  Owned d;
  graphnls_verdict v = GRAPHNLS_NEGATIVE_MINIMUM;
  REQUIRE(graphnls_dichotomy(g, 1.0, 4.0, &cfg, 2, &d.s, &v) == GRAPHNLS_OK);
  CHECK(v != GRAPHNLS_NEGATIVE_MINIMUM);
  CHECK(d.json().at("runs").size() == 7);
  graphnls_graph_free(g);
}

TEST_CASE("sweep and property checks") {
  const auto dir = scratch("sweep");
  std::ofstream(dir / "line.graph") << "vertex a\nvertex b\nedge core a b 1\nhalfline left a\nhalfline right b\n";
  std::ofstream(dir / "sweep.json")
      << R"({"axis": "core_scale", "grid": [0.5, 4], "graph": "line.graph", "mu": 1, "p": 4,
            "out": "out", "seed": 3, "solver": {"h_max": 0.05, "r_cut_schedule": [10, 20, 40]}})";
  Owned summary;
  int sound = 0;
  REQUIRE(graphnls_sweep((dir / "sweep.json").string().c_str(), &summary.s, &sound) == GRAPHNLS_OK);
  CHECK(sound == 1);
  const auto j = summary.json();
  CHECK(j.at("rows").size() == 2);
  CHECK(j.at("rows")[0].at("verdict") == "ZERO_INFIMUM_SUSPECTED");
  CHECK(j.at("rows")[1].at("verdict") == "NEGATIVE_MINIMUM");
  CHECK(std::filesystem::exists(dir / "out" / "phase.csv"));

  Owned checks;
  int passed = 0;
  REQUIRE(graphnls_check(1, 0.0, &checks.s, &passed) == GRAPHNLS_OK);
  CHECK(passed == 1);
  Owned injected;
  REQUIRE(graphnls_check(1, 0.5, &injected.s, &passed) == GRAPHNLS_OK);
  CHECK(passed == 0);
}
