#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "graphnls/graph.hpp"

using namespace graphnls;

namespace {

MetricGraph parse(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

// Every labelling of edges by r colours, kept when each colour is used and
// holds a half-line; canonical forms collapse colour permutations.
std::set<Partition> brute_force_partitions(const MetricGraph& g, std::size_t max_parts) {
  std::set<Partition> out;
  const std::size_t m = g.edges().size();
  for (std::size_t r = 2; r <= max_parts; ++r) {
    std::vector<std::size_t> label(m, 0);
    while (true) {
      Partition p;
      p.parts.assign(r, {});
      for (std::size_t e = 0; e < m; ++e) p.parts[label[e]].push_back(e);
      const bool ok = std::all_of(p.parts.begin(), p.parts.end(), [&](const auto& part) {
        return std::any_of(part.begin(), part.end(), [&](EdgeIndex e) { return g.edge(e).is_half_line(); });
      });
      if (ok) out.insert(canonical(p));
      std::size_t i = 0;
      while (i < m && ++label[i] == r) label[i++] = 0;
      if (i == m) break;
    }
  }
  return out;
}

}  // namespace

TEST_CASE("validate accepts a line and rejects broken graphs") {
  CHECK(validate(line_graph(1.0)).ok());

  const auto compact = parse("vertex a\nvertex b\nedge e a b 1\n");
  const auto r1 = validate(compact);
  REQUIRE(r1.has("half_lines"));
  CHECK(r1.violations.front().message == "N ≥ 1 required");

  // Two core segments joined only through vertex c, which carries no core edge.
  GraphBuilder b;
  for (auto v : {"a", "b", "c", "d"}) b.add_vertex(v);
  b.add_edge("k1", "a", "b", 1.0);
  b.add_edge("k2", "c", "d", 1.0);
  b.add_half_line("h1", "a");
  b.add_half_line("h2", "c");
  const auto r2 = validate(b.build());
  CHECK(r2.has("core_connected"));
}

TEST_CASE("parser reports line numbers") {
  try {
    parse("vertex a\nvertex b\nedge e a b 1x\nhalfline h a\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("line 3") == 0);
  }
  CHECK_THROWS_AS(parse("vertex a\nedge e a z 1\n"), Error);
}

TEST_CASE("graph text round trip") {
  const auto g = double_bridge(1.25, 0.75);
  std::ostringstream out;
  write_graph(out, g);
  const auto back = parse(out.str());
  REQUIRE(back.edges().size() == g.edges().size());
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    CHECK(back.edge(i).id == g.edge(i).id);
    CHECK(back.edge(i).length == g.edge(i).length);
  }
}

TEST_CASE("core measure") {
  GraphBuilder b;
  b.add_vertex("a");
  b.add_vertex("b");
  b.add_edge("k", "a", "b", 2.5);
  b.add_half_line("h", "a");
  CHECK(measure_core(b.build()) == 2.5);
  CHECK(measure_core(double_bridge(1.0, 3.0)) == 4.0);

  // Chain of 24 unit core edges.
  GraphBuilder chain;
  chain.add_vertex("v0");
  double oracle = 0.0;
  for (int i = 1; i <= 24; ++i) {
    chain.add_vertex("v" + std::to_string(i));
    chain.add_edge("e" + std::to_string(i), "v" + std::to_string(i - 1), "v" + std::to_string(i), 1.0);
    oracle += 1.0;
  }
  chain.add_half_line("h0", "v0");
  chain.add_half_line("h24", "v24");
  CHECK(measure_core(chain.build()) == oracle);
}

TEST_CASE("shape builders") {
  const auto line = line_graph(2.0);
  CHECK(line.core_edges().size() == 1);
  CHECK(line.half_line_count() == 2);
  CHECK(measure_core(line) == 2.0);

  const auto db = double_bridge(1.0, 1.0);
  CHECK(db.core_edges().size() == 2);
  CHECK(db.half_line_count() == 2);
  const auto& e0 = db.edge(db.core_edges()[0]);
  const auto& e1 = db.edge(db.core_edges()[1]);
  CHECK(((e0.from == e1.from && e0.to == e1.to) || (e0.from == e1.to && e0.to == e1.from)));

  const auto star = star_graph({1.0, 1.0, 1.0}, 1);
  CHECK(star.core_edges().size() == 3);
  CHECK(star.half_line_count() == 3);
  CHECK(validate(star).ok());
}

TEST_CASE("homothety") {
  const auto g = double_bridge(2.0, 0.5);
  const auto same = homothety(g, 1.0);
  for (std::size_t i = 0; i < g.edges().size(); ++i) CHECK(same.edge(i).length == g.edge(i).length);
  CHECK(measure_core(homothety(line_graph(2.0), 0.5)) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> factor(0.1, 10.0);
  for (int i = 0; i < 20; ++i) {
    const double a = factor(rng), b = factor(rng);
    CHECK(measure_core(homothety(g, a)) == doctest::Approx(a * measure_core(g)).epsilon(1e-13));
    const auto ab = homothety(homothety(g, a), b);
    const auto direct = homothety(g, a * b);
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      if (g.edge(e).is_half_line()) continue;
      CHECK(std::abs(ab.edge(e).length - direct.edge(e).length) <= 1e-12 * direct.edge(e).length);
    }
  }
}

TEST_CASE("partition enumeration agrees with brute force") {
  const MetricGraph graphs[] = {double_bridge(1.0, 1.0), star_graph({1.0, 1.0, 1.0}, 1),
                                star_graph({1.0, 2.0}, 2)};
  for (const auto& g : graphs) {
    REQUIRE(g.edges().size() <= 6);
    const auto n = g.half_line_count();
    const auto listed = enumerate_partitions(g, n);
    const auto oracle = brute_force_partitions(g, n);
    CHECK(listed.size() == oracle.size());
    CHECK(std::set<Partition>(listed.begin(), listed.end()) == oracle);
    CHECK(std::is_sorted(listed.begin(), listed.end()));
    for (const auto& p : listed) {
      CHECK(check_partition(g, p).empty());
      double sum = 0.0;
      for (const auto& part : p.parts) sum += measure_core(g, part);
      CHECK(sum == doctest::Approx(measure_core(g)).epsilon(1e-15));
    }
  }
}

TEST_CASE("double bridge partitions include both splits") {
  const auto g = double_bridge(1.0, 1.0);
  const auto upper = *g.find_edge("upper"), lower = *g.find_edge("lower");
  const auto left = *g.find_edge("left"), right = *g.find_edge("right");
  const auto listed = enumerate_partitions(g, 2);
  const auto has = [&](Partition p) {
    return std::find(listed.begin(), listed.end(), canonical(std::move(p))) != listed.end();
  };
  CHECK(has(Partition{{{upper, left}, {lower, right}}}));
  CHECK(has(Partition{{{upper, lower, left}, {right}}}));
}

TEST_CASE("partition errors") {
  CHECK_THROWS_AS(enumerate_partitions(star_graph({1.0}, 1), 2), Error);
  const auto g = double_bridge(1.0, 1.0);
  const Partition missing{{{*g.find_edge("left")}, {*g.find_edge("right")}}};
  CHECK_FALSE(check_partition(g, missing).empty());
  const Partition no_half_line{{{*g.find_edge("upper")}, {*g.find_edge("lower"), *g.find_edge("left"),
                                                          *g.find_edge("right")}}};
  CHECK_FALSE(check_partition(g, no_half_line).empty());

  std::istringstream bad("upper left\nnope right\n");
  CHECK_THROWS_AS(parse_partition(bad, g), ParseError);
}
