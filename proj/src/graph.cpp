#include "graphnls/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <queue>
#include <sstream>

namespace graphnls {

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {}

std::vector<EdgeIndex> MetricGraph::half_lines() const {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < edges_.size(); ++e)
    if (edges_[e].is_half_line()) out.push_back(e);
  return out;
}

std::vector<EdgeIndex> MetricGraph::core_edges() const {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < edges_.size(); ++e)
    if (!edges_[e].is_half_line()) out.push_back(e);
  return out;
}

std::size_t MetricGraph::half_line_count() const {
  return static_cast<std::size_t>(std::count_if(
      edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_half_line(); }));
}

std::optional<EdgeIndex> MetricGraph::find_edge(std::string_view id) const {
  for (EdgeIndex e = 0; e < edges_.size(); ++e)
    if (edges_[e].id == id) return e;
  return std::nullopt;
}

std::optional<VertexIndex> MetricGraph::find_vertex(std::string_view id) const {
  for (VertexIndex v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].id == id) return v;
  return std::nullopt;
}

std::vector<EdgeIndex> MetricGraph::incident_edges(VertexIndex v) const {
  std::vector<EdgeIndex> out;
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    if (edges_[e].from == v) out.push_back(e);
    if (edges_[e].to == v) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

VertexIndex GraphBuilder::add_vertex(std::string id) {
  if (id.empty()) throw Error("vertex id must be nonempty");
  for (const auto& v : vertices_)
    if (v.id == id) throw Error("duplicate vertex id '" + id + "'");
  vertices_.push_back({std::move(id)});
  return vertices_.size() - 1;
}

VertexIndex GraphBuilder::lookup(std::string_view id) const {
  for (VertexIndex v = 0; v < vertices_.size(); ++v)
    if (vertices_[v].id == id) return v;
  throw Error("unknown vertex '" + std::string(id) + "'");
}

void GraphBuilder::check_fresh_edge_id(const std::string& id) const {
  if (id.empty()) throw Error("edge id must be nonempty");
  for (const auto& e : edges_)
    if (e.id == id) throw Error("duplicate edge id '" + id + "'");
}

EdgeIndex GraphBuilder::add_edge(std::string id, std::string_view from, std::string_view to,
                                 double length) {
  check_fresh_edge_id(id);
  Edge e;
  e.from = lookup(from);
  e.to = lookup(to);
  e.length = length;
  e.in_core = true;
  e.id = std::move(id);
  edges_.push_back(std::move(e));
  return edges_.size() - 1;
}

EdgeIndex GraphBuilder::add_half_line(std::string id, std::string_view anchor) {
  check_fresh_edge_id(id);
  Edge e;
  e.from = lookup(anchor);
  e.to = kNoVertex;
  e.length = kInfiniteLength;
  e.in_core = false;
  e.id = std::move(id);
  edges_.push_back(std::move(e));
  return edges_.size() - 1;
}

MetricGraph GraphBuilder::build() const { return MetricGraph(vertices_, edges_); }

// ---------------------------------------------------------------------------

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::vector<std::size_t> parent;
};

}  // namespace

ValidationReport validate(const MetricGraph& graph) {
  ValidationReport report;
  auto add = [&](std::string code, std::string message) {
    if (!report.has(code)) report.violations.push_back({std::move(code), std::move(message)});
  };

  const auto& vs = graph.vertices();
  const auto& es = graph.edges();
  const std::size_t nv = vs.size();

  bool endpoints_ok = true;
  for (const auto& e : es) {
    if (e.from >= nv || (!e.is_half_line() && e.to >= nv)) {
      add("endpoint", "edge '" + e.id + "' references an unknown vertex");
      endpoints_ok = false;
    }
    if (e.is_half_line()) {
      if (e.in_core) add("core_flag", "half-line '" + e.id + "' cannot belong to K");
      if (!std::isinf(e.length)) add("core_flag", "half-line '" + e.id + "' must have infinite length");
    } else {
      if (!std::isfinite(e.length) || !(e.length > 0.0))
        add("edge_length", "edge '" + e.id + "' must have finite positive length");
      if (!e.in_core) add("core_flag", "finite edge '" + e.id + "' must belong to K");
    }
  }

  if (graph.half_line_count() == 0) add("half_lines", "N ≥ 1 required");

  double core = 0.0;
  for (const auto& e : es)
    if (!e.is_half_line() && std::isfinite(e.length) && e.length > 0) core += e.length;
  if (!(core > 0.0)) add("core_measure", "meas(K) > 0 required");

  if (!endpoints_ok) return report;

  std::vector<bool> in_core_vertex(nv, false);
  DisjointSets core_sets(nv), all_sets(nv);
  for (const auto& e : es) {
    if (e.is_half_line()) continue;
    in_core_vertex[e.from] = in_core_vertex[e.to] = true;
    core_sets.unite(e.from, e.to);
    all_sets.unite(e.from, e.to);
  }

  std::optional<std::size_t> core_root;
  for (VertexIndex v = 0; v < nv; ++v) {
    if (!in_core_vertex[v]) continue;
    const auto r = core_sets.find(v);
    if (core_root && *core_root != r) add("core_connected", "K connected required");
    core_root = r;
  }

  for (const auto& e : es) {
    if (e.is_half_line() && !in_core_vertex[e.from])
      add("anchor", "half-line '" + e.id + "' must start at a vertex of K");
  }

  for (VertexIndex v = 1; v < nv; ++v) {
    if (all_sets.find(v) != all_sets.find(0)) {
      add("graph_connected", "Γ connected required");
      break;
    }
  }
  return report;
}

double measure_core(const MetricGraph& graph) {
  const auto report = validate(graph);
  if (!report.ok()) throw Error("inadmissible graph: " + report.violations.front().message);
  return measure_core(graph, graph.core_edges());
}

double measure_core(const MetricGraph& graph, const std::vector<EdgeIndex>& edges) {
  double sum = 0.0;
  for (const auto e : edges) {
    const auto& edge = graph.edge(e);
    if (!edge.is_half_line()) sum += edge.length;
  }
  return sum;
}

MetricGraph homothety(const MetricGraph& graph, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor))
    throw Error("homothety factor must be positive");
  auto edges = graph.edges();
  for (auto& e : edges)
    if (!e.is_half_line()) e.length *= factor;
  return MetricGraph(graph.vertices(), std::move(edges));
}

namespace {

void require_positive(double length, const char* what) {
  if (!(length > 0.0) || !std::isfinite(length))
    throw Error(std::string(what) + " must be a positive length");
}

}  // namespace

MetricGraph line_graph(double core_length) {
  require_positive(core_length, "core length");
  GraphBuilder b;
  b.add_vertex("a");
  b.add_vertex("b");
  b.add_edge("core", "a", "b", core_length);
  b.add_half_line("left", "a");
  b.add_half_line("right", "b");
  return b.build();
}

MetricGraph star_graph(const std::vector<double>& core_edge_lengths,
                       std::size_t half_lines_per_terminal) {
  if (core_edge_lengths.empty()) throw Error("star graph needs at least one core edge");
  GraphBuilder b;
  b.add_vertex("hub");
  for (std::size_t i = 0; i < core_edge_lengths.size(); ++i) {
    require_positive(core_edge_lengths[i], "star edge");
    const auto t = "t" + std::to_string(i);
    b.add_vertex(t);
    b.add_edge("e" + std::to_string(i), "hub", t, core_edge_lengths[i]);
    for (std::size_t j = 0; j < half_lines_per_terminal; ++j)
      b.add_half_line("h" + std::to_string(i) + "_" + std::to_string(j), t);
  }
  return b.build();
}

MetricGraph double_bridge(double l1, double l2) {
  require_positive(l1, "bridge 1");
  require_positive(l2, "bridge 2");
  GraphBuilder b;
  b.add_vertex("a");
  b.add_vertex("b");
  b.add_edge("upper", "a", "b", l1);
  b.add_edge("lower", "a", "b", l2);
  b.add_half_line("left", "a");
  b.add_half_line("right", "b");
  return b.build();
}

// ---------------------------------------------------------------------------

std::vector<VertexIndex> Partition::part_vertices(const MetricGraph& graph, std::size_t i) const {
  std::vector<VertexIndex> out;
  for (const auto e : parts.at(i)) {
    const auto& edge = graph.edge(e);
    out.push_back(edge.from);
    if (!edge.is_half_line()) out.push_back(edge.to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Partition canonical(Partition partition) {
  for (auto& part : partition.parts) std::sort(part.begin(), part.end());
  std::sort(partition.parts.begin(), partition.parts.end());
  return partition;
}

std::vector<std::string> check_partition(const MetricGraph& graph, const Partition& partition) {
  std::vector<std::string> problems;
  const std::size_t n = graph.half_line_count();
  const std::size_t r = partition.part_count();
  if (n < 2) problems.push_back("partitions require N ≥ 2 half-lines");
  if (r < 2 || r > n)
    problems.push_back("part count " + std::to_string(r) + " outside [2, N]");

  std::vector<int> seen(graph.edges().size(), 0);
  for (std::size_t i = 0; i < r; ++i) {
    const auto& part = partition.parts[i];
    if (part.empty()) problems.push_back("part " + std::to_string(i) + " is empty");
    bool has_half_line = false;
    for (const auto e : part) {
      if (e >= seen.size()) {
        problems.push_back("part " + std::to_string(i) + " references unknown edge");
        continue;
      }
      ++seen[e];
      has_half_line = has_half_line || graph.edge(e).is_half_line();
    }
    if (!has_half_line) problems.push_back("part " + std::to_string(i) + " contains no half-line");
  }
  for (EdgeIndex e = 0; e < seen.size(); ++e) {
    if (seen[e] == 0) problems.push_back("edge '" + graph.edge(e).id + "' not covered");
    if (seen[e] > 1) problems.push_back("edge '" + graph.edge(e).id + "' in several parts");
  }
  return problems;
}

namespace {

// Set partitions of {0..n-1} into exactly k blocks, as restricted growth strings.
void set_partitions(std::size_t n, std::size_t k,
                    const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> label(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (n - i < k - used) return;
    if (i == n) {
      if (used == k) visit(label);
      return;
    }
    for (std::size_t b = 0; b < used; ++b) {
      label[i] = b;
      rec(i + 1, used);
    }
    if (used < k) {
      label[i] = used;
      rec(i + 1, used + 1);
    }
  };
  if (n == 0) return;
  label[0] = 0;
  rec(1, 1);
}

double stirling2(std::size_t n, std::size_t k) {
  std::vector<std::vector<double>> s(n + 1, std::vector<double>(k + 1, 0.0));
  s[0][0] = 1.0;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= std::min(i, k); ++j)
      s[i][j] = static_cast<double>(j) * s[i - 1][j] + s[i - 1][j - 1];
  return s[n][k];
}

}  // namespace

std::vector<Partition> enumerate_partitions(const MetricGraph& graph, std::size_t max_parts,
                                            std::size_t limit) {
  const auto halves = graph.half_lines();
  const auto core = graph.core_edges();
  const std::size_t n = halves.size();
  if (n < 2) throw Error("partitions require N ≥ 2 half-lines");
  if (max_parts < 2 || max_parts > n)
    throw Error("max_parts must lie in [2, N]");

  double expected = 0.0;
  for (std::size_t r = 2; r <= max_parts; ++r)
    expected += stirling2(n, r) * std::pow(static_cast<double>(r), static_cast<double>(core.size()));
  if (expected > static_cast<double>(limit))
    throw Error("too many partitions to enumerate (" + std::to_string(expected) + ")");

  std::vector<Partition> out;
  for (std::size_t r = 2; r <= max_parts; ++r) {
    set_partitions(n, r, [&](const std::vector<std::size_t>& label) {
      // Each core edge independently joins one of the r blocks.
      std::vector<std::size_t> choice(core.size(), 0);
      while (true) {
        Partition p;
        p.parts.resize(r);
        for (std::size_t i = 0; i < n; ++i) p.parts[label[i]].push_back(halves[i]);
        for (std::size_t i = 0; i < core.size(); ++i) p.parts[choice[i]].push_back(core[i]);
        out.push_back(canonical(std::move(p)));

        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == r) choice[pos++] = 0;
        if (pos == choice.size()) break;
      }
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> distances_from_point(const MetricGraph& graph, EdgeIndex edge_index,
                                         double offset) {
  const auto& origin = graph.edge(edge_index);
  if (origin.is_half_line()) throw Error("distance origin must lie on a finite edge");
  if (!(offset >= 0.0 && offset <= origin.length)) throw Error("offset outside edge");

  std::vector<double> dist(graph.vertices().size(), kInfiniteLength);
  using Item = std::pair<double, VertexIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  auto relax = [&](VertexIndex v, double d) {
    if (d < dist[v]) {
      dist[v] = d;
      queue.push({d, v});
    }
  };
  relax(origin.from, offset);
  relax(origin.to, origin.length - offset);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist[v]) continue;
    for (const auto& e : graph.edges()) {
      if (e.is_half_line()) continue;
      if (e.from == v) relax(e.to, d + e.length);
      if (e.to == v) relax(e.from, d + e.length);
    }
  }
  return dist;
}

}  // namespace graphnls
