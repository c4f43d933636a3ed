#ifndef GRAPHNLS_GRAPH_HPP
#define GRAPHNLS_GRAPH_HPP

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace graphnls {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by the graph/partition text parsers; message carries "line N: ...".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

inline constexpr VertexIndex kNoVertex = std::numeric_limits<VertexIndex>::max();
inline constexpr double kInfiniteLength = std::numeric_limits<double>::infinity();

struct Vertex {
  std::string id;
};

// The coordinate x_e runs from 0 at `from` to `length` at `to`. Half-lines
// have to == kNoVertex: the vertex at infinity is implicit.
struct Edge {
  std::string id;
  VertexIndex from = kNoVertex;
  VertexIndex to = kNoVertex;
  double length = 0.0;
  bool in_core = false;

  bool is_half_line() const { return to == kNoVertex; }
};

struct Violation {
  std::string code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
};

/// Connected metric graph made of a compact core K and half-lines attached
/// to vertices of K. Immutable once built; use GraphBuilder or the shape
/// builders below.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeIndex e) const { return edges_.at(e); }

  std::vector<EdgeIndex> half_lines() const;
  std::vector<EdgeIndex> core_edges() const;
  std::size_t half_line_count() const;

  std::optional<EdgeIndex> find_edge(std::string_view id) const;
  std::optional<VertexIndex> find_vertex(std::string_view id) const;

  /// Edges incident to v (a self-loop appears twice).
  std::vector<EdgeIndex> incident_edges(VertexIndex v) const;

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

class GraphBuilder {
 public:
  VertexIndex add_vertex(std::string id);
  EdgeIndex add_edge(std::string id, std::string_view from, std::string_view to,
                     double length);
  EdgeIndex add_half_line(std::string id, std::string_view anchor);

  /// Builds without validating; call validate() for admissibility.
  MetricGraph build() const;

 private:
  VertexIndex lookup(std::string_view id) const;
  void check_fresh_edge_id(const std::string& id) const;

  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
};

ValidationReport validate(const MetricGraph& graph);

/// Sum of core edge lengths. Throws Error on an inadmissible graph.
double measure_core(const MetricGraph& graph);

/// Core measure of a subset of edges (half-lines contribute nothing).
double measure_core(const MetricGraph& graph, const std::vector<EdgeIndex>& edges);

/// Scales every finite edge length by `factor`; half-lines are unchanged.
MetricGraph homothety(const MetricGraph& graph, double factor);

MetricGraph line_graph(double core_length);
MetricGraph star_graph(const std::vector<double>& core_edge_lengths,
                       std::size_t half_lines_per_terminal);
MetricGraph double_bridge(double l1, double l2);

// Parts are sets of edges; vertices shared by several parts belong to all
// of them. Parts need not be connected.
struct Partition {
  std::vector<std::vector<EdgeIndex>> parts;

  std::size_t part_count() const { return parts.size(); }
  std::vector<VertexIndex> part_vertices(const MetricGraph& graph, std::size_t i) const;

  friend bool operator==(const Partition&, const Partition&) = default;
  friend auto operator<=>(const Partition&, const Partition&) = default;
};

/// Sorts edges inside each part and parts lexicographically.
Partition canonical(Partition partition);

/// Empty result means the partition is admissible for `graph`.
std::vector<std::string> check_partition(const MetricGraph& graph, const Partition& partition);

/// Every partition with 2 <= r <= max_parts parts, in lexicographic order of
/// the canonical form. Throws if N < 2, max_parts is out of range, or more
/// than `limit` partitions would be produced.
std::vector<Partition> enumerate_partitions(const MetricGraph& graph, std::size_t max_parts,
                                            std::size_t limit = 200000);

/// Shortest-path distance from the point at `offset` along finite edge
/// `edge` to every vertex (half-lines are never traversed).
std::vector<double> distances_from_point(const MetricGraph& graph, EdgeIndex edge,
                                         double offset);

// Text format, one directive per line:
//   vertex <id>
//   edge <id> <v1> <v2> <length>
//   halfline <id> <v>
MetricGraph parse_graph(std::istream& in);
MetricGraph load_graph(const std::string& path);
void write_graph(std::ostream& out, const MetricGraph& graph);

/// Partition file: one part per line, whitespace separated edge ids.
Partition parse_partition(std::istream& in, const MetricGraph& graph);
Partition load_partition(const std::string& path, const MetricGraph& graph);

}  // namespace graphnls

#endif  // GRAPHNLS_GRAPH_HPP
