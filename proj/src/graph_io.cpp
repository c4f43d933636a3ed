#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "graphnls/graph.hpp"

namespace graphnls {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  const auto hash = line.find('#');
  std::istringstream ss(hash == std::string::npos ? line : line.substr(0, hash));
  std::vector<std::string> tokens;
  for (std::string t; ss >> t;) tokens.push_back(t);
  return tokens;
}

double parse_length(const std::string& token, std::size_t line) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ParseError(line, "malformed length '" + token + "'");
  if (!std::isfinite(value) || !(value > 0.0))
    throw ParseError(line, "edge length must be finite and > 0, got '" + token + "'");
  return value;
}

}  // namespace

MetricGraph parse_graph(std::istream& in) {
  GraphBuilder builder;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    const auto& directive = tokens[0];
    try {
      if (directive == "vertex") {
        if (tokens.size() != 2) throw ParseError(number, "expected: vertex <id>");
        builder.add_vertex(tokens[1]);
      } else if (directive == "edge") {
        if (tokens.size() != 5) throw ParseError(number, "expected: edge <id> <v1> <v2> <length>");
        builder.add_edge(tokens[1], tokens[2], tokens[3], parse_length(tokens[4], number));
      } else if (directive == "halfline") {
        if (tokens.size() != 3) throw ParseError(number, "expected: halfline <id> <v>");
        builder.add_half_line(tokens[1], tokens[2]);
      } else {
        throw ParseError(number, "unknown directive '" + directive + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  return builder.build();
}

MetricGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  return parse_graph(in);
}

void write_graph(std::ostream& out, const MetricGraph& graph) {
  const auto& vs = graph.vertices();
  for (const auto& v : vs) out << "vertex " << v.id << '\n';
  for (const auto& e : graph.edges()) {
    if (e.is_half_line()) {
      out << "halfline " << e.id << ' ' << vs.at(e.from).id << '\n';
    } else {
      out << "edge " << e.id << ' ' << vs.at(e.from).id << ' ' << vs.at(e.to).id << ' '
          << std::setprecision(17) << e.length << '\n';
    }
  }
}

Partition parse_partition(std::istream& in, const MetricGraph& graph) {
  Partition p;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    std::vector<EdgeIndex> part;
    for (const auto& t : tokens) {
      const auto e = graph.find_edge(t);
      if (!e) throw ParseError(number, "unknown edge '" + t + "'");
      part.push_back(*e);
    }
    p.parts.push_back(std::move(part));
  }
  return canonical(std::move(p));
}

Partition load_partition(const std::string& path, const MetricGraph& graph) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open partition file '" + path + "'");
  return parse_partition(in, graph);
}

}  // namespace graphnls
