#include "rgglab/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "rgglab/errors.hpp"
#include "rgglab/random.hpp"

namespace rgglab {
namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

void write_edge_list(std::ostream& out, const Adjacency& graph) {
  out << graph.n() << ' ' << graph.edge_count() << '\n';
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

Adjacency read_edge_list(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_content_line(in, line, line_no)) throw ParseError("edge list: missing \"n m\" header", line_no);

  long long n = -1, m = -1;
  {
    std::istringstream header(line);
    std::string rest;
    if (!(header >> n >> m) || (header >> rest) || n < 0 || m < 0) {
      throw ParseError("edge list: header must be two non-negative integers \"n m\"", line_no);
    }
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long k = 0; k < m; ++k) {
    if (!next_content_line(in, line, line_no)) {
      throw ParseError("edge list: expected " + std::to_string(m) + " edges, found " + std::to_string(k), line_no);
    }
    std::istringstream row(line);
    long long i = -1, j = -1;
    std::string rest;
    if (!(row >> i >> j) || (row >> rest)) throw ParseError("edge list: expected \"i j\"", line_no);
    if (i < 0 || j < 0 || i >= n || j >= n) throw ParseError("edge list: vertex id out of range", line_no);
    if (i == j) throw ParseError("edge list: self-loop", line_no);
    edges.push_back(make_edge(static_cast<Vertex>(i), static_cast<Vertex>(j)));
  }
  if (next_content_line(in, line, line_no)) throw ParseError("edge list: trailing content after last edge", line_no);
  try {
    return Adjacency::from_edges(static_cast<std::size_t>(n), std::move(edges));
  } catch (const InvalidParameter& e) {
    throw ParseError(std::string("edge list: ") + e.what(), line_no);
  }
}

Adjacency read_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open edge list " + path.string());
  return read_edge_list(in);
}

void write_edge_list_file(const std::filesystem::path& path, const Adjacency& graph) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot write edge list " + path.string());
  write_edge_list(out, graph);
}

nlohmann::json to_json(const GraphMetadata& meta) {
  return nlohmann::json{{"generator", meta.generator}, {"n", meta.n},   {"edges", meta.edges},
                        {"p", meta.p},                 {"d", meta.d},   {"tau", meta.tau},
                        {"seed", meta.seed},           {"engine", std::string(kEngineName)}};
}

}  // namespace rgglab
