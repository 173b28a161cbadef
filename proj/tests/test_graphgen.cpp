#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "rgglab/errors.hpp"
#include "rgglab/graph_io.hpp"
#include "rgglab/graphgen.hpp"

using namespace rgglab;

TEST(Adjacency, ValidatesAndSorts) {
  const Adjacency a = Adjacency::from_edges(4, {{2, 3}, make_edge(1, 0), {0, 2}});
  ASSERT_EQ(a.edge_count(), 3u);
  EXPECT_EQ(a.edges()[0], (Edge{0, 1}));
  EXPECT_EQ(a.edges()[2], (Edge{2, 3}));
  EXPECT_EQ(a.degrees(), (std::vector<std::size_t>{2, 1, 2, 1}));
  const Eigen::MatrixXd m = a.dense();
  EXPECT_EQ(m, m.transpose());
  EXPECT_EQ(m.diagonal().sum(), 0.0);
  EXPECT_EQ(m.sum(), 6.0);
  EXPECT_THROW(Adjacency::from_edges(3, {{1, 1}}), InvalidParameter);
  EXPECT_THROW(Adjacency::from_edges(3, {{0, 3}}), InvalidParameter);
  EXPECT_THROW(Adjacency::from_edges(3, {{0, 1}, {0, 1}}), InvalidParameter);
}

TEST(GeometricGraph, MatchesDefinition) {
  const UnitVectorSet v = sample_unit_vectors(120, 6, 17);
  const CapParams cap = calibrate_tau(0.1, 6);
  const Adjacency a = geometric_graph(v, cap);
  std::size_t expected = 0;
  for (Eigen::Index i = 0; i < 120; ++i) {
    for (Eigen::Index j = i + 1; j < 120; ++j) expected += v.data().row(i).dot(v.data().row(j)) >= cap.tau;
  }
  EXPECT_EQ(a.edge_count(), expected);
  for (const auto& e : a.edges()) EXPECT_GE(v.data().row(e.u).dot(v.data().row(e.v)), cap.tau);
}

TEST(GeometricGraph, IndependentOfThreadCount) {
  const UnitVectorSet v = sample_unit_vectors(700, 10, 3);
  const CapParams cap = calibrate_tau(0.05, 10);
  const Adjacency one = geometric_graph(v, cap, 1);
  EXPECT_EQ(one.edges(), geometric_graph(v, cap, 3).edges());
  EXPECT_EQ(one.edges(), geometric_graph(v, cap, 0).edges());
}

TEST(GeometricGraph, EdgeDensityNearP) {
  const UnitVectorSet v = sample_unit_vectors(1500, 50, 21);
  const Adjacency a = geometric_graph(v, calibrate_tau(0.02, 50));
  const double pairs = 1500.0 * 1499.0 / 2.0;
  // Edge count has variance >= pairs p (1-p); allow a wide margin for the positive correlations.
  EXPECT_NEAR(a.edge_count() / pairs, 0.02, 0.002);
  EXPECT_THROW(geometric_graph(v, calibrate_tau(0.02, 40)), InvalidParameter);
}

TEST(ErdosRenyi, DeterministicWithExpectedDensity) {
  const Adjacency a = erdos_renyi(2000, 0.01, 5);
  EXPECT_EQ(a.edges(), erdos_renyi(2000, 0.01, 5).edges());
  const double pairs = 2000.0 * 1999.0 / 2.0;
  const double sd = std::sqrt(pairs * 0.01 * 0.99);
  EXPECT_NEAR(static_cast<double>(a.edge_count()), pairs * 0.01, 4 * sd);
  EXPECT_THROW(erdos_renyi(10, 1.5, 1), InvalidParameter);
}

TEST(Center, SubtractsPOffDiagonal) {
  const Adjacency a = Adjacency::from_edges(3, {{0, 1}});
  const CenteredMatrix q = center(a, 0.25);
  EXPECT_DOUBLE_EQ(q.values(0, 1), 0.75);
  EXPECT_DOUBLE_EQ(q.values(1, 2), -0.25);
  EXPECT_DOUBLE_EQ(q.values(2, 2), 0.0);
  EXPECT_THROW(center(a, 0.0), InvalidParameter);
}

TEST(EdgeList, RoundTrip) {
  const Adjacency a = erdos_renyi(50, 0.1, 2);
  std::stringstream s;
  write_edge_list(s, a);
  const Adjacency b = read_edge_list(s);
  EXPECT_EQ(b.n(), 50u);
  EXPECT_EQ(a.edges(), b.edges());

  const auto path = std::filesystem::temp_directory_path() / "rgglab_roundtrip.edges";
  write_edge_list_file(path, a);
  EXPECT_EQ(read_edge_list_file(path).edges(), a.edges());
  std::filesystem::remove(path);
}

TEST(EdgeList, ParseErrorsCarryLineNumbers) {
  const auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_edge_list(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t{0};
  };
  EXPECT_EQ(line_of("3 x\n"), 1u);
  EXPECT_EQ(line_of("# c\n3 2\n0 1\n1 1\n"), 4u);
  EXPECT_EQ(line_of("3 2\n0 1\n0 7\n"), 3u);
  EXPECT_EQ(line_of("3 2\n0 1\n\n1 0\n"), 4u);
  EXPECT_EQ(line_of("3 1\n0 1 5\n"), 2u);
  EXPECT_NE(line_of("3 2\n0 1\n"), 0u);
  EXPECT_THROW(read_edge_list_file("/nonexistent/graph.edges"), Error);
}

TEST(GraphMetadata, Json) {
  const GraphMetadata m{"geometric", 10, 4, 0.1, 5, 0.3, 77};
  const auto j = to_json(m);
  EXPECT_EQ(j.at("generator"), "geometric");
  EXPECT_EQ(j.at("seed"), 77u);
  EXPECT_EQ(j.at("engine"), "mt19937_64");
}
