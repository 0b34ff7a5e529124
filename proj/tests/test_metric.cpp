#include "gasket/metric.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gasket;
using namespace gasket::metric;

namespace {

MetricGraph stretched_graph(int level, double alpha = 0.2) {
  return to_metric_graph(build_model(Variant::stretched(alpha), level), level);
}

std::vector<std::vector<double>> all_pairs(const MetricGraph& g) {
  std::vector<std::array<double, 3>> arcs;
  for (const auto& a : g.arcs()) arcs.push_back({double(a.u), double(a.v), a.weight});
  return oracle::floyd(g.node_count(), arcs);
}

}  // namespace

TEST(Graph, StretchedLevelOne) {
  const auto g = stretched_graph(1);
  EXPECT_EQ(g.node_count(), 9u);
  std::size_t tri = 0, join = 0;
  for (const auto& a : g.arcs()) {
    if (a.joining) {
      ++join;
      EXPECT_NEAR(a.weight, 0.2, 1e-15);
    } else {
      ++tri;
    }
  }
  EXPECT_EQ(tri, 9u);
  EXPECT_EQ(join, 3u);
}

TEST(Graph, SgLevelOne) {
  const auto g = to_metric_graph(build_model(Variant::sg(), 1), 1);
  EXPECT_EQ(g.node_count(), 6u);
  EXPECT_EQ(g.arcs().size(), 9u);
  for (const auto& a : g.arcs()) EXPECT_DOUBLE_EQ(a.weight, 0.5);
}

TEST(Graph, InteriorCornerDegree) {
  const auto g = stretched_graph(2);
  // F_1 F_3 (p_1) is a level-2 corner joined to the generation-1 edge inside cell 1
  const Vec2 x = compose_word(Variant::stretched(0.2), Word::parse("1"))(generator_map(Variant::stretched(0.2), 4)(corner(3)));
  const auto id = g.find(x, 1e-12);
  ASSERT_TRUE(id.has_value());
  EXPECT_EQ(g.degree(*id), 3u);
  // the outer corners only see their two triangle arcs
  EXPECT_EQ(g.degree(*g.find(corner(1), 1e-12)), 2u);
}

TEST(Graph, WeightsAreEuclidean) {
  const auto g = stretched_graph(3);
  for (const auto& a : g.arcs()) EXPECT_NEAR(a.weight, (g.node(a.u) - g.node(a.v)).norm(), 1e-14);
}

TEST(Graph, Errors) {
  EXPECT_THROW(to_metric_graph(build_model(Variant::harmonic(), 1), 1), std::invalid_argument);
  EXPECT_THROW(to_metric_graph(build_model(Variant::sg(), 1), 2), std::invalid_argument);
}

TEST(Geodesic, BottomEdge) {
  for (int n = 1; n <= 6; ++n) {
    const auto r = geodesic(build_model(Variant::stretched(0.2), n), corner(1), corner(3), n);
    EXPECT_NEAR(r.distance, 1.0, 1e-12);
    EXPECT_EQ(r.level, n);
    EXPECT_EQ(r.error_bar, 0.0);
  }
}

TEST(Geodesic, ToFirstCellCorner) {
  const auto r = geodesic(build_model(Variant::stretched(0.2), 3), corner(1), Vec2{0.4, 0.0}, 3);
  EXPECT_NEAR(r.distance, 0.4, 1e-12);
}

TEST(Geodesic, Self) {
  const auto g = stretched_graph(2);
  const auto r = geodesic(g, corner(2), corner(2));
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.path.size(), 1u);
}

TEST(Geodesic, PathIsConsistent) {
  const auto g = stretched_graph(3);
  const auto r = geodesic(g, corner(2), corner(3));
  double sum = 0.0;
  for (std::size_t i = 1; i < r.path.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a : g.incident(r.path[i - 1])) {
      const auto& arc = g.arcs()[a];
      if ((arc.u == r.path[i] || arc.v == r.path[i])) best = std::min(best, arc.weight);
    }
    ASSERT_TRUE(std::isfinite(best));
    sum += best;
  }
  EXPECT_NEAR(sum, r.distance, 1e-13);
  EXPECT_NEAR(r.distance, 1.0, 1e-12);
}

TEST(Geodesic, MatchesFloyd) {
  const auto g = stretched_graph(2);
  const auto d = all_pairs(g);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    const auto sp = dijkstra(g, i);
    for (std::size_t j = 0; j < g.node_count(); ++j) EXPECT_NEAR(sp.dist[j], d[i][j], 1e-13);
  }
}

TEST(Geodesic, MetricAxioms) {
  const auto g = stretched_graph(3);
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::size_t> pick(0, g.node_count() - 1);
  for (int i = 0; i < 50; ++i) {
    const std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
    const auto da = dijkstra(g, a).dist, db = dijkstra(g, b).dist;
    EXPECT_NEAR(da[b], db[a], 1e-12);
    EXPECT_LE(da[c], da[b] + db[c] + 1e-12);
    EXPECT_EQ(da[b] == 0.0, a == b);
    EXPECT_GE(da[b] + 1e-12, (g.node(a) - g.node(b)).norm());
  }
}

TEST(Geodesic, LevelStable) {
  const Variant v = Variant::stretched(0.2);
  const auto base = to_metric_graph(build_model(v, 2), 2);
  std::vector<MetricGraph> finer;
  for (int n = 3; n <= 5; ++n) finer.push_back(to_metric_graph(build_model(v, n), n));
  for (std::size_t i = 0; i < base.node_count(); ++i) {
    const auto d2 = dijkstra(base, i).dist;
    for (const auto& g : finer) {
      const auto src = g.find(base.node(i), 1e-12);
      ASSERT_TRUE(src);
      const auto dn = dijkstra(g, *src).dist;
      for (std::size_t j = 0; j < base.node_count(); ++j) {
        const auto dst = g.find(base.node(j), 1e-12);
        ASSERT_TRUE(dst);
        EXPECT_NEAR(dn[*dst], d2[j], 1e-12);
      }
    }
  }
}

TEST(Geodesic, SgBottomEdge) {
  for (int n = 0; n <= 5; ++n)
    EXPECT_NEAR(geodesic(build_model(Variant::sg(), n), corner(1), corner(3), n).distance, 1.0, 1e-12);
}

TEST(Geodesic, SplitsJoiningEdges) {
  const Variant v = Variant::stretched(0.2);
  const auto e = base_joining_edges(v)[1];  // horizontal edge on the base
  const Vec2 mid = (e[0] + e[1]) / 2.0;
  const auto g = stretched_graph(3);
  const auto r = geodesic(g, corner(1), mid);
  EXPECT_NEAR(r.distance, 0.5, 1e-12);
  EXPECT_EQ(r.error_bar, 0.0);
  // both points on the same joining edge
  const Vec2 a = e[0] + 0.25 * (e[1] - e[0]), b = e[0] + 0.75 * (e[1] - e[0]);
  EXPECT_NEAR(geodesic(g, a, b).distance, 0.1, 1e-12);
}

TEST(Geodesic, SnapsTriangleInterior) {
  const auto g = stretched_graph(2);
  const Vec2 x{0.05, 0.0};  // inside the first level-2 bottom edge of length 0.16
  const auto r = geodesic(g, corner(1), x);
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_NEAR(r.error_bar, 0.16, 1e-12);
}

TEST(Geodesic, OffStructure) {
  const auto g = stretched_graph(2);
  EXPECT_THROW(geodesic(g, corner(1), Vec2{0.5, 0.3}), std::invalid_argument);
}

TEST(Lipschitz, WitnessPasses) {
  const auto m = build_model(Variant::stretched(0.2), 3);
  const auto rep = lipschitz_witness_check(m, corner(1), 3);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.witnesses, 20u);
  EXPECT_EQ(rep.violations, 0u);
  EXPECT_NEAR(rep.max_excess, 0.0, 1e-12);  // some arc is tight
}

TEST(Lipschitz, ConstantAndScaled) {
  const auto g = stretched_graph(3);
  const auto q = *g.find(corner(1), 1e-12);
  const auto zero = check_lipschitz(g, std::vector<double>(g.node_count(), 0.0));
  EXPECT_EQ(zero.violations, 0u);
  auto f = dijkstra(g, q).dist;
  for (double& v : f) v *= 2.0;
  EXPECT_GT(check_lipschitz(g, f).violations, 0u);
}
