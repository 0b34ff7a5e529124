#include "gasket/harmonic.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace gasket;
using namespace gasket::harmonic;

namespace {

VertexFunction boundary(double a, double b, double c) {
  const SgMesh m = SgMesh::build(0);
  VertexFunction f{0, std::vector<double>(3)};
  f.values[m.require(corner(1))] = a;
  f.values[m.require(corner(2))] = b;
  f.values[m.require(corner(3))] = c;
  return f;
}

double at(const VertexFunction& f, const Vec2& x) { return f.values[SgMesh::build(f.level).require(x)]; }

}  // namespace

TEST(Energy, BoundaryExample) {
  EXPECT_DOUBLE_EQ(energy(boundary(1, 0, 0)), 2.0);
  EXPECT_DOUBLE_EQ(energy(boundary(0.3, 0.3, 0.3)), 0.0);
}

TEST(Energy, ConstantOnFineLevel) {
  VertexFunction f{3, std::vector<double>(SgMesh::build(3).vertex_count(), 4.2)};
  EXPECT_DOUBLE_EQ(energy(f), 0.0);
}

TEST(Energy, CountsEachEdgeOnce) {
  // indicator of one interior vertex of V_1 touches four edges
  const SgMesh m = SgMesh::build(1);
  VertexFunction f{1, std::vector<double>(m.vertex_count(), 0.0)};
  f.values[m.require((corner(1) + corner(2)) / 2.0)] = 1.0;
  EXPECT_DOUBLE_EQ(energy(f), 4.0);
}

TEST(Energy, WrongSize) {
  VertexFunction f{1, {1.0, 2.0}};
  EXPECT_THROW(energy(f), std::invalid_argument);
}

TEST(HarmonicExtend, MidpointValues) {
  const auto g = harmonic_extend(boundary(1, 0, 0));
  const Vec2 m12 = (corner(1) + corner(2)) / 2.0, m13 = (corner(1) + corner(3)) / 2.0,
             m23 = (corner(2) + corner(3)) / 2.0;
  EXPECT_NEAR(at(g, m12), 0.4, 1e-15);
  EXPECT_NEAR(at(g, m13), 0.4, 1e-15);
  EXPECT_NEAR(at(g, m23), 0.2, 1e-15);
  const auto o = oracle::min_energy_midpoints(1, 0, 0);
  EXPECT_NEAR(o[0], 0.4, 1e-12);
  EXPECT_NEAR(o[1], 0.4, 1e-12);
  EXPECT_NEAR(o[2], 0.2, 1e-12);
  EXPECT_NEAR(energy(g), 6.0 / 5.0, 1e-14);
}

TEST(HarmonicExtend, ConstantsAreHarmonic) {
  const auto g = harmonic_extend(boundary(2.5, 2.5, 2.5));
  for (double v : g.values) EXPECT_DOUBLE_EQ(v, 2.5);
}

TEST(HarmonicExtend, MatchesMinimisationOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec2 m12 = (corner(1) + corner(2)) / 2.0, m13 = (corner(1) + corner(3)) / 2.0,
             m23 = (corner(2) + corner(3)) / 2.0;
  for (int i = 0; i < 100; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const auto g = harmonic_extend(boundary(a, b, c));
    const auto o = oracle::min_energy_midpoints(a, b, c);
    EXPECT_NEAR(at(g, m12), o[0], 1e-10);
    EXPECT_NEAR(at(g, m13), o[1], 1e-10);
    EXPECT_NEAR(at(g, m23), o[2], 1e-10);
  }
}

TEST(HarmonicExtend, Linear) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::size_t n = SgMesh::build(2).vertex_count();
  VertexFunction f{2, {}}, g{2, {}}, h{2, {}};
  for (std::size_t i = 0; i < n; ++i) {
    f.values.push_back(u(rng));
    g.values.push_back(u(rng));
    h.values.push_back(2.0 * f.values.back() - 3.0 * g.values.back());
  }
  const auto ef = harmonic_extend(f), eg = harmonic_extend(g), eh = harmonic_extend(h);
  for (std::size_t i = 0; i < eh.values.size(); ++i)
    EXPECT_NEAR(eh.values[i], 2.0 * ef.values[i] - 3.0 * eg.values[i], 1e-12);
}

TEST(RenormalizedEnergy, InvariantUnderExtension) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  VertexFunction f = boundary(u(rng), u(rng), u(rng));
  const double e0 = renormalized_energy(f);
  for (int n = 0; n <= 5; ++n) {
    const auto g = harmonic_extend(f);
    EXPECT_NEAR(energy(f), 5.0 / 3.0 * energy(g), 1e-10);
    EXPECT_NEAR(renormalized_energy(g), e0, 1e-10);
    f = g;
  }
}

TEST(RenormalizedEnergy, Examples) {
  EXPECT_DOUBLE_EQ(renormalized_energy(boundary(1, 0, 0)), 2.0);
  EXPECT_NEAR(renormalized_energy(harmonic_extend(boundary(1, 0, 0))), 2.0, 1e-14);
  auto g = harmonic_extend(boundary(1, 0, 0));
  const SgMesh m = SgMesh::build(1);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const Vec2& x = m.point(i);
    if ((x - corner(1)).norm() > 1e-12 && (x - corner(2)).norm() > 1e-12 && (x - corner(3)).norm() > 1e-12)
      g.values[i] = 0.0;
  }
  EXPECT_GT(renormalized_energy(g), 2.0);
}

TEST(Structure, Projection) {
  const auto& s = structure();
  EXPECT_NEAR((s.projection * s.projection - s.projection).norm(), 0.0, 1e-15);
  EXPECT_NEAR((s.projection.transpose() - s.projection).norm(), 0.0, 1e-15);
  EXPECT_NEAR((s.projection * Vec3::Ones()).norm(), 0.0, 1e-15);
  for (int j = 0; j < 3; ++j) {
    EXPECT_NEAR(s.q[j].norm(), 1.0, 1e-15);
    EXPECT_NEAR(s.q_perp[j].norm(), 1.0, 1e-15);
    EXPECT_NEAR(s.q[j].dot(s.q_perp[j]), 0.0, 1e-15);
    EXPECT_NEAR(s.q_perp[j].sum(), 0.0, 1e-15);
    EXPECT_NEAR((s.m[j] * s.q[j] - 0.6 * s.q[j]).norm(), 0.0, 1e-15);
    EXPECT_NEAR((s.m[j] * s.q_perp[j] - 0.2 * s.q_perp[j]).norm(), 0.0, 1e-15);
    EXPECT_NEAR((s.h[j](s.q[j]) - s.q[j]).norm(), 0.0, 1e-15);
  }
}

TEST(Phi, Corners) {
  const auto& s = structure();
  for (int j = 1; j <= 3; ++j) EXPECT_NEAR((phi(corner(j), 0) - s.q[j - 1]).norm(), 0.0, 1e-15);
  // Φ(p_1) = (2, -1, -1)/√6
  const Vec3 p1 = phi(corner(1), 2);
  EXPECT_NEAR(p1[0], 2.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(p1[1], -1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(p1[2], -1.0 / std::sqrt(6.0), 1e-15);
}

TEST(Phi, Midpoint) {
  const Vec3 m = phi((corner(1) + corner(2)) / 2.0, 1);
  const double k = std::sqrt(1.5);
  EXPECT_NEAR(m[0], k * (0.4 - 1.0 / 3.0), 1e-15);
  EXPECT_NEAR(m[1], k * (0.4 - 1.0 / 3.0), 1e-15);
  EXPECT_NEAR(m[2], k * (0.2 - 1.0 / 3.0), 1e-15);
}

TEST(Phi, LiesInPlane) {
  const HarmonicCoordinates c(5);
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, c.values().size() - 1);
  for (int i = 0; i < 50; ++i) {
    const std::size_t k = pick(rng);
    EXPECT_NEAR(c.values()[k].sum(), 0.0, 1e-14);
    EXPECT_NEAR(c.harmonic_values(k).sum(), 1.0, 1e-14);
  }
}

TEST(Phi, NotAVertex) { EXPECT_THROW(phi(Vec2{0.3, 0.1}, 2), std::invalid_argument); }

TEST(Phi, Commutation) {
  const HarmonicCoordinates c(3), fine(6);
  for (int len = 0; len <= 3; ++len) {
    for (const auto& w : Word::all_of_length(len)) {
      const auto f = compose_word(Variant::sg(), w);
      const auto h = compose_h(w);
      for (std::size_t i = 0; i < c.values().size(); ++i) {
        const Vec2 y = f(c.mesh().point(i));
        EXPECT_NEAR((fine.at(y) - h(c.values()[i])).norm(), 0.0, 1e-9);
      }
    }
  }
}

TEST(WordNorm, SingleAndPowers) {
  EXPECT_NEAR(m_word_norm(Word::parse("1")), 0.6, 1e-15);
  EXPECT_NEAR(m_word_norm(Word::parse("11")), 9.0 / 25.0, 1e-15);
  EXPECT_NEAR(m_word_norm(Word{}), 1.0, 0.0);
  const double mixed = m_word_norm(Word::parse("12"));
  EXPECT_NEAR(mixed, oracle::product_norm({1, 2}), 1e-14);
  EXPECT_GT(std::abs(mixed - 9.0 / 25.0), 1e-3);
}

TEST(WordNorm, Bound) {
  for (int len = 1; len <= 5; ++len) {
    const double bound = std::pow(0.6, len);
    for (const auto& w : Word::all_of_length(len)) {
      const double n = m_word_norm(w);
      std::vector<int> letters(w.letters().begin(), w.letters().end());
      EXPECT_NEAR(n, oracle::product_norm(letters), 1e-14);
      bool constant = true;
      for (std::size_t i = 1; i < w.size(); ++i) constant = constant && w[i] == w[0];
      if (constant) EXPECT_NEAR(n, bound, 1e-14);
      else EXPECT_LT(n, bound - 1e-12);
    }
  }
}

TEST(WordNorm, SignChoice) {
  const auto flipped = HarmonicStructure::build(true);
  for (int len = 1; len <= 4; ++len)
    for (const auto& w : Word::all_of_length(len)) EXPECT_NEAR(m_word_norm(w), m_word_norm(w, flipped), 1e-12);
  for (int j = 0; j < 3; ++j) EXPECT_NEAR((flipped.m[j] - structure().m[j]).norm(), 0.0, 1e-15);
}

TEST(WordNorm, PlaneProducts) {
  const auto prods = m_word_products(3);
  const auto words = Word::all_of_length(3);
  ASSERT_EQ(prods.size(), words.size());
  for (std::size_t i = 0; i < words.size(); ++i) EXPECT_NEAR(spectral_norm(prods[i]), m_word_norm(words[i]), 1e-14);
}

TEST(HMap, Range) {
  EXPECT_THROW(h_map(0), std::out_of_range);
  EXPECT_THROW(h_map(4), std::out_of_range);
}

TEST(EdgeLength, BottomEdgeDepthOne) {
  const HarmonicCoordinates c(1);
  const auto skel = build_model(Variant::harmonic(), 0);
  const auto& bottom = skel.edges[0];  // p_1 -> p_3
  const auto est = estimate_edge_length(c, bottom, 1);
  const Vec3 a = c.at(corner(1)), m = c.at((corner(1) + corner(3)) / 2.0), b = c.at(corner(3));
  EXPECT_NEAR(est.lower, (m - a).norm() + (b - m).norm(), 1e-15);
  EXPECT_GE(est.upper(), est.lower);
}

TEST(EdgeLength, Monotone) {
  const HarmonicCoordinates c(9);
  const auto skel = build_model(Variant::harmonic(), 2);
  for (const auto& e : skel.edges) {
    double prev_lo = 0.0, prev_hi = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 6; ++k) {
      const auto est = estimate_edge_length(c, e, k);
      EXPECT_GE(est.lower, prev_lo - 1e-14);
      EXPECT_LE(est.upper(), prev_hi + 1e-12);
      EXPECT_LE(est.lower, est.upper());
      prev_lo = est.lower;
      prev_hi = est.upper();
    }
  }
}

TEST(EdgeLength, Envelope) {
  // image of T has diameter √3 (side of the triangle q_1 q_2 q_3)
  const double c0 = std::sqrt(3.0);
  for (int m = 0; m <= 4; ++m) {
    const auto realized = realize_model(build_model(Variant::harmonic(), m), 4);
    for (const auto& e : realized.edges) {
      ASSERT_TRUE(e.length_lo && e.length_hi);
      EXPECT_LE(*e.length_lo, *e.length_hi);
      EXPECT_LE(*e.length_lo, 2.0 * c0 * std::pow(0.6, m) + 1e-12);
      EXPECT_NEAR(e.p.sum(), 0.0, 1e-14);
    }
    EXPECT_EQ(realized.dim(), 3);
  }
}

TEST(EdgeLength, Errors) {
  const HarmonicCoordinates c(2);
  const auto skel = build_model(Variant::harmonic(), 1);
  EXPECT_THROW(estimate_edge_length(c, skel.edges[0], 0), std::invalid_argument);
  EXPECT_THROW(estimate_edge_length(c, skel.edges[0], 2), std::invalid_argument);
  EXPECT_THROW(estimate_edge_length(c, skel.edges[0], 21), ResourceError);
  EXPECT_THROW(HarmonicCoordinates(13), ResourceError);
}
