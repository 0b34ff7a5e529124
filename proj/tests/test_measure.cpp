#include "gasket/measure.hpp"

#include <gtest/gtest.h>

using namespace gasket;
using namespace gasket::measure;

namespace {

const std::vector<std::string> kPolys{"1", "x", "y", "x^2", "x*y", "x^3 - 2*y^2 + 0.5"};

TestFunction fn(const std::string& text) { return from_expr(expr::parse(text)); }

}  // namespace

TEST(Samples, CountsAndWeights) {
  for (int n = 0; n <= 5; ++n) {
    const auto s = sg_midpoints(n);
    EXPECT_EQ(s.points.size(), pow3(n + 1));
    EXPECT_NEAR(s.total_weight(), 1.0, 1e-14);
    EXPECT_EQ(harmonic_midpoints(n).points.size(), pow3(n + 1));
  }
  for (int n = 1; n <= 6; ++n) {
    const auto s = stretched_joining(0.2, n);
    EXPECT_EQ(s.points.size(), 2 * pow3(n));
    EXPECT_NEAR(s.total_weight(), 1.0, 1e-14);
  }
  EXPECT_THROW(stretched_joining(0.2, 0), std::invalid_argument);
}

TEST(Psi, AlphaOfOne) {
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(psi_alpha(0.2, n, fn("1")), 1.0, 1e-14);
}

TEST(Psi, SgSymmetry) {
  EXPECT_NEAR(psi_sg(0, fn("x")), 0.5, 1e-15);
  for (int n = 1; n <= 5; ++n) EXPECT_NEAR(psi_sg(n, fn("x")), 0.5, 1e-14);
}

TEST(Psi, AlphaSymmetry) {
  for (int n = 1; n <= 6; ++n) EXPECT_NEAR(psi_alpha(0.2, n, fn("x")), 0.5, 1e-14);
}

TEST(Psi, PushforwardConsistency) {
  const std::vector<std::string> fs{"1", "x", "y - z", "x*y + z^2", "x^2 - 3*y*z"};
  for (const auto& f : fs)
    for (int n = 0; n <= 4; ++n) EXPECT_NEAR(psi_harmonic(n, fn(f)), psi_sg_of_phi(n, fn(f)), 1e-10) << f << " " << n;
}

TEST(SelfAffinity, ExactForAllFamilies) {
  for (const auto& f : kPolys) {
    for (int n = 0; n <= 5; ++n) {
      EXPECT_LE(self_affinity_residual(Family::Sg, n, fn(f)), 1e-12);
      EXPECT_LE(self_affinity_residual(Family::Harmonic, n, fn(f)), 1e-12);
      if (n >= 1) EXPECT_LE(self_affinity_residual(Family::Stretched, n, fn(f), 0.2), 1e-12);
    }
  }
  EXPECT_LE(self_affinity_residual(Family::Sg, 1, fn("1")), 1e-15);
}

TEST(Psi, CauchyDecay) {
  for (const std::string f : {"x", "y", "x^2", "x*y"}) {
    std::vector<double> v;
    for (int n = 1; n <= 8; ++n) v.push_back(psi_alpha(0.2, n, fn(f)));
    for (std::size_t i = 3; i + 1 < v.size(); ++i) {
      const double d0 = std::abs(v[i] - v[i - 1]), d1 = std::abs(v[i + 1] - v[i]);
      if (d0 > 1e-14) EXPECT_LE(d1, d0 / 2.0) << f << " level " << i + 1;
    }
  }
}

TEST(Dixmier, OneIsTheConstant) {
  for (double a : {0.1, 0.2, 0.3}) {
    const auto r = dixmier_functional(a, expr::parse("1"));
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value / spectrum::dixmier_constant(a) - 1.0, 0.0, 1e-3);
  }
}

TEST(Dixmier, MatchesResidueOfTheSpectrum) {
  const double a = 0.2;
  const auto f1 = dixmier_functional(a, expr::parse("1"));
  const auto spec = spectrum::residue_estimate(spectrum::LengthSpectrum::stretched(a), spectrum::stretched_dimension(a));
  EXPECT_NEAR(f1.value / spec.value - 1.0, 0.0, 1e-10);
}

TEST(Dixmier, ZeroAndLinearity) {
  EXPECT_NEAR(dixmier_functional(0.2, expr::parse("0")).value, 0.0, 1e-12);
  const double a = dixmier_functional(0.2, expr::parse("x")).value;
  const double b = dixmier_functional(0.2, expr::parse("y")).value;
  const double c = dixmier_functional(0.2, expr::parse("2*x - 3*y")).value;
  EXPECT_NEAR(c, 2 * a - 3 * b, 1e-9 * std::abs(c));
}

TEST(Dixmier, RatiosMatchPsiLimit) {
  const double one = dixmier_functional(0.2, expr::parse("1")).value;
  for (const std::string f : {"x", "y", "x^2", "x*y"}) {
    const double ratio = dixmier_functional(0.2, expr::parse(f)).value / one;
    EXPECT_NEAR(ratio, psi_alpha(0.2, 10, fn(f)), 1e-2) << f;
  }
  EXPECT_NEAR(dixmier_functional(0.2, expr::parse("x")).value / one, 0.5, 1e-9);
}

TEST(Dixmier, NonPolynomialFallback) {
  const double one = dixmier_functional(0.2, expr::parse("1")).value;
  const auto e = expr::parse("1/(1 + x)");
  const double ratio = dixmier_functional(0.2, e).value / one;
  EXPECT_NEAR(ratio, psi_alpha(0.2, 10, from_expr(e)), 1e-4);
}

TEST(Spread, LengthOne) {
  const auto r = hausdorff_vs_selfaffine(1.5, 1);
  EXPECT_NEAR(r.ratio, 1.0, 1e-12);
  EXPECT_NEAR(r.min, 3.0 * std::pow(0.6, 1.5), 1e-12);
}

TEST(Spread, LengthTwo) {
  const auto r = hausdorff_vs_selfaffine(1.5, 2);
  EXPECT_NEAR(r.max, 9.0 * std::pow(9.0 / 25.0, 1.5), 1e-12);
  EXPECT_GT(r.ratio, 1.0);
}

TEST(Spread, Nondecreasing) {
  double prev = 0.0;
  for (int l = 1; l <= 6; ++l) {
    const auto r = hausdorff_vs_selfaffine(1.5, l);
    EXPECT_GE(r.ratio, prev);
    EXPECT_DOUBLE_EQ(r.mu_mass_min, 1.0);
    EXPECT_DOUBLE_EQ(r.mu_mass_max, 1.0);
    prev = r.ratio;
  }
  EXPECT_GT(prev, 1.0);
  EXPECT_THROW(hausdorff_vs_selfaffine(0.0, 2), std::invalid_argument);
  EXPECT_THROW(hausdorff_vs_selfaffine(1.0, 9), std::invalid_argument);
}
