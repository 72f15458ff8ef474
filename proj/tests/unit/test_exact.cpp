#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "silo/exact/similarity_exact.hpp"

using namespace silo;

namespace {

Source1D random_source(std::mt19937& rng, double L) {
  std::uniform_real_distribution<double> pos(0.0, L), w(0.0, 2.0);
  Source1D f;
  for (int k = 0; k < 3; ++k) {
    double a = pos(rng), b = pos(rng);
    if (a > b) std::swap(a, b);
    f.add_patch(a, b, w(rng));
  }
  f.add_atom(pos(rng), w(rng));
  return f;
}

}  // namespace

TEST(GFunction, ConstantSourceIsFlat) {
  const Source1D f = Source1D::constant(3.0, 2.0);
  for (double x : {0.0, 0.3, 1.0, 1.7, 2.0}) EXPECT_NEAR(g_function(f, 2.0, x), 0.0, 1e-14);
}

TEST(GFunction, CentredAtom) {
  const Source1D f = Source1D{}.add_atom(0.5, 1.0);
  EXPECT_DOUBLE_EQ(g_function(f, 1.0, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(g_function(f, 1.0, 0.5), 0.5);
  EXPECT_NEAR(g_function(f, 1.0, 0.75), -0.25, 1e-15);
}

TEST(GFunction, BoundaryPatch) {
  EXPECT_NEAR(g_function(Source1D{}.add_patch(0.9, 1.0, 1.0), 1.0, 0.9), 0.09, 1e-15);
}

TEST(GFunction, RejectsPointsOutsideDomain) {
  EXPECT_THROW(g_function(Source1D::constant(1, 1), 1.0, 1.5), InvalidInput);
}

TEST(GFunction, VanishesAtBothWalls) {
  std::mt19937 rng(7);
  for (int k = 0; k < 50; ++k) {
    const Source1D f = random_source(rng, 1.7);
    EXPECT_NEAR(g_function(f, 1.7, 0.0), 0.0, 1e-14);
    EXPECT_NEAR(g_function(f, 1.7, 1.7), 0.0, 1e-14);
  }
}

TEST(Similarity1D, ConstantSource) {
  const SimilarityPair s = similarity_1d_exact(Source1D::constant(2.0, 1.0), Grid1D(1.0, 21), Parameters{});
  EXPECT_DOUBLE_EQ(s.c, 2.0);
  for (std::size_t i = 0; i < s.U.size(); ++i) {
    EXPECT_NEAR(s.V[i], 2.0, 1e-14);
    EXPECT_NEAR(s.U[i], 0.0, 1e-14);
  }
}

TEST(Similarity1D, CentredAtomRollingLayer) {
  const Grid1D g(1.0, 101);
  const SimilarityPair s = similarity_1d_exact(Source1D{}.add_atom(0.5, 1.0), g, Parameters{});
  EXPECT_NEAR(s.V[0], 1.0, 1e-14);
  EXPECT_NEAR(s.V[50], 1.5, 1e-14);
  EXPECT_NEAR(s.V[100], 1.0, 1e-14);
}

TEST(Similarity1D, SlopeMatchesDenseSummation) {
  // Independent evaluation: integral of f by left Riemann sums on 1e5 panels
  // (exact for patches aligned with the panels).
  const Source1D f = Source1D{}.add_patch(0.45, 0.55, 1.0);
  const Parameters p;
  const int n = 100000;
  std::vector<double> cum(n + 1, 0.0);
  for (int k = 0; k < n; ++k) {
    const double mid = (k + 0.5) / n;
    cum[k + 1] = cum[k] + ((mid >= 0.45 && mid <= 0.55) ? 1.0 : 0.0) / n;
  }
  const double mass = cum[n];
  const Grid1D g(1.0, 101);
  const NodalField ux = exact_slope_1d(f, g, p);
  double max_formula = 0.0, max_dense = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const int k = static_cast<int>(i) * (n / 100);
    const double G = static_cast<double>(k) / n * mass - cum[k];
    const double dense = G / (mass + std::abs(G));
    EXPECT_NEAR(ux[i], dense, 1e-12);
    max_formula = std::max(max_formula, std::abs(ux[i]));
    max_dense = std::max(max_dense, std::abs(dense));
  }
  EXPECT_NEAR(max_formula, max_dense, 1e-12);
}

TEST(Similarity1D, ZeroMassRejected) {
  EXPECT_THROW(similarity_1d_exact(Source1D{}, Grid1D(1.0, 11), Parameters{}), InvalidInput);
}

TEST(Similarity1D, PropertiesOverRandomSources) {
  std::mt19937 rng(11);
  const Grid1D g(1.3, 131);
  for (int k = 0; k < 30; ++k) {
    const Source1D f = random_source(rng, 1.3);
    const Parameters p(0.5 + k * 0.05, 0.7 + k * 0.03, 1.5 - k * 0.02);
    const SimilarityPair s = similarity_1d_exact(f, g, p);
    const NodalField ux = exact_slope_1d(f, g, p);
    const double floor_v = f.total_mass() / (p.gamma * p.alpha * 1.3);
    EXPECT_NEAR(min_value(s.U), 0.0, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_LE(std::abs(ux[i]), p.alpha);
      EXPECT_GE(s.V[i], floor_v - 1e-14);
    }
    // Scaling the source scales V and leaves U_x unchanged.
    const SimilarityPair s3 = similarity_1d_exact(f.scaled(3.0), g, p);
    const NodalField ux3 = exact_slope_1d(f.scaled(3.0), g, p);
    for (std::size_t i = 0; i < g.size(); ++i) {
      EXPECT_NEAR(s3.V[i], 3.0 * s.V[i], 1e-12 * (1 + s.V[i]));
      EXPECT_NEAR(ux3[i], ux[i], 1e-12);
    }
    // V[f; alpha] = V[f; 1] / alpha.
    const SimilarityPair s1 = similarity_1d_exact(f, g, Parameters(1.0, p.beta, p.gamma));
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(s.V[i], s1.V[i] / p.alpha, 1e-12 * s1.V[i]);
  }
}

TEST(Example1, LogarithmicProfile) {
  const Grid1D g(1.0, 101);
  const SimilarityPair s = example1_exact(g, Parameters{});
  EXPECT_NEAR(s.U[50], 0.5 - std::log(1.5), 1e-15);
  EXPECT_NEAR(s.U[50], 0.0945348918, 1e-10);
  EXPECT_NEAR(s.V[50], 1.5, 1e-15);
  EXPECT_EQ(s.U[0], 0.0);
  EXPECT_NEAR(s.U[100], 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.c, 1.0);
}

TEST(Example1, AgreesWithGeneralFormula) {
  // The general formula integrates U_x = G/(1 + |G|) by the trapezoid rule;
  // for the centred atom that is x/(1+x), whose integral is Example 1.
  const Grid1D g(1.0, 401);
  const SimilarityPair a = example1_exact(g, Parameters{});
  const SimilarityPair b = similarity_1d_exact(Source1D{}.add_atom(0.5, 1.0), g, Parameters{});
  EXPECT_LT(sup_distance(a.U, b.U), 1e-5);
  EXPECT_LT(sup_distance(a.V, b.V), 1e-14);
}

TEST(Example2, PointValues) {
  const Parameters p;
  const RadialProfile r = example2_radial(1.0, p, 1.0, {0.5, 1.0});
  EXPECT_NEAR(r.V[0], 1.75, 1e-15);
  EXPECT_NEAR(r.Ur[0], -3.0 / 7.0, 1e-15);
  EXPECT_NEAR(r.V[1], 1.0, 1e-15);
  EXPECT_EQ(r.Ur[1], 0.0);
}

TEST(Example2, ShapeAndIntegration) {
  const Parameters p;
  std::vector<double> radii;
  for (int k = 1; k <= 400; ++k) radii.push_back(k / 400.0);
  const RadialProfile r = example2_radial(1.0, p, 0.3, radii);
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    EXPECT_GT(r.V[k], r.V[k + 1]);
    EXPECT_LE(r.Ur[k], 0.0);
  }
  EXPECT_EQ(r.U.back(), 0.0);
  // U(1/2) = Int_{1/2}^{1} -U_r by fine midpoint quadrature.
  double ref = 0.0;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const double s = 0.5 + (k + 0.5) * 0.5 / n;
    ref += (1 - s * s) / (1 - s * s + 2 * s) * 0.5 / n;
  }
  EXPECT_NEAR(r.U[199], ref, 1e-5);
}

TEST(Example2, RejectsOrigin) {
  EXPECT_THROW(example2_radial(1.0, Parameters{}, 1.0, {0.0, 0.5}), InvalidInput);
  EXPECT_THROW(example2_radial(1.0, Parameters{}, 1.0, {1.5}), InvalidInput);
}
