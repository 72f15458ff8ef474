#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "silo/discrete/similarity_discrete.hpp"
#include "silo/exact/similarity_exact.hpp"

using namespace silo;

namespace {

NodalField transposed(const NodalField& f, const Grid2D& g) {
  NodalField out(f.size());
  for (std::size_t j = 0; j < g.ny(); ++j)
    for (std::size_t i = 0; i < g.nx(); ++i) out[g.index(j, i)] = f[g.index(i, j)];
  return out;
}

NodalField rotated(const NodalField& f) { return NodalField(f.rbegin(), f.rend()); }

}  // namespace

TEST(DiscreteMeanRate, Examples) {
  EXPECT_NEAR(discrete_mean_rate(Source1D::constant(1.5, 1.0), Grid1D(1.0, 11)), 1.5, 1e-14);
  const CourantMesh mesh(Grid2D::unit_square(17));
  EXPECT_NEAR(discrete_mean_rate(Source2D{}.add_atom(0.31, 0.62, 1.0), mesh), 1.0, 1e-14);
  EXPECT_NEAR(discrete_mean_rate(Source2D{}.add_rect(0.45, 0.55, 0.45, 0.55, 1.0), mesh), 0.01, 1e-14);
}

TEST(Stiffness, CourantMatrixIsFivePointLaplacian) {
  const Grid2D g = Grid2D::unit_square(6);
  const CourantMesh mesh(g);
  const CsrMatrix A = assemble_stiffness(mesh, ElementScalar(mesh.element_count(), 1.0));
  const std::size_t k = g.index(2, 3);
  EXPECT_NEAR(A.at(k, k), 4.0, 1e-13);
  EXPECT_NEAR(A.at(k, g.index(1, 3)), -1.0, 1e-13);
  EXPECT_NEAR(A.at(k, g.index(2, 4)), -1.0, 1e-13);
  EXPECT_NEAR(A.at(k, g.index(3, 4)), 0.0, 1e-13);
  std::vector<double> ones(g.size(), 1.0);
  for (double r : A * ones) EXPECT_NEAR(r, 0.0, 1e-12);
}

TEST(ProjectedCg, SolvesSingularSystemAndReportsFailure) {
  const Grid1D g(1.0, 6);
  const CsrMatrix A = assemble_stiffness(g, ElementScalar(g.intervals(), 1.0));
  const std::vector<double> b = {1, -2, 0.5, 0.5, 1, -1};
  const CgResult r = projected_cg(A, b, {});
  EXPECT_LE(r.relative_residual, 1e-10);
  const auto Ax = A * r.x;
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(Ax[i], b[i], 1e-9);
  EXPECT_NEAR(std::accumulate(r.x.begin(), r.x.end(), 0.0), 0.0, 1e-12);
  EXPECT_THROW(projected_cg(A, b, {}, CgOptions{1e-10, 0}), SolverError);
}

TEST(SolvePotential, ConstantSourceGivesZero) {
  const auto s = solve_potential(Source1D::constant(2.0, 1.0), Grid1D(1.0, 21), Parameters{});
  for (double v : s.psi) EXPECT_EQ(v, 0.0);
  const auto s2 = solve_potential(Source2D::constant(2.0, {1, 1}), CourantMesh(Grid2D::unit_square(9)), Parameters{});
  for (double v : s2.psi) EXPECT_NEAR(v, 0.0, 1e-14);
}

TEST(SolvePotential, AtomFluxMatchesG) {
  const Source1D f = Source1D{}.add_atom(0.5, 1.0);
  for (double h : {0.02, 0.01, 0.005}) {
    const Grid1D g = Grid1D::with_spacing(1.0, h);
    const auto s = solve_potential(f, g, Parameters{});
    EXPECT_LE(s.residual_norm, 1e-10);
    const auto w = flux_from_potential(s.psi, g);
    double err = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      const double mid = 0.5 * (g.x(k) + g.x(k + 1));
      err = std::max(err, std::abs(w[k] - g_function(f, 1.0, mid)));
    }
    EXPECT_LE(err, h);
  }
}

TEST(SolvePotential, WeightedMeanIsZeroAndGuessInvariant) {
  const Source1D f = Source1D{}.add_patch(0.1, 0.3, 2.0).add_atom(0.8, 0.5);
  const Grid1D g(1.0, 81);
  const auto a = solve_potential(f, g, Parameters{});
  const auto m = lumped_mass(g);
  double mean = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) mean += m[i] * a.psi[i];
  EXPECT_NEAR(mean, 0.0, 1e-14);
  NodalField guess(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) guess[i] = std::sin(7.0 * g.x(i));
  NodalField shifted = guess;
  for (double& v : shifted) v += 42.0;
  const auto b = solve_potential(f, g, Parameters{}, {}, guess);
  const auto c = solve_potential(f, g, Parameters{}, {}, shifted);
  EXPECT_LT(sup_distance(b.psi, c.psi), 1e-9);
  EXPECT_LT(sup_distance(a.psi, c.psi), 1e-9);
}

TEST(NeumannRhs, SumsToZero) {
  const CourantMesh mesh(Grid2D::unit_square(21));
  const Source2D f = Source2D{}.add_disk(0.3, 0.3, 0.1, 1.0).add_rect(0.5, 0.9, 0.6, 0.7, 3.0).add_atom(0.77, 0.21, 0.4);
  const NodalField loads = hat_loads(f, mesh);
  const NodalField mass = lumped_mass(mesh);
  const double c_h = discrete_mean_rate(f, mesh);
  const NodalField rhs = detail::neumann_rhs(loads, mass, c_h, 1.0);
  EXPECT_NEAR(std::accumulate(rhs.begin(), rhs.end(), 0.0), 0.0, 1e-12);
  NodalField bad = loads;
  bad[0] += 1e-3;
  EXPECT_THROW(detail::neumann_rhs(bad, mass, c_h, 1.0), SolverError);
}

TEST(FluxFromPotential, Examples) {
  const Grid1D g(1.0, 11);
  NodalField sq(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) sq[i] = g.x(i) * g.x(i);
  const auto w = flux_from_potential(sq, g);
  for (std::size_t k = 0; k < w.size(); ++k) EXPECT_NEAR(w[k], g.x(k) + g.x(k + 1), 1e-13);
  for (double v : flux_from_potential(NodalField(g.size(), 3.0), g)) EXPECT_EQ(v, 0.0);

  const CourantMesh mesh(Grid2D(2.0, 1.0, 9, 5));
  NodalField lin(mesh.grid().size());
  for (std::size_t n = 0; n < lin.size(); ++n) {
    const Point2 p = mesh.node_point(n);
    lin[n] = -0.5 * p.x + 2.0 * p.y + 7.0;
  }
  for (const Point2& v : flux_from_potential(lin, mesh)) {
    EXPECT_NEAR(v.x, -0.5, 1e-12);
    EXPECT_NEAR(v.y, 2.0, 1e-12);
  }
}

TEST(RollingAndGradient, Examples) {
  const Parameters p;
  EXPECT_EQ(rolling_from_flux(ElementScalar{0.0}, 2.0, p)[0], 2.0);
  EXPECT_EQ(rolling_from_flux(ElementScalar{-0.5}, 1.0, p)[0], 1.5);
  EXPECT_EQ(standing_gradient(ElementScalar{0.0}, ElementScalar{1.0})[0], 0.0);
  EXPECT_THROW(standing_gradient(ElementScalar{1.0}, ElementScalar{0.0}), InvalidInput);
}

TEST(RollingAndGradient, SlopeBoundedAndMonotone) {
  const Parameters p(0.7, 1.3, 0.4);
  ElementScalar w;
  for (double s = 0.0; s < 1e6; s = 2 * s + 0.01) w.push_back(s);
  const auto z = standing_gradient(w, rolling_from_flux(w, 0.2, p));
  for (std::size_t k = 0; k < z.size(); ++k) {
    EXPECT_LE(z[k], p.alpha + 1e-12);
    if (k > 0) EXPECT_GT(z[k], z[k - 1]);
  }
  EXPECT_NEAR(z.back(), p.alpha, 1e-6);
}

TEST(ReconstructU1D, Examples) {
  const Grid1D g(1.0, 11);
  for (double v : reconstruct_u_1d(ElementScalar(10, 0.0), g)) EXPECT_EQ(v, 0.0);
  const auto u = reconstruct_u_1d(ElementScalar(10, -0.3), g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(u[i], 0.3 - 0.3 * g.x(i), 1e-14);
  // The inclusive sum reaches node i one interval early, so the last node
  // repeats its neighbour.
  const auto ui = reconstruct_u_1d(ElementScalar(10, 0.5), g, CumulativeRule::inclusive);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) EXPECT_NEAR(ui[i], 0.5 * g.x(i), 1e-14);
  EXPECT_NEAR(ui.back(), 0.45, 1e-14);
}

TEST(ReconstructU1D, AtomCaseConvergesAtFirstOrder) {
  std::vector<double> errs;
  for (double h : {0.01, 0.005, 0.0025}) {
    const Grid1D g = Grid1D::with_spacing(1.0, h);
    const auto fe = similarity_1d_discrete(Source1D{}.add_atom(0.5, 1.0), g, Parameters{});
    errs.push_back(sup_distance(fe.pair.U, example1_exact(g, Parameters{}).U) / h);
  }
  // Error constant C = err / h is stable under refinement.
  EXPECT_NEAR(errs[1] / errs[0], 1.0, 0.2);
  EXPECT_NEAR(errs[2] / errs[1], 1.0, 0.2);
}

TEST(Pipeline1D, FirstOrderAgainstExact) {
  const Source1D f = Source1D{}.add_patch(0.45, 0.55, 1.0);
  const Parameters p(1.2, 0.8, 1.5);
  double prev_u = 0.0, prev_v = 0.0;
  for (double h : {0.01, 0.005, 0.0025}) {
    const Grid1D g = Grid1D::with_spacing(1.0, h);
    const auto fe = similarity_1d_discrete(f, g, p);
    const auto ex = similarity_1d_exact(f, g, p);
    const double eu = sup_distance(fe.pair.U, ex.U), ev = sup_distance(fe.pair.V, ex.V);
    if (prev_u > 0) {
      EXPECT_GE(prev_u / eu, 1.6);
      EXPECT_LE(prev_u / eu, 2.4);
      EXPECT_GE(prev_v / ev, 1.6);
      EXPECT_LE(prev_v / ev, 2.4);
    }
    prev_u = eu;
    prev_v = ev;
    for (double z : fe.gradient) EXPECT_LE(std::abs(z), p.alpha);
  }
}

TEST(ReconstructU2D, ConstantSourceAndUnitWeights) {
  const Grid2D g = Grid2D::unit_square(17);
  const CourantMesh mesh(g);
  const Parameters p;
  for (double v : reconstruct_u_2d(ElementScalar(mesh.element_count(), 1.0), Source2D::constant(1.0, {1, 1}), mesh, p))
    EXPECT_NEAR(v, 0.0, 1e-14);
  const Source2D f = Source2D{}.add_disk(0.4, 0.6, 0.15, 1.0).add_atom(0.7, 0.2, 0.3);
  const auto psi = solve_potential(f, mesh, p);
  const auto u = reconstruct_u_2d(ElementScalar(mesh.element_count(), 1.0), f, mesh, p);
  EXPECT_LT(sup_distance(u, min_shifted(psi.psi)), 1e-9);
}

TEST(ReconstructU2D, CentralBallKeepsMeshSymmetries) {
  // The diagonal of the Courant mesh is preserved by transposition and by
  // the half turn, not by the other symmetries of the square.
  const Grid2D g = Grid2D::unit_square(33);
  const auto s = similarity_2d_discrete(Source2D{}.add_disk(0.5, 0.5, 0.1, 1.0), g, Parameters{});
  EXPECT_LT(sup_distance(s.pair.U, transposed(s.pair.U, g)), 1e-8);
  EXPECT_LT(sup_distance(s.pair.U, rotated(s.pair.U)), 1e-8);
  EXPECT_LT(sup_distance(s.pair.V, transposed(s.pair.V, g)), 1e-8);
  EXPECT_LT(sup_distance(s.pair.V, rotated(s.pair.V)), 1e-8);
}

TEST(ElementToNode, Examples) {
  const Grid1D g(1.0, 5);
  const auto n = element_to_node(ElementScalar{1.0, 3.0, 5.0, 7.0}, g);
  EXPECT_EQ(n, (NodalField{1.0, 2.0, 4.0, 6.0, 7.0}));
  const CourantMesh mesh(Grid2D::unit_square(5));
  for (double v : element_to_node(ElementScalar(mesh.element_count(), 2.5), mesh)) EXPECT_NEAR(v, 2.5, 1e-15);
}

TEST(Discrete2D, SlopeBoundOnEveryElement) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> pos(0.2, 0.8);
  const Grid2D g = Grid2D::unit_square(17);
  const CourantMesh mesh(g);
  const Parameters p(0.6, 1.4, 0.9);
  for (int k = 0; k < 5; ++k) {
    const Source2D f = Source2D{}.add_disk(pos(rng), pos(rng), 0.15, 1.0).add_atom(pos(rng), pos(rng), 0.2);
    const auto s = similarity_2d_discrete(f, g, p);
    const auto z = standing_gradient(s.flux, s.rolling);
    for (const Point2& v : z) EXPECT_LE(std::hypot(v.x, v.y), p.alpha + 1e-12);
  }
}
