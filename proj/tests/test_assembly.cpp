// Tests for assembly: Dirichlet reduction, Green's-formula consistency of
// the gradient pairing and loads, metric properties, stress moments and the
// finite-difference check of the stress tangent block, and the composite
// tangent layout.

#include <cmath>
#include <random>

#include "doctest.h"
#include "tfe/assembly.hpp"
#include "tfe/material.hpp"
#include "tfe/mesh.hpp"
#include "tfe/space.hpp"

using namespace tfe;

namespace {

Mesh single_triangle() {
  Mesh m;
  m.dim = 2;
  m.vertices.resize(3, 2);
  m.vertices << 0, 0, 1, 0, 0, 1;
  m.cells = {{0, 1, 2}};
  derive_topology(m);
  std::vector<int> all;
  for (int f = 0; f < m.n_facets(); ++f) all.push_back(f);
  m.tags["bnd"] = all;
  return m;
}

}  // namespace

TEST_CASE("dirichlet reduction shrinks, restores, and validates") {
  Mesh sq = structured_square(2);
  FESpace v1 = build_space(sq, Family::LE, 1, 2);
  SpMat A = metric_h1(v1);
  REQUIRE(A.rows() == 18);

  auto cdofs = constrained_dofs(v1, {"gamma1"});
  std::mt19937 rng(7);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd vals(cdofs.size());
  for (int i = 0; i < vals.size(); ++i) vals[i] = g(rng);
  DirichletReduction red = make_reduction(v1.dim(), cdofs, vals);
  CHECK(red.n_free() == 2);

  Eigen::VectorXd b(v1.dim());
  for (int i = 0; i < b.size(); ++i) b[i] = g(rng);
  auto [Aff, bf] = apply_dirichlet(A, b, red);
  CHECK(Aff.rows() == 2);
  CHECK(Aff.cols() == 2);

  // Solve the reduced system and verify the free rows of the full system.
  Eigen::MatrixXd Ad(Aff);
  Eigen::VectorXd xf = Ad.ldlt().solve(bf);
  Eigen::VectorXd x = expand_free(red, xf);
  Eigen::VectorXd resid = A * x - b;
  for (int i : red.free) CHECK(std::abs(resid[i]) < 1e-11);
  for (size_t i = 0; i < red.constrained.size(); ++i)
    CHECK(x[red.constrained[i]] == red.values[i]);
  CHECK((restrict_free(red, x) - xf).norm() < 1e-14);

  // Zero boundary values leave the right-hand side rows untouched.
  DirichletReduction red0 =
      make_reduction(v1.dim(), cdofs, Eigen::VectorXd::Zero(cdofs.size()));
  auto [Aff0, bf0] = apply_dirichlet(A, b, red0);
  CHECK((bf0 - restrict_free(red0, b)).norm() == 0.0);

  // Validation of malformed reductions.
  CHECK_THROWS_AS(make_reduction(10, {3, 3}, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_reduction(10, {11}, Eigen::VectorXd::Zero(1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_reduction(10, {1}, Eigen::VectorXd::Zero(2)),
                  std::invalid_argument);
}

TEST_CASE("Green's formula ties pairing, body, and traction integrals") {
  // On one triangle with P interpolated in the stress space:
  //   <P, grad psi> = -<div P, psi> + boundary (P n) . psi.
  Mesh tri = single_triangle();
  FESpace v1 = build_space(tri, Family::LE, 1, 2);
  FESpace vd = build_space(tri, Family::RT, 1, 2);

  // Rows a_r + c_r x, so div row r = 2 c_r.
  Eigen::Matrix2d a;
  a << 1.2, -0.4, 0.7, 2.0;
  Eigen::Vector2d cc(0.8, -1.5);
  auto Pfield = [&](const Eigen::VectorXd& x) {
    Eigen::MatrixXd P(2, 2);
    for (int r = 0; r < 2; ++r)
      P.row(r) = a.row(r) + cc[r] * x.transpose();
    return P;
  };
  Eigen::VectorXd p = interpolate(vd, Pfield);

  auto divP = [&](const Eigen::VectorXd&) {
    return Eigen::VectorXd(2.0 * cc);
  };
  auto traction = [&](const Eigen::VectorXd& x) {
    Eigen::Vector2d n;
    if (std::abs(x[0]) < 1e-12)
      n = Eigen::Vector2d(-1, 0);
    else if (std::abs(x[1]) < 1e-12)
      n = Eigen::Vector2d(0, -1);
    else
      n = Eigen::Vector2d(1, 1).normalized();
    return Eigen::VectorXd(Pfield(x) * n);
  };

  Eigen::VectorXd lhs = grad_pairing(v1, vd) * p;
  Eigen::VectorXd rhs = traction_load(v1, "bnd", traction) - body_load(v1, divP);
  CHECK((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
}

TEST_CASE("metrics are symmetric positive definite") {
  Mesh sq = structured_square(2);
  FESpace v1 = build_space(sq, Family::LE, 2, 2);
  FESpace vc = build_space(sq, Family::NED2, 1, 2);
  FESpace vd = build_space(sq, Family::BDM, 1, 2);
  for (const SpMat& D : {metric_h1(v1), metric_curl(vc), metric_div(vd)}) {
    Eigen::MatrixXd Dd(D);
    CHECK((Dd - Dd.transpose()).norm() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Dd);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  // Mass matrices of the field spaces are symmetric too.
  SpMat mc = mass_matrix(vc);
  SpMat md = mass_matrix(vd);
  CHECK((Eigen::MatrixXd(mc) - Eigen::MatrixXd(mc).transpose()).norm() < 1e-12);
  CHECK((Eigen::MatrixXd(md) - Eigen::MatrixXd(md).transpose()).norm() < 1e-12);
}

TEST_CASE("curl metric on a constant field reduces to its L2 norm") {
  Mesh sq = structured_square(3);
  FESpace vc = build_space(sq, Family::NED1, 1, 2);
  Eigen::MatrixXd K0(2, 2);
  K0 << 0.3, -1.1, 0.8, 0.5;
  auto constf = [&](const Eigen::VectorXd&) { return K0; };
  Eigen::VectorXd v = interpolate(vc, constf);
  double quad = v.dot(metric_curl(vc) * v);
  CHECK(quad == doctest::Approx(K0.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("uniform coordinate scaling scales the H1 metric as expected") {
  Mesh sq = structured_square(2);
  Mesh big = sq;
  big.vertices *= 2.0;
  FESpace v = build_space(sq, Family::LE, 1, 2);
  FESpace vb = build_space(big, Family::LE, 1, 2);

  // Mass scales with area (x4 in 2D); the gradient part is scale invariant.
  SpMat m = mass_matrix(v), mb = mass_matrix(vb);
  CHECK((Eigen::MatrixXd(mb) - 4.0 * Eigen::MatrixXd(m)).norm() < 1e-12);
  Eigen::MatrixXd g = Eigen::MatrixXd(metric_h1(v)) - Eigen::MatrixXd(m);
  Eigen::MatrixXd gb = Eigen::MatrixXd(metric_h1(vb)) - Eigen::MatrixXd(mb);
  CHECK((gb - g).norm() < 1e-12);
}

TEST_CASE("stress moments of a constant state match the mass-matrix route") {
  Mesh sq = structured_square(2);
  FESpace vc = build_space(sq, Family::NED1, 1, 2);
  FESpace vd = build_space(sq, Family::RT, 1, 2);
  NeoHookean mat(2, 1.3, 0.9);

  Eigen::MatrixXd K0(2, 2);
  K0 << 0.1, -0.2, 0.05, 0.15;
  auto kf = [&](const Eigen::VectorXd&) { return K0; };
  Eigen::VectorXd k = interpolate(vc, kf);

  Eigen::MatrixXd P0 = mat.stress(K0);
  auto pf = [&](const Eigen::VectorXd&) { return P0; };
  Eigen::VectorXd want = mass_matrix(vd) * interpolate(vd, pf);
  Eigen::VectorXd got = stress_moments(vd, vc, k, mat);
  CHECK((got - want).norm() < 1e-12 * (1.0 + want.norm()));
}

TEST_CASE("stress tangent block matches finite differences of the moments") {
  Mesh sq = structured_square(2);
  FESpace vc = build_space(sq, Family::NED1, 1, 2);
  FESpace vd = build_space(sq, Family::RT, 1, 2);
  NeoHookean mat(2, 1.1, 0.8);

  auto kf = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd K(2, 2);
    K << 0.08 * x[1], -0.1 + 0.05 * x[0], 0.12 * x[0] * 0.5, 0.06 * x[0];
    return K;
  };
  Eigen::VectorXd k = interpolate(vc, kf);
  SpMat S = stress_tangent(vd, vc, k, mat);

  std::mt19937 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  const double h = 1e-6;
  for (int t = 0; t < 3; ++t) {
    Eigen::VectorXd delta(vc.dim());
    for (int i = 0; i < delta.size(); ++i) delta[i] = g(rng);
    delta *= 0.3 / delta.norm();
    Eigen::VectorXd fd = (stress_moments(vd, vc, k + h * delta, mat) -
                          stress_moments(vd, vc, k - h * delta, mat)) /
                         (2.0 * h);
    Eigen::VectorXd lin = S * delta;
    CHECK((fd - lin).norm() < 1e-5 * (1.0 + lin.norm()));
  }
}

TEST_CASE("composite tangent has the stated block structure") {
  Mesh sq = structured_square(2);
  FESpace v1 = build_space(sq, Family::LE, 1, 2);
  FESpace vc = build_space(sq, Family::NED1, 1, 2);
  FESpace vd = build_space(sq, Family::RT, 1, 2);
  NeoHookean mat(2, 1.0, 1.0);

  SpMat s1d = grad_pairing(v1, vd);
  SpMat sc1 = SpMat(grad_pairing(v1, vc).transpose());
  SpMat mc = mass_matrix(vc);
  SpMat md = mass_matrix(vd);
  Eigen::VectorXd k = Eigen::VectorXd::Zero(vc.dim());
  SpMat sdc = stress_tangent(vd, vc, k, mat);
  SpMat S = compose_tangent(s1d, sc1, SpMat(-mc), sdc, SpMat(-md));

  const int n1 = v1.dim(), nc = vc.dim(), nd = vd.dim();
  REQUIRE(S.rows() == n1 + nc + nd);

  auto block_of = [&](int i) { return (i < n1) ? 0 : (i < n1 + nc ? 1 : 2); };
  // Allowed (row block, col block) pairs.
  auto allowed = [&](int rb, int cb) {
    return (rb == 0 && cb == 2) || (rb == 1 && cb == 0) ||
           (rb == 1 && cb == 1) || (rb == 2 && cb == 1) || (rb == 2 && cb == 2);
  };
  for (int kk = 0; kk < S.outerSize(); ++kk)
    for (SpMat::InnerIterator it(S, kk); it; ++it)
      CHECK(allowed(block_of(static_cast<int>(it.row())),
                    block_of(static_cast<int>(it.col()))));

  // The composite operator is not symmetric.
  SpMat D = SpMat(S - SpMat(S.transpose()));
  CHECK(D.norm() > 1.0);

  // Diagonal field blocks are symmetric to round-off.
  CHECK((Eigen::MatrixXd(mc) - Eigen::MatrixXd(mc).transpose()).norm() < 1e-12);
  CHECK((Eigen::MatrixXd(md) - Eigen::MatrixXd(md).transpose()).norm() < 1e-12);
}

TEST_CASE("assemblers validate their inputs") {
  Mesh sq = structured_square(2);
  Mesh other = structured_square(3);
  FESpace v1 = build_space(sq, Family::LE, 1, 2);
  FESpace vc = build_space(sq, Family::NED1, 1, 2);
  FESpace vc3 = build_space(other, Family::NED1, 1, 2);
  FESpace vd = build_space(sq, Family::RT, 1, 2);
  NeoHookean mat(2, 1.0, 1.0);

  CHECK_THROWS_AS(grad_pairing(v1, vc3), std::invalid_argument);
  CHECK_THROWS_AS(grad_pairing(vc, vd), std::invalid_argument);
  CHECK_THROWS_AS(metric_h1(vc), std::invalid_argument);
  CHECK_THROWS_AS(metric_curl(vd), std::invalid_argument);
  CHECK_THROWS_AS(metric_div(vc), std::invalid_argument);
  CHECK_THROWS_AS(
      stress_moments(vd, vc, Eigen::VectorXd::Zero(3), mat),
      std::invalid_argument);

  // An inadmissible gradient state propagates the material exception.
  auto bad = [](const Eigen::VectorXd&) {
    Eigen::MatrixXd K(2, 2);
    K << -3.0, 0, 0, 0;
    return K;
  };
  Eigen::VectorXd kbad = interpolate(vc, bad);
  CHECK_THROWS_AS(stress_moments(vd, vc, kbad, mat), InadmissibleState);
}
