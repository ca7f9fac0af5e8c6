// Tests for the neo-Hookean law: closed-form values, finite difference
// consistency of stress and tangent, the small-strain tangent, plane-strain
// embedding, and admissibility guards.

#include <cmath>
#include <random>

#include "doctest.h"
#include "tfe/core.hpp"
#include "tfe/material.hpp"

using namespace tfe;

namespace {

/// A random displacement gradient guaranteed well inside the admissible set.
Eigen::MatrixXd random_state(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-0.25, 0.25);
  while (true) {
    Eigen::MatrixXd K(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) K(i, j) = u(rng);
    double det = (Eigen::MatrixXd::Identity(n, n) + K).determinant();
    if (det > 0.35) return K;
  }
}

}  // namespace

TEST_CASE("reference state carries zero stress and zero energy") {
  for (int n : {2, 3}) {
    NeoHookean mat(n, 1.3, 2.7);
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    CHECK(mat.energy(K) == 0.0);
    CHECK(mat.stress(K).norm() == 0.0);  // exactly zero
  }
}

TEST_CASE("closed-form energy and stress at a diagonal stretch") {
  // F = diag(2, 1): I1 = 5 + 1, I3 = 4.
  NeoHookean mat(2, 1.0, 1.0);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2);
  K(0, 0) = 1.0;
  const double ln4 = std::log(4.0);
  CHECK(mat.energy(K) ==
        doctest::Approx(0.5 * 3.0 - 0.5 * ln4 + 0.5 * ln4 * ln4).epsilon(1e-14));
  Eigen::MatrixXd P = mat.stress(K);
  // P = mu F + (2 lambda ln I3 - mu) F^{-T}.
  CHECK(P(0, 0) == doctest::Approx(2.0 + (2.0 * ln4 - 1.0) * 0.5).epsilon(1e-14));
  CHECK(P(1, 1) == doctest::Approx(1.0 + (2.0 * ln4 - 1.0) * 1.0).epsilon(1e-14));
  CHECK(P(0, 1) == doctest::Approx(0.0));
  CHECK(P(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("stress is the gradient of the energy (finite differences)") {
  std::mt19937 rng(1234);
  const double h = 1e-6;
  for (int n : {2, 3}) {
    NeoHookean mat(n, 0.8, 1.9);
    for (int t = 0; t < 25; ++t) {
      Eigen::MatrixXd K = random_state(n, rng);
      Eigen::MatrixXd P = mat.stress(K);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Eigen::MatrixXd Kp = K, Km = K;
          Kp(i, j) += h;
          Km(i, j) -= h;
          double fd = (mat.energy(Kp) - mat.energy(Km)) / (2.0 * h);
          CHECK(std::abs(fd - P(i, j)) < 1e-6 * (1.0 + std::abs(P(i, j))));
        }
    }
  }
}

TEST_CASE("tangent is the derivative of the stress (finite differences)") {
  std::mt19937 rng(4321);
  const double h = 1e-6;
  for (int n : {2, 3}) {
    NeoHookean mat(n, 1.1, 0.6);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
      Eigen::MatrixXd K = random_state(n, rng);
      Eigen::MatrixXd M(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = g(rng);
      Eigen::MatrixXd AM = mat.tangent(K, M);
      Eigen::MatrixXd fd =
          (mat.stress(K + h * M) - mat.stress(K - h * M)) / (2.0 * h);
      CHECK((fd - AM).norm() < 1e-6 * (1.0 + AM.norm()));
    }
  }
}

TEST_CASE("small-strain tangent has the closed form") {
  std::mt19937 rng(77);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {2, 3}) {
    const double mu = 1.7, lam = 3.1;
    NeoHookean mat(n, mu, lam);
    Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(n, n);
    for (int t = 0; t < 8; ++t) {
      Eigen::MatrixXd M(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = g(rng);
      Eigen::MatrixXd want =
          mu * M + mu * M.transpose() +
          4.0 * lam * M.trace() * Eigen::MatrixXd::Identity(n, n);
      CHECK((mat.tangent(zero, M) - want).norm() < 1e-13 * want.norm());
    }
  }
}

TEST_CASE("tangent is self-adjoint (energy Hessian symmetry)") {
  std::mt19937 rng(99);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {2, 3}) {
    NeoHookean mat(n, 0.9, 2.2);
    for (int t = 0; t < 10; ++t) {
      Eigen::MatrixXd K = random_state(n, rng);
      Eigen::MatrixXd M(n, n), N(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          M(i, j) = g(rng);
          N(i, j) = g(rng);
        }
      double a = (mat.tangent(K, M).array() * N.array()).sum();
      double b = (M.array() * mat.tangent(K, N).array()).sum();
      CHECK(a == doctest::Approx(b).epsilon(1e-11));
    }
  }
}

TEST_CASE("plane strain matches the 3D law on embedded states") {
  std::mt19937 rng(31);
  NeoHookean m2(2, 1.4, 0.9);
  NeoHookean m3(3, 1.4, 0.9);
  for (int t = 0; t < 10; ++t) {
    Eigen::MatrixXd K2 = random_state(2, rng);
    Eigen::MatrixXd K3 = Eigen::MatrixXd::Zero(3, 3);
    K3.topLeftCorner(2, 2) = K2;
    CHECK(m2.energy(K2) == doctest::Approx(m3.energy(K3)).epsilon(1e-14));
    Eigen::MatrixXd P2 = m2.stress(K2);
    Eigen::MatrixXd P3 = m3.stress(K3);
    CHECK((P3.topLeftCorner(2, 2) - P2).norm() < 1e-13 * (1.0 + P2.norm()));
    // No in-plane/out-of-plane stress coupling.
    CHECK(std::abs(P3(0, 2)) + std::abs(P3(1, 2)) + std::abs(P3(2, 0)) +
              std::abs(P3(2, 1)) <
          1e-14);
  }
}

TEST_CASE("inadmissible states are rejected") {
  NeoHookean mat(2, 1.0, 1.0);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2, 2);
  K(0, 0) = -1.0;  // det F = 0
  CHECK_THROWS_AS(mat.energy(K), InadmissibleState);
  K(0, 0) = -2.0;  // det F < 0
  CHECK_THROWS_AS(mat.stress(K), InadmissibleState);
  CHECK_THROWS_AS(mat.tangent(K, Eigen::MatrixXd::Identity(2, 2)),
                  InadmissibleState);

  CHECK_THROWS_AS(NeoHookean(4, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(NeoHookean(2, -1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(mat.stress(Eigen::MatrixXd::Zero(3, 3)),
                  std::invalid_argument);
}
