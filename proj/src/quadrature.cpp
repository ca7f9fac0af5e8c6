#include "tfe/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tfe {

namespace {

// Nodes/weights of the n-point Gauss rule for the Jacobi weight
// (1-t)^a (1+t)^b on [-1,1], by Golub-Welsch on the symmetric tridiagonal
// matrix of the three-term recurrence.
void gauss_jacobi_m11(int n, double a, double b, Eigen::VectorXd& x,
                      Eigen::VectorXd& w) {
  if (n < 1) throw std::invalid_argument("quadrature: need at least one point");
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      T(k, k) = (b - a) / (a + b + 2.0);
    } else {
      const double s = 2.0 * k + a + b;
      T(k, k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    const double beta =
        4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    T(k, k - 1) = T(k - 1, k) = std::sqrt(beta);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("quadrature: eigensolver failed");
  // beta_0 = total mass of the weight on [-1,1].
  const double beta0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) *
                       std::tgamma(b + 1.0) / std::tgamma(a + b + 2.0);
  x = es.eigenvalues();
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    w[i] = beta0 * v0 * v0;
  }
}

int line_points_for_degree(int degree) { return degree / 2 + 1; }

}  // namespace

int max_quadrature_degree() { return 40; }

QuadRule gauss_legendre_01(int n) { return gauss_jacobi_01(n, 0); }

QuadRule gauss_jacobi_01(int n, int alpha) {
  Eigen::VectorXd t, w;
  gauss_jacobi_m11(n, static_cast<double>(alpha), 0.0, t, w);
  QuadRule r;
  r.dim = 1;
  r.degree = 2 * n - 1;
  r.points.resize(n, 1);
  r.weights.resize(n);
  // Map t in [-1,1] to x = (t+1)/2 in [0,1]: (1-t)^a dt = 2^(a+1) (1-x)^a dx.
  const double scale = std::pow(2.0, -(alpha + 1.0));
  for (int i = 0; i < n; ++i) {
    r.points(i, 0) = 0.5 * (t[i] + 1.0);
    r.weights[i] = w[i] * scale;
  }
  return r;
}

QuadRule simplex_rule(int dim, int degree) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("quadrature: dim must be 1, 2, or 3");
  if (degree < 0) throw std::invalid_argument("quadrature: negative degree");
  if (degree > max_quadrature_degree())
    throw std::invalid_argument("quadrature: degree above catalog maximum");

  QuadRule r;
  r.dim = dim;
  const double measure = (dim == 1) ? 1.0 : (dim == 2 ? 0.5 : 1.0 / 6.0);
  if (degree <= 1) {
    // Centroid rule: exact for affine integrands.
    r.degree = 1;
    r.points = Eigen::MatrixXd::Constant(1, dim, 1.0 / (dim + 1.0));
    r.weights = Eigen::VectorXd::Constant(1, measure);
    return r;
  }

  const int n = line_points_for_degree(degree);
  r.degree = 2 * n - 1;
  if (dim == 1) {
    QuadRule g = gauss_legendre_01(n);
    r.points = g.points;
    r.weights = g.weights;
    return r;
  }
  if (dim == 2) {
    // Conical (Duffy) product: x = a(1-b), y = b with the (1-b) Jacobian
    // absorbed into the Gauss-Jacobi line in b.
    QuadRule ga = gauss_legendre_01(n);
    QuadRule gb = gauss_jacobi_01(n, 1);
    r.points.resize(n * n, 2);
    r.weights.resize(n * n);
    int q = 0;
    for (int ib = 0; ib < n; ++ib)
      for (int ia = 0; ia < n; ++ia, ++q) {
        const double a = ga.points(ia, 0), b = gb.points(ib, 0);
        r.points(q, 0) = a * (1.0 - b);
        r.points(q, 1) = b;
        r.weights[q] = ga.weights[ia] * gb.weights[ib];
      }
    return r;
  }
  // dim == 3: x = a(1-b)(1-c), y = b(1-c), z = c; Jacobian (1-b)(1-c)^2.
  QuadRule ga = gauss_legendre_01(n);
  QuadRule gb = gauss_jacobi_01(n, 1);
  QuadRule gc = gauss_jacobi_01(n, 2);
  r.points.resize(n * n * n, 3);
  r.weights.resize(n * n * n);
  int q = 0;
  for (int ic = 0; ic < n; ++ic)
    for (int ib = 0; ib < n; ++ib)
      for (int ia = 0; ia < n; ++ia, ++q) {
        const double a = ga.points(ia, 0), b = gb.points(ib, 0), c = gc.points(ic, 0);
        r.points(q, 0) = a * (1.0 - b) * (1.0 - c);
        r.points(q, 1) = b * (1.0 - c);
        r.points(q, 2) = c;
        r.weights[q] = ga.weights[ia] * gb.weights[ib] * gc.weights[ic];
      }
  return r;
}

}  // namespace tfe
