// Quadrature rules on reference simplices (interval, triangle, tetrahedron).
//
// Rules are conical products of Gauss-Legendre / Gauss-Jacobi lines whose
// nodes and weights come from the Golub-Welsch algorithm, so any polynomial
// exactness degree up to the catalog maximum is available in 1D/2D/3D.
#pragma once

#include <Eigen/Dense>

namespace tfe {

/// Quadrature rule on the reference simplex of dimension `dim`:
/// [0,1], triangle (0,0),(1,0),(0,1), or tetrahedron (0,0,0),e1,e2,e3.
struct QuadRule {
  int dim = 0;
  int degree = 0;           ///< guaranteed polynomial exactness degree
  Eigen::MatrixXd points;   ///< n_points x dim, reference coordinates
  Eigen::VectorXd weights;  ///< sums to the reference simplex measure
  int size() const { return static_cast<int>(weights.size()); }
};

/// n-point Gauss-Legendre rule on [0,1]; exact for degree 2n-1.
QuadRule gauss_legendre_01(int n);

/// n-point Gauss-Jacobi rule for integrals of f(x)*(1-x)^alpha over [0,1]:
/// sum_i w_i f(x_i) equals the weighted integral exactly for deg f <= 2n-1.
QuadRule gauss_jacobi_01(int n, int alpha);

/// Rule on the reference simplex, exact for all polynomials of total degree
/// `degree`. Degree <= 1 returns the one-point centroid rule. Throws
/// std::invalid_argument for negative degree, degree > max_quadrature_degree()
/// or dim outside {1,2,3}.
QuadRule simplex_rule(int dim, int degree);

/// Largest exactness degree simplex_rule provides.
int max_quadrature_degree();

}  // namespace tfe
