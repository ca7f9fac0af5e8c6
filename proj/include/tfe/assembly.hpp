// Assembly of the sparse operators of the three-field formulation: mass
// matrices, gradient pairings, stability metrics, nonlinear stress moments
// and their tangent block, external loads, the composite tangent, and
// essential (Dirichlet) reduction utilities.
//
// Vector/tensor spaces are stacked copies of one scalar structure; copy-wise
// decoupled operators are assembled once per scalar block and replicated
// block-diagonally. The stress tangent block couples copies and is
// assembled in full.
#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "tfe/material.hpp"
#include "tfe/space.hpp"

namespace tfe {

using SpMat = Eigen::SparseMatrix<double>;

/// Mass matrix <u_j, u_i> over all copies (block diagonal per copy).
SpMat mass_matrix(const FESpace& sp);

/// Gradient pairing G(i, j) = <w_j, grad v_i> between a Lagrange space
/// (rows) and an H(curl)/H(div) space of the same copy count (columns),
/// block diagonal per copy.
SpMat grad_pairing(const FESpace& v1, const FESpace& vec);

/// Inf-sup metrics: mass + (grad, curl, div) pairings of the appropriate
/// differential operator -- all symmetric positive definite.
SpMat metric_h1(const FESpace& v1);
SpMat metric_curl(const FESpace& vc);
SpMat metric_div(const FESpace& vd);

/// Moments of the constitutive stress: out[(r, i)] = <row r of P(K_h),
/// phi_i> for the gradient field K_h with coefficients k. Throws
/// InadmissibleState if det(I + K_h) <= 0 at any quadrature point.
Eigen::VectorXd stress_moments(const FESpace& vd, const FESpace& vc,
                               const Eigen::VectorXd& k, const Material& mat);

/// Tangent block S(i_r, j_s) = <A(K_h) : (e_s x lambda_j), e_r x phi_i>,
/// coupling all copies; rows in the stress space, columns in the gradient
/// space.
SpMat stress_tangent(const FESpace& vd, const FESpace& vc,
                     const Eigen::VectorXd& k, const Material& mat);

/// Body load <B, psi_i> on a Lagrange space (B returns copies values).
Eigen::VectorXd body_load(
    const FESpace& v1,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& B);

/// Traction load over the facets carrying `tag`.
Eigen::VectorXd traction_load(
    const FESpace& v1, const std::string& tag,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& T);

/// Composite tangent in [U; K; P] ordering:
///   [ 0    0    S1d ]
///   [ Sc1  Scc  0   ]
///   [ 0    Sdc  Sdd ]
/// Callers pass the blocks with their signs (Scc = -mass_c, Sdd = -mass_d).
/// Structurally zero blocks contain no stored entries.
SpMat compose_tangent(const SpMat& s1d, const SpMat& sc1, const SpMat& scc,
                      const SpMat& sdc, const SpMat& sdd);

/// Essential-condition bookkeeping: a sorted constrained dof set with
/// prescribed values, and the complementary free set.
struct DirichletReduction {
  int n = 0;
  std::vector<int> constrained;  ///< sorted
  Eigen::VectorXd values;        ///< aligned with `constrained`
  std::vector<int> free;         ///< sorted complement
  std::vector<int> full_to_free; ///< -1 on constrained dofs

  int n_free() const { return static_cast<int>(free.size()); }
};

DirichletReduction make_reduction(int n, std::vector<int> constrained,
                                  Eigen::VectorXd values);

/// Eliminate constrained dofs: returns (A_ff, b_f - A_fc g).
std::pair<SpMat, Eigen::VectorXd> apply_dirichlet(
    const SpMat& A, const Eigen::VectorXd& b, const DirichletReduction& red);

/// Scatter a free-dof vector back to full length, inserting the prescribed
/// values on constrained dofs.
Eigen::VectorXd expand_free(const DirichletReduction& red,
                            const Eigen::VectorXd& xf);

/// Gather the free components of a full-length vector.
Eigen::VectorXd restrict_free(const DirichletReduction& red,
                              const Eigen::VectorXd& x);

}  // namespace tfe
