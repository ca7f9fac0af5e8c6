// Nonlinear solution of the three-field problem: displacement U in a vector
// Lagrange space, displacement gradient K in a tensor H(curl) space, stress
// P in a tensor H(div) space. Newton's method on the composite residual
//   r1 = <P_h, grad test> - loads,
//   rc = <grad U_h - K_h, test>,
//   rd = <P(K_h) - P_h, test>,
// with essential conditions on U only, an optional backtracking line search
// that respects the admissible set, and load continuation with projection
// warm starts (K from the L2 projection of grad U_h, P from the projected
// constitutive stress).
#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tfe/assembly.hpp"
#include "tfe/material.hpp"
#include "tfe/space.hpp"

namespace tfe {

/// Solve A x = b by sparse LU; throws SingularSystem when the factorization
/// fails or the verified residual exceeds 1e-9 relative to |b|.
Eigen::VectorXd solve_linear(const SpMat& A, const Eigen::VectorXd& b);

struct NewtonOptions {
  double tol_abs = 1e-10;
  double tol_rel = 1e-12;
  int max_iter = 25;
  bool line_search = true;
  int continuation_steps = 1;
};

/// One Newton iterate: free-dof residual norm and the L2 distance between
/// the gradient field and the displacement gradient.
struct IterateRecord {
  int step = 0;   ///< continuation step (1-based)
  int iter = 0;   ///< Newton iteration within the step (0 = initial state)
  double residual = 0.0;
  double kgrad_gap = 0.0;
};

struct SolveReport {
  bool converged = false;
  int total_iterations = 0;
  std::vector<IterateRecord> history;
};

using SpatialField =
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Problem data. Loads and boundary values default to zero when unset.
struct ThreeFieldProblem {
  const Mesh* mesh = nullptr;
  ElementCombo combo;
  const Material* material = nullptr;
  SpatialField body;  ///< body force (n values); empty = zero
  std::vector<std::pair<std::string, SpatialField>> tractions;
  std::vector<std::string> dirichlet_tags;
  SpatialField dirichlet;  ///< boundary displacement; empty = zero
};

struct ThreeFieldSolution {
  FESpace v1, vc, vd;
  Eigen::VectorXd u, k, p;
  SolveReport report;
};

/// Run load continuation + Newton. Throws NonConvergence if a step exceeds
/// max_iter, SingularSystem from the linear solver, InadmissibleState if no
/// admissible line-search step exists.
ThreeFieldSolution solve_three_field(const ThreeFieldProblem& prob,
                                     const NewtonOptions& opts = {});

}  // namespace tfe
