// Reference finite elements on triangles and tetrahedra: Lagrange (LE),
// Nedelec first/second kind (NED1/NED2), Raviart-Thomas (RT) and
// Brezzi-Douglas-Marini (BDM), degrees 1-2, with dof functionals, basis
// tabulation, derivative tabulation, and Piola push-forwards.
//
// Construction follows the generalized-Vandermonde route: each element
// carries an explicit polynomial spanning set of its space in reference
// coordinates; dof functionals are realized as weighted point evaluations on
// a physical cell, the functional-by-span matrix is inverted per cell, and
// the dual (nodal) basis is its inverse. Edge/face functionals are oriented
// by global vertex numbering (edges run low to high vertex id, faces use the
// ascending vertex triple), so adjacent cells agree on shared traces without
// per-cell sign tables.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "tfe/mesh.hpp"

namespace tfe {

enum class Family { LE, NED1, NED2, RT, BDM };

/// Scalar polynomial in <= 3 variables as a list of monomial terms.
struct Poly {
  struct Term {
    double c;
    std::array<int, 3> e;
  };
  std::vector<Term> terms;
  double eval(const Eigen::VectorXd& x) const;
  /// Partial derivative with respect to coordinate d, evaluated at x.
  double deriv(const Eigen::VectorXd& x, int d) const;
};

/// Vector-valued polynomial (one Poly per component; scalar fields use one).
struct PolyVec {
  std::vector<Poly> comp;
};

/// A reference finite element: family/degree/dim metadata, the polynomial
/// spanning set, and the dof layout (functionals per mesh entity).
struct ReferenceElement {
  Family family = Family::LE;
  int degree = 1;
  int dim = 2;
  int n_comp = 1;             ///< 1 for LE, dim otherwise
  std::vector<PolyVec> span;  ///< reference-coordinate spanning set
  int dofs_per_vertex = 0;
  int dofs_per_edge = 0;
  int dofs_per_face = 0;  ///< 3D only
  int dofs_per_cell = 0;
  int n_dofs = 0;  ///< equals span.size()
  std::string name() const;
};

/// Build the reference element; throws std::invalid_argument outside the
/// catalog (5 families x degrees 1-2 x dims 2-3).
ReferenceElement reference_element(Family family, int degree, int dim);

/// Parse/format family names "LE", "NED1", "NED2", "RT", "BDM".
Family family_from_string(const std::string& s);
std::string to_string(Family f);

/// Affine map data of one cell: x = x0 + J xhat.
struct CellGeometry {
  Eigen::MatrixXd J, Jinv;
  double detJ = 0.0;
  Eigen::VectorXd x0;
  Eigen::VectorXd to_physical(const Eigen::VectorXd& ref) const {
    return x0 + J * ref;
  }
  Eigen::VectorXd to_reference(const Eigen::VectorXd& x) const {
    return Jinv * (x - x0);
  }
};

/// Geometry of mesh cell `cell`; throws std::invalid_argument when
/// degenerate (det J <= 0).
CellGeometry cell_geometry(const Mesh& mesh, int cell);
/// Geometry from explicit vertex coordinates (rows = dim+1 vertices).
CellGeometry cell_geometry(const Eigen::MatrixXd& cell_vertices);

/// Values and full first derivatives of every span function at a point set.
/// value[q] is n_basis x n_comp; grad[q][b] is n_comp x dim with entries
/// d(comp_i)/d(x_j).
struct Tabulation {
  std::vector<Eigen::MatrixXd> value;
  std::vector<std::vector<Eigen::MatrixXd>> grad;
};

/// Tabulate the reference span at reference points (rows of `points`).
Tabulation tabulate(const ReferenceElement& elem, const Eigen::MatrixXd& points);

/// Push a reference tabulation onto a physical cell: identity for LE values
/// with gradients mapped by J^{-1}; covariant Piola for NED1/NED2;
/// contravariant Piola for RT/BDM. Throws on det J <= 0.
Tabulation push_forward(const ReferenceElement& elem, const CellGeometry& geom,
                        const Tabulation& ref_tab);

/// Row-wise derivative extractors for gradient matrices (n_comp x dim).
double divergence(const Eigen::MatrixXd& grad);
double curl2(const Eigen::MatrixXd& grad);
Eigen::Vector3d curl3(const Eigen::MatrixXd& grad);

/// One dof functional materialized as a weighted point-evaluation sum:
/// F(u) = sum_q dirs.row(q) . u(points.row(q)).
struct DofFunctional {
  Eigen::MatrixXd points;  ///< n_q x dim, physical coordinates
  Eigen::MatrixXd dirs;    ///< n_q x n_comp, quadrature weights included
};

/// Where each local dof lives on the cell, in local enumeration order
/// (vertices, then edges, then faces, then interior; moments in order).
struct DofSite {
  enum Kind { Vertex, Edge, Face, Cell } kind;
  int local_index;  ///< local vertex/edge/face number (0 for Cell)
  int moment;       ///< moment index within the entity
};
std::vector<DofSite> dof_sites(const ReferenceElement& elem);

/// All dof functionals of `elem` on the given physical cell. `vertex_ids`
/// are the global vertex numbers fixing edge/face orientations (use 0..dim
/// for the reference cell itself).
std::vector<DofFunctional> dof_functionals(const ReferenceElement& elem,
                                           const Eigen::MatrixXd& cell_vertices,
                                           const std::vector<int>& vertex_ids);

/// Generalized Vandermonde: V(i,j) = functional_i applied to the Piola
/// push-forward of span function j. The per-cell nodal basis has coefficient
/// matrix V^{-1}.
Eigen::MatrixXd dof_matrix(const ReferenceElement& elem,
                           const Eigen::MatrixXd& cell_vertices,
                           const std::vector<int>& vertex_ids);

/// Apply all dof functionals to an analytic physical-space field
/// (returns n_comp values at a point).
Eigen::VectorXd apply_dofs(
    const ReferenceElement& elem, const Eigen::MatrixXd& cell_vertices,
    const std::vector<int>& vertex_ids,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field);

}  // namespace tfe
