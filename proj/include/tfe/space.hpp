// Global finite element spaces over a mesh: entity-based dof numbering,
// per-cell dual (nodal) bases, canonical interpolation, point evaluation via
// cell walking, boundary dof extraction for H1 spaces, and L2/seminorm
// errors against analytic fields.
//
// A space with `copies` > 1 represents a vector (or tensor-row) field as
// stacked copies of one scalar-structure space; global dof = copy * n_scalar
// + scalar dof. H(curl)/H(div) spaces use one copy per tensor row.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "tfe/element.hpp"
#include "tfe/mesh.hpp"

namespace tfe {

struct FESpace {
  const Mesh* mesh = nullptr;
  ReferenceElement elem;
  int copies = 1;
  int n_scalar = 0;  ///< dofs of one copy
  std::vector<std::vector<int>> cell_dofs;  ///< per cell, scalar dof ids
  std::vector<Eigen::MatrixXd> coeff;       ///< per cell, V^{-1}
  std::vector<CellGeometry> geoms;          ///< per cell affine map

  int dim() const { return copies * n_scalar; }
  int global_dof(int copy, int scalar_dof) const {
    return copy * n_scalar + scalar_dof;
  }
  int n_local() const { return elem.n_dofs; }
};

/// Build a space of `copies` stacked copies of the (family, degree) element
/// over the mesh. Dofs are numbered entity-major: vertices, then edges, then
/// faces (3D), then cell interiors; moments in order within each entity.
FESpace build_space(const Mesh& mesh, Family family, int degree, int copies);

/// An element triple for the three-field discretization, written compactly
/// as e.g. "L1N11R1": Lagrange degree for the displacement, Nedelec kind and
/// degree for the displacement gradient, and RT ("R") or BDM ("B") degree
/// for the stress.
struct ElementCombo {
  Family f1 = Family::LE;
  int d1 = 1;
  Family fc = Family::NED1;
  int dc = 1;
  Family fd = Family::RT;
  int dd = 1;
  std::string label() const;
};

/// Parse a combo label; throws std::invalid_argument on malformed input.
ElementCombo parse_combo(const std::string& label);

/// Global dofs (all copies) attached to the closure of facets carrying any
/// of the given tags. Only meaningful for point-valued (Lagrange) spaces;
/// throws std::logic_error for edge/face-moment spaces, where essential
/// conditions are not imposed this way.
std::vector<int> constrained_dofs(const FESpace& sp,
                                  const std::vector<std::string>& tags);

/// Canonical interpolation: apply every dof functional to the analytic
/// field. The field returns a copies x n_comp matrix at a point (row r feeds
/// copy r). Shared-entity functionals are globally oriented, so the value is
/// independent of which adjacent cell computes it.
Eigen::VectorXd interpolate(
    const FESpace& sp,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& field);

/// Find a cell containing x (barycentric tolerance 1e-12) by walking from
/// `hint` through shared facets, with a full scan as fallback. Throws
/// std::invalid_argument if x lies outside the mesh.
int locate_cell(const FESpace& sp, const Eigen::VectorXd& x, int hint = 0);

/// Value and per-copy gradient of a finite element function.
struct FieldValue {
  Eigen::MatrixXd value;              ///< copies x n_comp
  std::vector<Eigen::MatrixXd> grad;  ///< per copy, n_comp x dim
};

/// Evaluate inside a known cell at a reference point (no search).
FieldValue eval_fe_local(const FESpace& sp, const Eigen::VectorXd& z, int cell,
                         const Eigen::VectorXd& ref);

/// Evaluate at a physical point (locates the cell first).
FieldValue eval_fe(const FESpace& sp, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& x, int hint = 0);

/// L2 norm of the difference between the FE function z and an analytic
/// field (copies x n_comp per point), integrated with an elevated rule.
double l2_error(
    const FESpace& sp, const Eigen::VectorXd& z,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& exact);

/// L2 norm of the FE function itself.
double l2_norm(const FESpace& sp, const Eigen::VectorXd& z);

/// L2 norm of (differential operator of z) minus an analytic field, where
/// the operator is the natural one for the family: gradient for Lagrange
/// (copies x dim), scalar curl per copy in 2D / vector curl in 3D for
/// first/second-kind Nedelec (copies x 1 or copies x 3), divergence per copy
/// for RT/BDM (copies x 1).
double seminorm_error(
    const FESpace& sp, const Eigen::VectorXd& z,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& exact);

}  // namespace tfe
