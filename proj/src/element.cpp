// Implementation of the reference element catalog, Piola maps and dof
// functionals.

#include "tfe/element.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tfe/quadrature.hpp"

namespace tfe {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

/// Homogeneous monomial exponents of total degree g (graded lex order).
std::vector<std::array<int, 3>> monomials_homog(int dim, int g) {
  std::vector<std::array<int, 3>> out;
  if (dim == 2) {
    for (int i = 0; i <= g; ++i) out.push_back({g - i, i, 0});
  } else {
    for (int a = g; a >= 0; --a)
      for (int b = g - a; b >= 0; --b) out.push_back({a, b, g - a - b});
  }
  return out;
}

/// All monomial exponents of total degree <= k.
std::vector<std::array<int, 3>> monomials_upto(int dim, int k) {
  std::vector<std::array<int, 3>> out;
  for (int g = 0; g <= k; ++g) {
    auto h = monomials_homog(dim, g);
    out.insert(out.end(), h.begin(), h.end());
  }
  return out;
}

Poly monomial(double c, const std::array<int, 3>& e) {
  Poly p;
  p.terms.push_back({c, e});
  return p;
}

/// e_c * p as a dim-component vector polynomial.
PolyVec axis_poly(int dim, int c, const Poly& p) {
  PolyVec v;
  v.comp.resize(dim);
  v.comp[c] = p;
  return v;
}

/// [P_k]^dim, component-major.
std::vector<PolyVec> vector_pk(int dim, int k) {
  std::vector<PolyVec> out;
  for (int c = 0; c < dim; ++c)
    for (const auto& e : monomials_upto(dim, k))
      out.push_back(axis_poly(dim, c, monomial(1.0, e)));
  return out;
}

std::array<int, 3> bump(std::array<int, 3> e, int c) {
  e[c] += 1;
  return e;
}

/// Homogeneous Nedelec complement S_k (fields orthogonal to x pointwise).
std::vector<PolyVec> nedelec_sk(int dim, int k) {
  std::vector<PolyVec> out;
  if (dim == 2) {
    // m * (-y, x) for homogeneous monomials m of degree k-1.
    for (const auto& m : monomials_homog(2, k - 1)) {
      PolyVec v;
      v.comp.resize(2);
      v.comp[0] = monomial(-1.0, bump(m, 1));
      v.comp[1] = monomial(1.0, bump(m, 0));
      out.push_back(v);
    }
  } else {
    // m * (x cross e_i); for k = 2 the combination (m = z, i = 3) is
    // dependent on the others and is dropped (dim S_2 = 8).
    // x cross e_1 = (0, z, -y); x cross e_2 = (-z, 0, x);
    // x cross e_3 = (y, -x, 0).
    for (int i = 0; i < 3; ++i) {
      for (const auto& m : monomials_homog(3, k - 1)) {
        if (k == 2 && i == 2 && m == std::array<int, 3>{0, 0, 1}) continue;
        PolyVec v;
        v.comp.resize(3);
        if (i == 0) {
          v.comp[1] = monomial(1.0, bump(m, 2));
          v.comp[2] = monomial(-1.0, bump(m, 1));
        } else if (i == 1) {
          v.comp[0] = monomial(-1.0, bump(m, 2));
          v.comp[2] = monomial(1.0, bump(m, 0));
        } else {
          v.comp[0] = monomial(1.0, bump(m, 1));
          v.comp[1] = monomial(-1.0, bump(m, 0));
        }
        out.push_back(v);
      }
    }
  }
  return out;
}

/// Raviart-Thomas radial complement x * (homogeneous P_{k-1}).
std::vector<PolyVec> rt_bubbles(int dim, int k) {
  std::vector<PolyVec> out;
  for (const auto& m : monomials_homog(dim, k - 1)) {
    PolyVec v;
    v.comp.resize(dim);
    for (int c = 0; c < dim; ++c) v.comp[c] = monomial(1.0, bump(m, c));
    out.push_back(v);
  }
  return out;
}

/// Shifted Legendre polynomials on [0,1].
double shifted_legendre(int m, double s) {
  switch (m) {
    case 0:
      return 1.0;
    case 1:
      return 2.0 * s - 1.0;
    case 2:
      return 6.0 * s * s - 6.0 * s + 1.0;
    default:
      throw std::invalid_argument("shifted_legendre: order out of range");
  }
}

Eigen::Vector3d cross3(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return a.cross(b);
}

}  // namespace

double Poly::eval(const Eigen::VectorXd& x) const {
  double r = 0.0;
  for (const auto& t : terms) {
    double v = t.c;
    for (int d = 0; d < x.size(); ++d) v *= ipow(x[d], t.e[d]);
    r += v;
  }
  return r;
}

double Poly::deriv(const Eigen::VectorXd& x, int d) const {
  double r = 0.0;
  for (const auto& t : terms) {
    if (t.e[d] == 0) continue;
    double v = t.c * t.e[d] * ipow(x[d], t.e[d] - 1);
    for (int k = 0; k < x.size(); ++k) {
      if (k == d) continue;
      v *= ipow(x[k], t.e[k]);
    }
    r += v;
  }
  return r;
}

std::string to_string(Family f) {
  switch (f) {
    case Family::LE:
      return "LE";
    case Family::NED1:
      return "NED1";
    case Family::NED2:
      return "NED2";
    case Family::RT:
      return "RT";
    case Family::BDM:
      return "BDM";
  }
  throw std::logic_error("to_string(Family): unreachable");
}

Family family_from_string(const std::string& s) {
  if (s == "LE") return Family::LE;
  if (s == "NED1") return Family::NED1;
  if (s == "NED2") return Family::NED2;
  if (s == "RT") return Family::RT;
  if (s == "BDM") return Family::BDM;
  throw std::invalid_argument("unknown element family: " + s);
}

std::string ReferenceElement::name() const {
  return to_string(family) + "_" + std::to_string(degree) + "_" +
         std::to_string(dim) + "d";
}

ReferenceElement reference_element(Family family, int degree, int dim) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("reference_element: dim must be 2 or 3");
  if (degree != 1 && degree != 2)
    throw std::invalid_argument("reference_element: degree must be 1 or 2");

  ReferenceElement el;
  el.family = family;
  el.degree = degree;
  el.dim = dim;

  switch (family) {
    case Family::LE: {
      el.n_comp = 1;
      el.dofs_per_vertex = 1;
      if (degree == 2) el.dofs_per_edge = 1;
      for (const auto& e : monomials_upto(dim, degree)) {
        PolyVec v;
        v.comp.push_back(monomial(1.0, e));
        el.span.push_back(v);
      }
      break;
    }
    case Family::NED1: {
      el.n_comp = dim;
      el.dofs_per_edge = degree;
      if (degree == 2) {
        if (dim == 2)
          el.dofs_per_cell = 2;
        else
          el.dofs_per_face = 2;
      }
      el.span = vector_pk(dim, degree - 1);
      auto sk = nedelec_sk(dim, degree);
      el.span.insert(el.span.end(), sk.begin(), sk.end());
      break;
    }
    case Family::NED2: {
      el.n_comp = dim;
      el.dofs_per_edge = degree + 1;
      if (degree == 2) {
        if (dim == 2)
          el.dofs_per_cell = 3;
        else
          el.dofs_per_face = 3;
      }
      el.span = vector_pk(dim, degree);
      break;
    }
    case Family::RT: {
      el.n_comp = dim;
      if (dim == 2) {
        el.dofs_per_edge = degree;
        if (degree == 2) el.dofs_per_cell = 2;
      } else {
        el.dofs_per_face = (degree == 1) ? 1 : 3;
        if (degree == 2) el.dofs_per_cell = 3;
      }
      el.span = vector_pk(dim, degree - 1);
      auto rb = rt_bubbles(dim, degree);
      el.span.insert(el.span.end(), rb.begin(), rb.end());
      break;
    }
    case Family::BDM: {
      el.n_comp = dim;
      if (dim == 2) {
        el.dofs_per_edge = degree + 1;
        if (degree == 2) el.dofs_per_cell = 3;
      } else {
        el.dofs_per_face = (degree == 1) ? 3 : 6;
        if (degree == 2) el.dofs_per_cell = 6;
      }
      el.span = vector_pk(dim, degree);
      break;
    }
  }

  const int n_vert = dim + 1;
  const int n_edge = (dim == 2) ? 3 : 6;
  const int n_face = (dim == 3) ? 4 : 0;
  el.n_dofs = n_vert * el.dofs_per_vertex + n_edge * el.dofs_per_edge +
              n_face * el.dofs_per_face + el.dofs_per_cell;
  if (el.n_dofs != static_cast<int>(el.span.size()))
    throw std::logic_error("reference_element: span/dof count mismatch for " +
                           el.name());
  return el;
}

CellGeometry cell_geometry(const Eigen::MatrixXd& cell_vertices) {
  const int d = static_cast<int>(cell_vertices.cols());
  if (cell_vertices.rows() != d + 1)
    throw std::invalid_argument("cell_geometry: need dim+1 vertices");
  CellGeometry g;
  g.x0 = cell_vertices.row(0).transpose();
  g.J.resize(d, d);
  for (int i = 0; i < d; ++i)
    g.J.col(i) = (cell_vertices.row(i + 1) - cell_vertices.row(0)).transpose();
  g.detJ = g.J.determinant();
  if (!(g.detJ > 1e-300))
    throw std::invalid_argument("cell_geometry: degenerate or inverted cell");
  g.Jinv = g.J.inverse();
  return g;
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  if (cell < 0 || cell >= mesh.n_cells())
    throw std::invalid_argument("cell_geometry: cell index out of range");
  const auto& cv = mesh.cells[cell];
  Eigen::MatrixXd X(mesh.dim + 1, mesh.dim);
  for (int i = 0; i <= mesh.dim; ++i) X.row(i) = mesh.vertices.row(cv[i]);
  return cell_geometry(X);
}

Tabulation tabulate(const ReferenceElement& elem, const Eigen::MatrixXd& points) {
  if (points.cols() != elem.dim)
    throw std::invalid_argument("tabulate: point dimension mismatch");
  const int nq = static_cast<int>(points.rows());
  const int nb = elem.n_dofs;
  Tabulation tab;
  tab.value.resize(nq);
  tab.grad.resize(nq);
  for (int q = 0; q < nq; ++q) {
    Eigen::VectorXd x = points.row(q).transpose();
    tab.value[q].resize(nb, elem.n_comp);
    tab.grad[q].assign(nb, Eigen::MatrixXd(elem.n_comp, elem.dim));
    for (int b = 0; b < nb; ++b) {
      for (int c = 0; c < elem.n_comp; ++c) {
        tab.value[q](b, c) = elem.span[b].comp[c].eval(x);
        for (int d = 0; d < elem.dim; ++d)
          tab.grad[q][b](c, d) = elem.span[b].comp[c].deriv(x, d);
      }
    }
  }
  return tab;
}

Tabulation push_forward(const ReferenceElement& elem, const CellGeometry& geom,
                        const Tabulation& ref_tab) {
  if (!(geom.detJ > 0))
    throw std::invalid_argument("push_forward: non-positive Jacobian");
  Tabulation out;
  const int nq = static_cast<int>(ref_tab.value.size());
  out.value.resize(nq);
  out.grad.resize(nq);

  Eigen::MatrixXd A;
  switch (elem.family) {
    case Family::LE:
      A = Eigen::MatrixXd::Identity(1, 1);
      break;
    case Family::NED1:
    case Family::NED2:
      A = geom.Jinv.transpose();
      break;
    case Family::RT:
    case Family::BDM:
      A = geom.J / geom.detJ;
      break;
  }

  for (int q = 0; q < nq; ++q) {
    out.value[q] = ref_tab.value[q] * A.transpose();
    const int nb = static_cast<int>(ref_tab.grad[q].size());
    out.grad[q].resize(nb);
    for (int b = 0; b < nb; ++b)
      out.grad[q][b] = A * ref_tab.grad[q][b] * geom.Jinv;
  }
  return out;
}

double divergence(const Eigen::MatrixXd& grad) {
  if (grad.rows() != grad.cols())
    throw std::invalid_argument("divergence: gradient must be square");
  return grad.trace();
}

double curl2(const Eigen::MatrixXd& grad) {
  if (grad.rows() != 2 || grad.cols() != 2)
    throw std::invalid_argument("curl2: need a 2x2 gradient");
  return grad(1, 0) - grad(0, 1);
}

Eigen::Vector3d curl3(const Eigen::MatrixXd& grad) {
  if (grad.rows() != 3 || grad.cols() != 3)
    throw std::invalid_argument("curl3: need a 3x3 gradient");
  return Eigen::Vector3d(grad(2, 1) - grad(1, 2), grad(0, 2) - grad(2, 0),
                         grad(1, 0) - grad(0, 1));
}

std::vector<DofSite> dof_sites(const ReferenceElement& elem) {
  std::vector<DofSite> out;
  const int n_vert = elem.dim + 1;
  const int n_edge = (elem.dim == 2) ? 3 : 6;
  const int n_face = (elem.dim == 3) ? 4 : 0;
  for (int v = 0; v < n_vert; ++v)
    for (int m = 0; m < elem.dofs_per_vertex; ++m)
      out.push_back({DofSite::Vertex, v, m});
  for (int e = 0; e < n_edge; ++e)
    for (int m = 0; m < elem.dofs_per_edge; ++m)
      out.push_back({DofSite::Edge, e, m});
  for (int f = 0; f < n_face; ++f)
    for (int m = 0; m < elem.dofs_per_face; ++m)
      out.push_back({DofSite::Face, f, m});
  for (int m = 0; m < elem.dofs_per_cell; ++m)
    out.push_back({DofSite::Cell, 0, m});
  return out;
}

std::vector<DofFunctional> dof_functionals(const ReferenceElement& elem,
                                           const Eigen::MatrixXd& cell_vertices,
                                           const std::vector<int>& vertex_ids) {
  const int d = elem.dim;
  if (cell_vertices.rows() != d + 1 || cell_vertices.cols() != d)
    throw std::invalid_argument("dof_functionals: vertex matrix shape");
  if (static_cast<int>(vertex_ids.size()) != d + 1)
    throw std::invalid_argument("dof_functionals: need dim+1 vertex ids");

  std::vector<DofFunctional> out;
  out.reserve(elem.n_dofs);

  // Vertex evaluations (Lagrange only).
  for (int v = 0; v < d + 1 && elem.dofs_per_vertex > 0; ++v) {
    DofFunctional f;
    f.points = cell_vertices.row(v);
    f.dirs = Eigen::MatrixXd::Ones(1, 1);
    out.push_back(std::move(f));
  }

  // Edge functionals.
  if (elem.dofs_per_edge > 0) {
    const auto edges = Mesh::simplex_edges(d);
    for (const auto& le : edges) {
      Eigen::VectorXd xlo = cell_vertices.row(le[0]).transpose();
      Eigen::VectorXd xhi = cell_vertices.row(le[1]).transpose();
      if (vertex_ids[le[0]] > vertex_ids[le[1]]) std::swap(xlo, xhi);

      if (elem.family == Family::LE) {
        // Degree-2 Lagrange: midpoint evaluation.
        DofFunctional f;
        f.points = (0.5 * (xlo + xhi)).transpose();
        f.dirs = Eigen::MatrixXd::Ones(1, 1);
        out.push_back(std::move(f));
        continue;
      }

      Eigen::VectorXd tvec = xhi - xlo;
      const double len = tvec.norm();
      Eigen::VectorXd that = tvec / len;
      Eigen::VectorXd dvec;
      if (elem.family == Family::NED1 || elem.family == Family::NED2) {
        dvec = that;
      } else {
        // 2D normal obtained by rotating the global tangent.
        dvec.resize(2);
        dvec << that[1], -that[0];
      }

      QuadRule gl = gauss_legendre_01(4);
      for (int m = 0; m < elem.dofs_per_edge; ++m) {
        DofFunctional f;
        f.points.resize(gl.size(), d);
        f.dirs.resize(gl.size(), elem.n_comp);
        for (int q = 0; q < gl.size(); ++q) {
          const double s = gl.points(q, 0);
          f.points.row(q) = (xlo + s * tvec).transpose();
          f.dirs.row(q) =
              (gl.weights[q] * shifted_legendre(m, s)) * dvec.transpose();
        }
        out.push_back(std::move(f));
      }
    }
  }

  // Face functionals (3D).
  if (d == 3 && elem.dofs_per_face > 0) {
    QuadRule tri = simplex_rule(2, 5);
    const auto faces = Mesh::tet_faces();
    for (const auto& lf : faces) {
      // Order the face corners by ascending global vertex id.
      std::array<int, 3> lv = lf;
      std::sort(lv.begin(), lv.end(), [&](int a, int b) {
        return vertex_ids[a] < vertex_ids[b];
      });
      Eigen::Vector3d p0 = cell_vertices.row(lv[0]).transpose();
      Eigen::Vector3d p1 = cell_vertices.row(lv[1]).transpose();
      Eigen::Vector3d p2 = cell_vertices.row(lv[2]).transpose();
      Eigen::Vector3d u = p1 - p0, v = p2 - p0;
      Eigen::Vector3d nrm = cross3(u, v).normalized();
      Eigen::Vector3d tau1 = u.normalized();
      Eigen::Vector3d tau2 = cross3(nrm, tau1);
      Eigen::Vector3d cf = (p0 + p1 + p2) / 3.0;

      for (int m = 0; m < elem.dofs_per_face; ++m) {
        DofFunctional f;
        f.points.resize(tri.size(), 3);
        f.dirs.resize(tri.size(), 3);
        for (int q = 0; q < tri.size(); ++q) {
          const double xi = tri.points(q, 0), eta = tri.points(q, 1);
          Eigen::Vector3d x = p0 + xi * u + eta * v;
          f.points.row(q) = x.transpose();
          const double w = 2.0 * tri.weights[q];
          Eigen::Vector3d dir;
          if (elem.family == Family::RT || elem.family == Family::BDM) {
            // Normal moments against face polynomials 1, xi, eta, xi^2,
            // xi*eta, eta^2 (truncated to dofs_per_face).
            double qv = 1.0;
            switch (m) {
              case 0:
                qv = 1.0;
                break;
              case 1:
                qv = xi;
                break;
              case 2:
                qv = eta;
                break;
              case 3:
                qv = xi * xi;
                break;
              case 4:
                qv = xi * eta;
                break;
              default:
                qv = eta * eta;
                break;
            }
            dir = qv * nrm;
          } else if (elem.family == Family::NED1) {
            dir = (m == 0) ? tau1 : tau2;
          } else {
            // Second-kind Nedelec face moments: two constant tangents plus
            // the in-plane radial field about the face centroid.
            if (m == 0)
              dir = tau1;
            else if (m == 1)
              dir = tau2;
            else
              dir = x - cf;
          }
          f.dirs.row(q) = w * dir.transpose();
        }
        out.push_back(std::move(f));
      }
    }
  }

  // Interior moments.
  if (elem.dofs_per_cell > 0) {
    QuadRule cr = simplex_rule(d, 5);
    CellGeometry geom = cell_geometry(cell_vertices);
    const double ref_vol = (d == 2) ? 0.5 : 1.0 / 6.0;
    Eigen::VectorXd centroid = cell_vertices.colwise().mean().transpose();

    // Weight fields evaluated at a physical point: first the d constant
    // axis fields, then (where present) the non-constant completions --
    // NED2 2D adds the radial field x - c, BDM 2D its rotation, and BDM 3D
    // the three fields e_i cross (x - c).
    auto field = [&](int m, const Eigen::VectorXd& x) -> Eigen::VectorXd {
      if (m < d) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
        w[m] = 1.0;
        return w;
      }
      Eigen::VectorXd r = x - centroid;
      if (d == 2) {
        if (elem.family == Family::NED2) return r;
        Eigen::VectorXd w(2);
        w << -r[1], r[0];
        return w;
      }
      Eigen::Vector3d ei = Eigen::Vector3d::Zero();
      ei[m - 3] = 1.0;
      return cross3(ei, Eigen::Vector3d(r));
    };

    for (int m = 0; m < elem.dofs_per_cell; ++m) {
      DofFunctional f;
      f.points.resize(cr.size(), d);
      f.dirs.resize(cr.size(), d);
      for (int q = 0; q < cr.size(); ++q) {
        Eigen::VectorXd xi = cr.points.row(q).transpose();
        Eigen::VectorXd x = geom.to_physical(xi);
        f.points.row(q) = x.transpose();
        f.dirs.row(q) = (cr.weights[q] / ref_vol) * field(m, x).transpose();
      }
      out.push_back(std::move(f));
    }
  }

  if (static_cast<int>(out.size()) != elem.n_dofs)
    throw std::logic_error("dof_functionals: count mismatch for " + elem.name());
  return out;
}

Eigen::MatrixXd dof_matrix(const ReferenceElement& elem,
                           const Eigen::MatrixXd& cell_vertices,
                           const std::vector<int>& vertex_ids) {
  const auto fns = dof_functionals(elem, cell_vertices, vertex_ids);
  CellGeometry geom = cell_geometry(cell_vertices);

  int total_q = 0;
  for (const auto& f : fns) total_q += static_cast<int>(f.points.rows());
  Eigen::MatrixXd ref_pts(total_q, elem.dim);
  int r = 0;
  for (const auto& f : fns)
    for (int q = 0; q < f.points.rows(); ++q)
      ref_pts.row(r++) = geom.to_reference(f.points.row(q).transpose()).transpose();

  Tabulation tab = push_forward(elem, geom, tabulate(elem, ref_pts));

  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(elem.n_dofs, elem.n_dofs);
  r = 0;
  for (int i = 0; i < static_cast<int>(fns.size()); ++i) {
    for (int q = 0; q < fns[i].points.rows(); ++q) {
      V.row(i) += (tab.value[r] * fns[i].dirs.row(q).transpose()).transpose();
      ++r;
    }
  }
  return V;
}

Eigen::VectorXd apply_dofs(
    const ReferenceElement& elem, const Eigen::MatrixXd& cell_vertices,
    const std::vector<int>& vertex_ids,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field) {
  const auto fns = dof_functionals(elem, cell_vertices, vertex_ids);
  Eigen::VectorXd F(elem.n_dofs);
  for (int i = 0; i < static_cast<int>(fns.size()); ++i) {
    double v = 0.0;
    for (int q = 0; q < fns[i].points.rows(); ++q) {
      Eigen::VectorXd val = field(fns[i].points.row(q).transpose());
      v += fns[i].dirs.row(q).dot(val);
    }
    F[i] = v;
  }
  return F;
}

}  // namespace tfe
