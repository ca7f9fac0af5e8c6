// Implementation of global finite element spaces.

#include "tfe/space.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "tfe/quadrature.hpp"

namespace tfe {

namespace {

/// Per-cell vertex coordinate block and global vertex ids.
void cell_vertex_data(const Mesh& mesh, int cell, Eigen::MatrixXd& X,
                      std::vector<int>& ids) {
  const auto& cv = mesh.cells[cell];
  X.resize(mesh.dim + 1, mesh.dim);
  ids.resize(mesh.dim + 1);
  for (int i = 0; i <= mesh.dim; ++i) {
    X.row(i) = mesh.vertices.row(cv[i]);
    ids[i] = cv[i];
  }
}

/// Barycentric coordinates of x in a cell (lam[0] = 1 - sum of ref coords).
Eigen::VectorXd barycentric(const CellGeometry& geom, const Eigen::VectorXd& x) {
  Eigen::VectorXd ref = geom.to_reference(x);
  Eigen::VectorXd lam(ref.size() + 1);
  lam[0] = 1.0 - ref.sum();
  lam.tail(ref.size()) = ref;
  return lam;
}

/// Nodal coefficients of copy r on a cell, expressed in the span basis.
Eigen::VectorXd span_coeffs(const FESpace& sp, const Eigen::VectorXd& z,
                            int cell, int copy) {
  const auto& dofs = sp.cell_dofs[cell];
  Eigen::VectorXd zl(sp.n_local());
  for (int i = 0; i < sp.n_local(); ++i)
    zl[i] = z[sp.global_dof(copy, dofs[i])];
  return sp.coeff[cell] * zl;
}

/// Integrate a per-quadrature-point squared contribution over the mesh.
template <typename F>
double integrate_sq(const FESpace& sp, int degree, F&& contrib) {
  QuadRule rule = simplex_rule(sp.mesh->dim, std::min(degree, max_quadrature_degree()));
  Tabulation ref_tab = tabulate(sp.elem, rule.points);
  double acc = 0.0;
  for (int c = 0; c < sp.mesh->n_cells(); ++c) {
    Tabulation tab = push_forward(sp.elem, sp.geoms[c], ref_tab);
    for (int q = 0; q < rule.size(); ++q) {
      Eigen::VectorXd x = sp.geoms[c].to_physical(rule.points.row(q).transpose());
      acc += rule.weights[q] * sp.geoms[c].detJ * contrib(c, q, tab, x);
    }
  }
  return std::sqrt(acc);
}

}  // namespace

FESpace build_space(const Mesh& mesh, Family family, int degree, int copies) {
  if (copies < 1) throw std::invalid_argument("build_space: copies < 1");
  FESpace sp;
  sp.mesh = &mesh;
  sp.elem = reference_element(family, degree, mesh.dim);
  sp.copies = copies;

  const int n_v = mesh.n_vertices();
  const int n_ed = mesh.n_edges();
  const int n_f = (mesh.dim == 3) ? mesh.n_faces() : 0;
  const int n_e = mesh.n_cells();
  const auto& el = sp.elem;

  const int off_edge = n_v * el.dofs_per_vertex;
  const int off_face = off_edge + n_ed * el.dofs_per_edge;
  const int off_cell = off_face + n_f * el.dofs_per_face;
  sp.n_scalar = off_cell + n_e * el.dofs_per_cell;

  const auto sites = dof_sites(el);
  sp.cell_dofs.resize(n_e);
  sp.coeff.resize(n_e);
  sp.geoms.resize(n_e);

  Eigen::MatrixXd X;
  std::vector<int> ids;
  for (int c = 0; c < n_e; ++c) {
    cell_vertex_data(mesh, c, X, ids);
    sp.geoms[c] = cell_geometry(X);
    auto& dofs = sp.cell_dofs[c];
    dofs.resize(el.n_dofs);
    for (int i = 0; i < el.n_dofs; ++i) {
      const auto& s = sites[i];
      switch (s.kind) {
        case DofSite::Vertex:
          dofs[i] = ids[s.local_index] * el.dofs_per_vertex + s.moment;
          break;
        case DofSite::Edge:
          dofs[i] = off_edge +
                    mesh.cell_edges[c][s.local_index] * el.dofs_per_edge +
                    s.moment;
          break;
        case DofSite::Face:
          dofs[i] = off_face +
                    mesh.cell_faces[c][s.local_index] * el.dofs_per_face +
                    s.moment;
          break;
        case DofSite::Cell:
          dofs[i] = off_cell + c * el.dofs_per_cell + s.moment;
          break;
      }
    }
    Eigen::MatrixXd V = dof_matrix(el, X, ids);
    sp.coeff[c] = V.partialPivLu().inverse();
  }
  return sp;
}

std::string ElementCombo::label() const {
  std::string s = "L" + std::to_string(d1);
  s += (fc == Family::NED1) ? "N1" : "N2";
  s += std::to_string(dc);
  s += (fd == Family::RT) ? "R" : "B";
  s += std::to_string(dd);
  return s;
}

ElementCombo parse_combo(const std::string& label) {
  auto fail = [&]() -> ElementCombo {
    throw std::invalid_argument("parse_combo: malformed combo label '" +
                                label + "'");
  };
  if (label.size() != 7) return fail();
  if (label[0] != 'L' || label[1] < '1' || label[1] > '2') return fail();
  if (label[2] != 'N') return fail();
  if (label[3] < '1' || label[3] > '2' || label[4] < '1' || label[4] > '2')
    return fail();
  if (label[5] != 'R' && label[5] != 'B') return fail();
  if (label[6] < '1' || label[6] > '2') return fail();

  ElementCombo c;
  c.f1 = Family::LE;
  c.d1 = label[1] - '0';
  c.fc = (label[3] == '1') ? Family::NED1 : Family::NED2;
  c.dc = label[4] - '0';
  c.fd = (label[5] == 'R') ? Family::RT : Family::BDM;
  c.dd = label[6] - '0';
  return c;
}

std::vector<int> constrained_dofs(const FESpace& sp,
                                  const std::vector<std::string>& tags) {
  if (sp.elem.family != Family::LE)
    throw std::logic_error(
        "constrained_dofs: only point-valued (Lagrange) spaces support "
        "essential boundary dofs");
  const Mesh& mesh = *sp.mesh;

  // Map sorted edge vertex pairs to edge ids (to find facet edges in 3D).
  std::map<std::array<int, 2>, int> edge_id;
  if (sp.elem.dofs_per_edge > 0 && mesh.dim == 3) {
    for (int e = 0; e < mesh.n_edges(); ++e)
      edge_id[{mesh.edges[e][0], mesh.edges[e][1]}] = e;
  }

  const int off_edge = mesh.n_vertices() * sp.elem.dofs_per_vertex;
  std::set<int> scalar;
  for (const auto& tag : tags) {
    for (int f : mesh.tagged_facets(tag)) {
      std::vector<int> fv = mesh.facet_vertices(f);
      for (int v : fv)
        for (int m = 0; m < sp.elem.dofs_per_vertex; ++m)
          scalar.insert(v * sp.elem.dofs_per_vertex + m);
      if (sp.elem.dofs_per_edge > 0) {
        if (mesh.dim == 2) {
          for (int m = 0; m < sp.elem.dofs_per_edge; ++m)
            scalar.insert(off_edge + f * sp.elem.dofs_per_edge + m);
        } else {
          const std::array<std::array<int, 2>, 3> pairs = {
              {{fv[0], fv[1]}, {fv[0], fv[2]}, {fv[1], fv[2]}}};
          for (auto p : pairs) {
            if (p[0] > p[1]) std::swap(p[0], p[1]);
            int e = edge_id.at({p[0], p[1]});
            for (int m = 0; m < sp.elem.dofs_per_edge; ++m)
              scalar.insert(off_edge + e * sp.elem.dofs_per_edge + m);
          }
        }
      }
    }
  }

  std::vector<int> out;
  out.reserve(scalar.size() * sp.copies);
  for (int r = 0; r < sp.copies; ++r)
    for (int s : scalar) out.push_back(sp.global_dof(r, s));
  std::sort(out.begin(), out.end());
  return out;
}

Eigen::VectorXd interpolate(
    const FESpace& sp,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& field) {
  const Mesh& mesh = *sp.mesh;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(sp.dim());
  Eigen::MatrixXd X;
  std::vector<int> ids;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    cell_vertex_data(mesh, c, X, ids);
    const auto fns = dof_functionals(sp.elem, X, ids);
    for (int i = 0; i < sp.n_local(); ++i) {
      Eigen::VectorXd acc = Eigen::VectorXd::Zero(sp.copies);
      for (int q = 0; q < fns[i].points.rows(); ++q) {
        Eigen::MatrixXd val = field(fns[i].points.row(q).transpose());
        if (val.rows() != sp.copies || val.cols() != sp.elem.n_comp)
          throw std::invalid_argument("interpolate: field shape mismatch");
        acc += val * fns[i].dirs.row(q).transpose();
      }
      for (int r = 0; r < sp.copies; ++r)
        z[sp.global_dof(r, sp.cell_dofs[c][i])] = acc[r];
    }
  }
  return z;
}

int locate_cell(const FESpace& sp, const Eigen::VectorXd& x, int hint) {
  const Mesh& mesh = *sp.mesh;
  const double tol = 1e-12;
  int c = (hint >= 0 && hint < mesh.n_cells()) ? hint : 0;

  for (int step = 0; step <= mesh.n_cells(); ++step) {
    Eigen::VectorXd lam = barycentric(sp.geoms[c], x);
    int im = 0;
    double lmin = lam[0];
    for (int i = 1; i < lam.size(); ++i)
      if (lam[i] < lmin) {
        lmin = lam[i];
        im = i;
      }
    if (lmin >= -tol) return c;
    // Cross the facet opposite the most negative barycentric coordinate.
    int facet = (mesh.dim == 2) ? mesh.cell_edges[c][2 - im]
                                : mesh.cell_faces[c][im];
    const auto& fc = mesh.facet_cells[facet];
    int next = (fc[0] == c) ? fc[1] : fc[0];
    if (next < 0) break;  // walked off the boundary
    c = next;
  }

  // Fallback: scan every cell for the best containment.
  int best = -1;
  double best_lmin = -1e300;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    Eigen::VectorXd lam = barycentric(sp.geoms[k], x);
    double lmin = lam.minCoeff();
    if (lmin > best_lmin) {
      best_lmin = lmin;
      best = k;
    }
  }
  if (best >= 0 && best_lmin >= -tol) return best;
  throw std::invalid_argument("locate_cell: point lies outside the mesh");
}

FieldValue eval_fe_local(const FESpace& sp, const Eigen::VectorXd& z, int cell,
                         const Eigen::VectorXd& ref) {
  if (z.size() != sp.dim())
    throw std::invalid_argument("eval_fe_local: coefficient size mismatch");
  Tabulation tab =
      push_forward(sp.elem, sp.geoms[cell], tabulate(sp.elem, ref.transpose()));
  FieldValue out;
  out.value.resize(sp.copies, sp.elem.n_comp);
  out.grad.assign(sp.copies, Eigen::MatrixXd::Zero(sp.elem.n_comp, sp.mesh->dim));
  for (int r = 0; r < sp.copies; ++r) {
    Eigen::VectorXd w = span_coeffs(sp, z, cell, r);
    out.value.row(r) = (tab.value[0].transpose() * w).transpose();
    for (int b = 0; b < sp.n_local(); ++b) out.grad[r] += w[b] * tab.grad[0][b];
  }
  return out;
}

FieldValue eval_fe(const FESpace& sp, const Eigen::VectorXd& z,
                   const Eigen::VectorXd& x, int hint) {
  int c = locate_cell(sp, x, hint);
  return eval_fe_local(sp, z, c, sp.geoms[c].to_reference(x));
}

double l2_error(
    const FESpace& sp, const Eigen::VectorXd& z,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& exact) {
  if (z.size() != sp.dim())
    throw std::invalid_argument("l2_error: coefficient size mismatch");
  std::vector<Eigen::MatrixXd> W(sp.copies);
  int cached_cell = -1;
  return integrate_sq(
      sp, 2 * sp.elem.degree + 4,
      [&](int c, int q, const Tabulation& tab, const Eigen::VectorXd& x) {
        if (c != cached_cell) {
          for (int r = 0; r < sp.copies; ++r)
            W[r] = span_coeffs(sp, z, c, r);
          cached_cell = c;
        }
        Eigen::MatrixXd ex = exact(x);
        double s = 0.0;
        for (int r = 0; r < sp.copies; ++r) {
          Eigen::VectorXd diff =
              tab.value[q].transpose() * W[r] - ex.row(r).transpose();
          s += diff.squaredNorm();
        }
        return s;
      });
}

double l2_norm(const FESpace& sp, const Eigen::VectorXd& z) {
  auto zero = [&](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Zero(sp.copies, sp.elem.n_comp).eval();
  };
  return l2_error(sp, z, zero);
}

double seminorm_error(
    const FESpace& sp, const Eigen::VectorXd& z,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& exact) {
  if (z.size() != sp.dim())
    throw std::invalid_argument("seminorm_error: coefficient size mismatch");
  const int d = sp.mesh->dim;
  const Family fam = sp.elem.family;
  std::vector<Eigen::MatrixXd> W(sp.copies);
  int cached_cell = -1;
  return integrate_sq(
      sp, 2 * sp.elem.degree + 4,
      [&](int c, int q, const Tabulation& tab, const Eigen::VectorXd& x) {
        if (c != cached_cell) {
          for (int r = 0; r < sp.copies; ++r)
            W[r] = span_coeffs(sp, z, c, r);
          cached_cell = c;
        }
        Eigen::MatrixXd ex = exact(x);
        double s = 0.0;
        for (int r = 0; r < sp.copies; ++r) {
          Eigen::MatrixXd G = Eigen::MatrixXd::Zero(sp.elem.n_comp, d);
          for (int b = 0; b < sp.n_local(); ++b)
            G += W[r](b) * tab.grad[q][b];
          if (fam == Family::LE) {
            s += (G.row(0) - ex.row(r)).squaredNorm();
          } else if (fam == Family::NED1 || fam == Family::NED2) {
            if (d == 2) {
              double diff = curl2(G) - ex(r, 0);
              s += diff * diff;
            } else {
              s += (curl3(G).transpose() - ex.row(r)).squaredNorm();
            }
          } else {
            double diff = divergence(G) - ex(r, 0);
            s += diff * diff;
          }
        }
        return s;
      });
}

}  // namespace tfe
