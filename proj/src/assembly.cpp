// Implementation of the three-field assembly primitives.

#include "tfe/assembly.hpp"

#include <algorithm>
#include <stdexcept>

#include "tfe/quadrature.hpp"

namespace tfe {

namespace {

using Triplet = Eigen::Triplet<double>;

void check_same_mesh(const FESpace& a, const FESpace& b, const char* who) {
  if (a.mesh != b.mesh)
    throw std::invalid_argument(std::string(who) +
                                ": spaces built on different meshes");
  if (a.copies != b.copies)
    throw std::invalid_argument(std::string(who) + ": copy count mismatch");
}

/// Scatter a per-copy scalar local block into the copy-expanded triplets.
void scatter_copies(const FESpace& rows_sp, const FESpace& cols_sp,
                    const std::vector<int>& rdofs, const std::vector<int>& cdofs,
                    const Eigen::MatrixXd& loc, std::vector<Triplet>& out) {
  for (int r = 0; r < rows_sp.copies; ++r)
    for (int i = 0; i < static_cast<int>(rdofs.size()); ++i)
      for (int j = 0; j < static_cast<int>(cdofs.size()); ++j) {
        const double v = loc(i, j);
        if (v != 0.0)
          out.emplace_back(rows_sp.global_dof(r, rdofs[i]),
                           cols_sp.global_dof(r, cdofs[j]), v);
      }
}

/// Accumulate sum_q w_q detJ * contribution over one cell, in span basis,
/// then conjugate with the nodal coefficient matrices.
Eigen::MatrixXd nodal_block(const Eigen::MatrixXd& span_block,
                            const Eigen::MatrixXd& Crow,
                            const Eigen::MatrixXd& Ccol) {
  return Crow.transpose() * span_block * Ccol;
}

/// Gradients of all span functions at one point as a (n_basis x dim) matrix
/// for scalar elements.
Eigen::MatrixXd scalar_grads(const Tabulation& tab, int q) {
  const int nb = static_cast<int>(tab.grad[q].size());
  const int d = static_cast<int>(tab.grad[q][0].cols());
  Eigen::MatrixXd G(nb, d);
  for (int b = 0; b < nb; ++b) G.row(b) = tab.grad[q][b].row(0);
  return G;
}

}  // namespace

SpMat mass_matrix(const FESpace& sp) {
  const Mesh& mesh = *sp.mesh;
  QuadRule rule = simplex_rule(mesh.dim, 2 * sp.elem.degree + 2);
  Tabulation ref = tabulate(sp.elem, rule.points);
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tab = push_forward(sp.elem, sp.geoms[c], ref);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(sp.n_local(), sp.n_local());
    for (int q = 0; q < rule.size(); ++q)
      A += rule.weights[q] * sp.geoms[c].detJ * tab.value[q] *
           tab.value[q].transpose();
    scatter_copies(sp, sp, sp.cell_dofs[c], sp.cell_dofs[c],
                   nodal_block(A, sp.coeff[c], sp.coeff[c]), trip);
  }
  SpMat M(sp.dim(), sp.dim());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SpMat grad_pairing(const FESpace& v1, const FESpace& vec) {
  check_same_mesh(v1, vec, "grad_pairing");
  if (v1.elem.family != Family::LE)
    throw std::invalid_argument("grad_pairing: rows must be a Lagrange space");
  const Mesh& mesh = *v1.mesh;
  QuadRule rule =
      simplex_rule(mesh.dim, v1.elem.degree + vec.elem.degree + 2);
  Tabulation ref1 = tabulate(v1.elem, rule.points);
  Tabulation refv = tabulate(vec.elem, rule.points);
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation t1 = push_forward(v1.elem, v1.geoms[c], ref1);
    Tabulation tv = push_forward(vec.elem, vec.geoms[c], refv);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(v1.n_local(), vec.n_local());
    for (int q = 0; q < rule.size(); ++q)
      A += rule.weights[q] * v1.geoms[c].detJ * scalar_grads(t1, q) *
           tv.value[q].transpose();
    scatter_copies(v1, vec, v1.cell_dofs[c], vec.cell_dofs[c],
                   nodal_block(A, v1.coeff[c], vec.coeff[c]), trip);
  }
  SpMat G(v1.dim(), vec.dim());
  G.setFromTriplets(trip.begin(), trip.end());
  return G;
}

SpMat metric_h1(const FESpace& v1) {
  if (v1.elem.family != Family::LE)
    throw std::invalid_argument("metric_h1: needs a Lagrange space");
  const Mesh& mesh = *v1.mesh;
  QuadRule rule = simplex_rule(mesh.dim, 2 * v1.elem.degree + 2);
  Tabulation ref = tabulate(v1.elem, rule.points);
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tab = push_forward(v1.elem, v1.geoms[c], ref);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(v1.n_local(), v1.n_local());
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * v1.geoms[c].detJ;
      Eigen::MatrixXd G = scalar_grads(tab, q);
      A += w * (tab.value[q] * tab.value[q].transpose() + G * G.transpose());
    }
    scatter_copies(v1, v1, v1.cell_dofs[c], v1.cell_dofs[c],
                   nodal_block(A, v1.coeff[c], v1.coeff[c]), trip);
  }
  SpMat D(v1.dim(), v1.dim());
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

SpMat metric_curl(const FESpace& vc) {
  if (vc.elem.family != Family::NED1 && vc.elem.family != Family::NED2)
    throw std::invalid_argument("metric_curl: needs a Nedelec space");
  const Mesh& mesh = *vc.mesh;
  QuadRule rule = simplex_rule(mesh.dim, 2 * vc.elem.degree + 2);
  Tabulation ref = tabulate(vc.elem, rule.points);
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tab = push_forward(vc.elem, vc.geoms[c], ref);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(vc.n_local(), vc.n_local());
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * vc.geoms[c].detJ;
      A += w * tab.value[q] * tab.value[q].transpose();
      if (mesh.dim == 2) {
        Eigen::VectorXd cu(vc.n_local());
        for (int b = 0; b < vc.n_local(); ++b) cu[b] = curl2(tab.grad[q][b]);
        A += w * cu * cu.transpose();
      } else {
        Eigen::MatrixXd cu(vc.n_local(), 3);
        for (int b = 0; b < vc.n_local(); ++b)
          cu.row(b) = curl3(tab.grad[q][b]).transpose();
        A += w * cu * cu.transpose();
      }
    }
    scatter_copies(vc, vc, vc.cell_dofs[c], vc.cell_dofs[c],
                   nodal_block(A, vc.coeff[c], vc.coeff[c]), trip);
  }
  SpMat D(vc.dim(), vc.dim());
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

SpMat metric_div(const FESpace& vd) {
  if (vd.elem.family != Family::RT && vd.elem.family != Family::BDM)
    throw std::invalid_argument("metric_div: needs an RT/BDM space");
  const Mesh& mesh = *vd.mesh;
  QuadRule rule = simplex_rule(mesh.dim, 2 * vd.elem.degree + 2);
  Tabulation ref = tabulate(vd.elem, rule.points);
  std::vector<Triplet> trip;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tab = push_forward(vd.elem, vd.geoms[c], ref);
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(vd.n_local(), vd.n_local());
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * vd.geoms[c].detJ;
      Eigen::VectorXd dv(vd.n_local());
      for (int b = 0; b < vd.n_local(); ++b)
        dv[b] = divergence(tab.grad[q][b]);
      A += w * (tab.value[q] * tab.value[q].transpose() + dv * dv.transpose());
    }
    scatter_copies(vd, vd, vd.cell_dofs[c], vd.cell_dofs[c],
                   nodal_block(A, vd.coeff[c], vd.coeff[c]), trip);
  }
  SpMat D(vd.dim(), vd.dim());
  D.setFromTriplets(trip.begin(), trip.end());
  return D;
}

namespace {

/// Evaluate K_h (copies x n_comp) at quadrature point q on cell c from the
/// per-copy span coefficients W[r].
Eigen::MatrixXd field_at(const std::vector<Eigen::VectorXd>& W,
                         const Tabulation& tab, int q, int copies) {
  Eigen::MatrixXd K(copies, tab.value[q].cols());
  for (int r = 0; r < copies; ++r)
    K.row(r) = (tab.value[q].transpose() * W[r]).transpose();
  return K;
}

std::vector<Eigen::VectorXd> span_coeff_rows(const FESpace& sp,
                                             const Eigen::VectorXd& z, int c) {
  std::vector<Eigen::VectorXd> W(sp.copies);
  for (int r = 0; r < sp.copies; ++r) {
    Eigen::VectorXd zl(sp.n_local());
    for (int i = 0; i < sp.n_local(); ++i)
      zl[i] = z[sp.global_dof(r, sp.cell_dofs[c][i])];
    W[r] = sp.coeff[c] * zl;
  }
  return W;
}

}  // namespace

Eigen::VectorXd stress_moments(const FESpace& vd, const FESpace& vc,
                               const Eigen::VectorXd& k, const Material& mat) {
  check_same_mesh(vd, vc, "stress_moments");
  if (k.size() != vc.dim())
    throw std::invalid_argument("stress_moments: coefficient size mismatch");
  const Mesh& mesh = *vd.mesh;
  const int n = vd.copies;
  QuadRule rule = simplex_rule(
      mesh.dim, 2 * std::max(vc.elem.degree, vd.elem.degree) + 2);
  Tabulation refc = tabulate(vc.elem, rule.points);
  Tabulation refd = tabulate(vd.elem, rule.points);

  Eigen::VectorXd out = Eigen::VectorXd::Zero(vd.dim());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tc = push_forward(vc.elem, vc.geoms[c], refc);
    Tabulation td = push_forward(vd.elem, vd.geoms[c], refd);
    auto W = span_coeff_rows(vc, k, c);
    Eigen::MatrixXd Cd = vd.coeff[c];
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * vd.geoms[c].detJ;
      Eigen::MatrixXd K = field_at(W, tc, q, n);
      Eigen::MatrixXd P = mat.stress(K);
      // Nodal stress-space values (n_local x n).
      Eigen::MatrixXd Nd = Cd.transpose() * td.value[q];
      Eigen::MatrixXd contrib = w * Nd * P.transpose();  // n_local x copies
      for (int r = 0; r < n; ++r)
        for (int i = 0; i < vd.n_local(); ++i)
          out[vd.global_dof(r, vd.cell_dofs[c][i])] += contrib(i, r);
    }
  }
  return out;
}

SpMat stress_tangent(const FESpace& vd, const FESpace& vc,
                     const Eigen::VectorXd& k, const Material& mat) {
  check_same_mesh(vd, vc, "stress_tangent");
  if (k.size() != vc.dim())
    throw std::invalid_argument("stress_tangent: coefficient size mismatch");
  const Mesh& mesh = *vd.mesh;
  const int n = vd.copies;
  QuadRule rule = simplex_rule(
      mesh.dim, 2 * std::max(vc.elem.degree, vd.elem.degree) + 2);
  Tabulation refc = tabulate(vc.elem, rule.points);
  Tabulation refd = tabulate(vd.elem, rule.points);

  const int nl_d = vd.n_local(), nl_c = vc.n_local();
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(mesh.n_cells()) * nl_d * nl_c * n * n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tc = push_forward(vc.elem, vc.geoms[c], refc);
    Tabulation td = push_forward(vd.elem, vd.geoms[c], refd);
    auto W = span_coeff_rows(vc, k, c);
    Eigen::MatrixXd loc = Eigen::MatrixXd::Zero(n * nl_d, n * nl_c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * vd.geoms[c].detJ;
      Eigen::MatrixXd K = field_at(W, tc, q, n);
      Eigen::MatrixXd Nc = vc.coeff[c].transpose() * tc.value[q];
      Eigen::MatrixXd Nd = vd.coeff[c].transpose() * td.value[q];
      for (int s = 0; s < n; ++s)
        for (int j = 0; j < nl_c; ++j) {
          M.setZero();
          M.row(s) = Nc.row(j);
          Eigen::MatrixXd AM = mat.tangent(K, M);
          for (int r = 0; r < n; ++r)
            loc.block(r * nl_d, s * nl_c + j, nl_d, 1) +=
                w * (Nd * AM.row(r).transpose());
        }
    }
    for (int r = 0; r < n; ++r)
      for (int i = 0; i < nl_d; ++i)
        for (int s = 0; s < n; ++s)
          for (int j = 0; j < nl_c; ++j) {
            const double v = loc(r * nl_d + i, s * nl_c + j);
            if (v != 0.0)
              trip.emplace_back(vd.global_dof(r, vd.cell_dofs[c][i]),
                                vc.global_dof(s, vc.cell_dofs[c][j]), v);
          }
  }
  SpMat S(vd.dim(), vc.dim());
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

Eigen::VectorXd body_load(
    const FESpace& v1,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& B) {
  const Mesh& mesh = *v1.mesh;
  QuadRule rule = simplex_rule(mesh.dim, v1.elem.degree + 4);
  Tabulation ref = tabulate(v1.elem, rule.points);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v1.dim());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Tabulation tab = push_forward(v1.elem, v1.geoms[c], ref);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = rule.weights[q] * v1.geoms[c].detJ;
      Eigen::VectorXd x =
          v1.geoms[c].to_physical(rule.points.row(q).transpose());
      Eigen::VectorXd bv = B(x);
      if (bv.size() != v1.copies)
        throw std::invalid_argument("body_load: field size mismatch");
      Eigen::VectorXd N = v1.coeff[c].transpose() * tab.value[q].col(0);
      for (int r = 0; r < v1.copies; ++r)
        for (int i = 0; i < v1.n_local(); ++i)
          out[v1.global_dof(r, v1.cell_dofs[c][i])] += w * bv[r] * N[i];
    }
  }
  return out;
}

Eigen::VectorXd traction_load(
    const FESpace& v1, const std::string& tag,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& T) {
  const Mesh& mesh = *v1.mesh;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v1.dim());

  for (int f : mesh.tagged_facets(tag)) {
    const int c = mesh.facet_cells[f][0];
    auto fv = mesh.facet_vertices(f);
    // Facet quadrature in physical coordinates.
    Eigen::MatrixXd pts;
    Eigen::VectorXd wts;
    if (mesh.dim == 2) {
      QuadRule gl = gauss_legendre_01(4);
      Eigen::Vector2d a = mesh.vertices.row(fv[0]);
      Eigen::Vector2d b = mesh.vertices.row(fv[1]);
      pts.resize(gl.size(), 2);
      wts.resize(gl.size());
      for (int q = 0; q < gl.size(); ++q) {
        pts.row(q) = (a + gl.points(q, 0) * (b - a)).transpose();
        wts[q] = gl.weights[q] * (b - a).norm();
      }
    } else {
      QuadRule tri = simplex_rule(2, 4);
      Eigen::Vector3d p0 = mesh.vertices.row(fv[0]);
      Eigen::Vector3d u = mesh.vertices.row(fv[1]).transpose() - p0;
      Eigen::Vector3d v = mesh.vertices.row(fv[2]).transpose() - p0;
      const double scale = u.cross(v).norm();
      pts.resize(tri.size(), 3);
      wts.resize(tri.size());
      for (int q = 0; q < tri.size(); ++q) {
        pts.row(q) =
            (p0 + tri.points(q, 0) * u + tri.points(q, 1) * v).transpose();
        wts[q] = tri.weights[q] * scale;
      }
    }

    Eigen::MatrixXd ref_pts(pts.rows(), mesh.dim);
    for (int q = 0; q < pts.rows(); ++q)
      ref_pts.row(q) =
          v1.geoms[c].to_reference(pts.row(q).transpose()).transpose();
    Tabulation tab = push_forward(v1.elem, v1.geoms[c],
                                  tabulate(v1.elem, ref_pts));
    for (int q = 0; q < pts.rows(); ++q) {
      Eigen::VectorXd tv = T(pts.row(q).transpose());
      if (tv.size() != v1.copies)
        throw std::invalid_argument("traction_load: field size mismatch");
      Eigen::VectorXd N = v1.coeff[c].transpose() * tab.value[q].col(0);
      for (int r = 0; r < v1.copies; ++r)
        for (int i = 0; i < v1.n_local(); ++i)
          out[v1.global_dof(r, v1.cell_dofs[c][i])] += wts[q] * tv[r] * N[i];
    }
  }
  return out;
}

SpMat compose_tangent(const SpMat& s1d, const SpMat& sc1, const SpMat& scc,
                      const SpMat& sdc, const SpMat& sdd) {
  const int n1 = static_cast<int>(s1d.rows());
  const int nc = static_cast<int>(sc1.rows());
  const int nd = static_cast<int>(s1d.cols());
  if (sc1.cols() != n1 || scc.rows() != nc || scc.cols() != nc ||
      sdc.rows() != nd || sdc.cols() != nc || sdd.rows() != nd ||
      sdd.cols() != nd)
    throw std::invalid_argument("compose_tangent: block shape mismatch");

  std::vector<Triplet> trip;
  trip.reserve(s1d.nonZeros() + sc1.nonZeros() + scc.nonZeros() +
               sdc.nonZeros() + sdd.nonZeros());
  auto add = [&](const SpMat& A, int roff, int coff) {
    for (int k = 0; k < A.outerSize(); ++k)
      for (SpMat::InnerIterator it(A, k); it; ++it)
        trip.emplace_back(static_cast<int>(it.row()) + roff,
                          static_cast<int>(it.col()) + coff, it.value());
  };
  add(s1d, 0, n1 + nc);
  add(sc1, n1, 0);
  add(scc, n1, n1);
  add(sdc, n1 + nc, n1);
  add(sdd, n1 + nc, n1 + nc);

  SpMat S(n1 + nc + nd, n1 + nc + nd);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

DirichletReduction make_reduction(int n, std::vector<int> constrained,
                                  Eigen::VectorXd values) {
  if (static_cast<int>(constrained.size()) != values.size())
    throw std::invalid_argument("make_reduction: index/value size mismatch");
  // Sort indices keeping values aligned.
  std::vector<int> order(constrained.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return constrained[a] < constrained[b]; });

  DirichletReduction red;
  red.n = n;
  red.constrained.reserve(constrained.size());
  red.values.resize(values.size());
  int prev = -1;
  int w = 0;
  for (int idx : order) {
    const int dof = constrained[idx];
    if (dof < 0 || dof >= n)
      throw std::invalid_argument("make_reduction: dof index out of range");
    if (dof == prev)
      throw std::invalid_argument("make_reduction: duplicate constrained dof");
    prev = dof;
    red.constrained.push_back(dof);
    red.values[w++] = values[idx];
  }
  red.values.conservativeResize(w);

  red.full_to_free.assign(n, -1);
  int pos = 0;
  size_t ci = 0;
  for (int i = 0; i < n; ++i) {
    if (ci < red.constrained.size() && red.constrained[ci] == i) {
      ++ci;
      continue;
    }
    red.free.push_back(i);
    red.full_to_free[i] = pos++;
  }
  return red;
}

std::pair<SpMat, Eigen::VectorXd> apply_dirichlet(
    const SpMat& A, const Eigen::VectorXd& b, const DirichletReduction& red) {
  if (A.rows() != red.n || A.cols() != red.n || b.size() != red.n)
    throw std::invalid_argument("apply_dirichlet: size mismatch");

  // Position of each constrained dof within the reduction.
  std::vector<int> cpos(red.n, -1);
  for (size_t i = 0; i < red.constrained.size(); ++i)
    cpos[red.constrained[i]] = static_cast<int>(i);

  Eigen::VectorXd bf = restrict_free(red, b);
  std::vector<Triplet> trip;
  trip.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int fr = red.full_to_free[it.row()];
      if (fr < 0) continue;
      const int fc = red.full_to_free[it.col()];
      if (fc >= 0)
        trip.emplace_back(fr, fc, it.value());
      else
        bf[fr] -= it.value() * red.values[cpos[it.col()]];
    }
  SpMat Aff(red.n_free(), red.n_free());
  Aff.setFromTriplets(trip.begin(), trip.end());
  return {std::move(Aff), std::move(bf)};
}

Eigen::VectorXd expand_free(const DirichletReduction& red,
                            const Eigen::VectorXd& xf) {
  if (xf.size() != red.n_free())
    throw std::invalid_argument("expand_free: size mismatch");
  Eigen::VectorXd x(red.n);
  for (int i = 0; i < red.n_free(); ++i) x[red.free[i]] = xf[i];
  for (size_t i = 0; i < red.constrained.size(); ++i)
    x[red.constrained[i]] = red.values[i];
  return x;
}

Eigen::VectorXd restrict_free(const DirichletReduction& red,
                              const Eigen::VectorXd& x) {
  if (x.size() != red.n)
    throw std::invalid_argument("restrict_free: size mismatch");
  Eigen::VectorXd xf(red.n_free());
  for (int i = 0; i < red.n_free(); ++i) xf[i] = x[red.free[i]];
  return xf;
}

}  // namespace tfe
