#include "tfe/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace tfe {

namespace {

// Parity of the permutation sorting three distinct values ascending.
int sort3_parity(std::array<int, 3> t) {
  int swaps = 0;
  if (t[0] > t[1]) { std::swap(t[0], t[1]); ++swaps; }
  if (t[1] > t[2]) { std::swap(t[1], t[2]); ++swaps; }
  if (t[0] > t[1]) { std::swap(t[0], t[1]); ++swaps; }
  return swaps % 2 == 0 ? 1 : -1;
}

void tag_facets(Mesh& mesh, const std::string& tag, std::vector<int> facets) {
  std::sort(facets.begin(), facets.end());
  mesh.tags[tag] = std::move(facets);
}

// Collect boundary facets whose vertices all satisfy `pred`.
template <class Pred>
std::vector<int> boundary_facets_where(const Mesh& mesh, Pred pred) {
  std::vector<int> out;
  for (int f : boundary_facets(mesh)) {
    bool all = true;
    for (int v : mesh.facet_vertices(f))
      if (!pred(mesh.vertices.row(v))) { all = false; break; }
    if (all) out.push_back(f);
  }
  return out;
}

}  // namespace

const std::vector<std::array<int, 2>>& Mesh::simplex_edges(int dim) {
  static const std::vector<std::array<int, 2>> tri = {{0, 1}, {0, 2}, {1, 2}};
  static const std::vector<std::array<int, 2>> tet = {{0, 1}, {0, 2}, {0, 3},
                                                      {1, 2}, {1, 3}, {2, 3}};
  if (dim == 2) return tri;
  if (dim == 3) return tet;
  throw std::invalid_argument("mesh: unsupported dimension");
}

const std::vector<std::array<int, 3>>& Mesh::tet_faces() {
  // Face k lists the vertices opposite local vertex k.
  static const std::vector<std::array<int, 3>> faces = {
      {1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  return faces;
}

std::vector<int> Mesh::facet_vertices(int facet) const {
  if (dim == 2) return {edges[facet][0], edges[facet][1]};
  return {faces[facet][0], faces[facet][1], faces[facet][2]};
}

const std::vector<int>& Mesh::tagged_facets(const std::string& tag) const {
  auto it = tags.find(tag);
  if (it == tags.end())
    throw std::invalid_argument("mesh: unknown tag '" + tag + "'");
  return it->second;
}

double cell_volume(const Mesh& mesh, int cell) {
  const auto& c = mesh.cells[cell];
  const int d = mesh.dim;
  Eigen::MatrixXd J(d, d);
  for (int i = 0; i < d; ++i)
    J.col(i) = (mesh.vertices.row(c[i + 1]) - mesh.vertices.row(c[0])).transpose();
  const double det = J.determinant();
  return det / (d == 2 ? 2.0 : 6.0);
}

double facet_measure(const Mesh& mesh, int facet) {
  const auto fv = mesh.facet_vertices(facet);
  if (mesh.dim == 2)
    return (mesh.vertices.row(fv[1]) - mesh.vertices.row(fv[0])).norm();
  const Eigen::Vector3d a = mesh.vertices.row(fv[1]) - mesh.vertices.row(fv[0]);
  const Eigen::Vector3d b = mesh.vertices.row(fv[2]) - mesh.vertices.row(fv[0]);
  return 0.5 * a.cross(b).norm();
}

Eigen::VectorXd boundary_facet_normal(const Mesh& mesh, int facet) {
  if (mesh.facet_cells[facet][1] != -1)
    throw std::invalid_argument("mesh: normal requested on interior facet");
  const auto fv = mesh.facet_vertices(facet);
  Eigen::VectorXd n(mesh.dim);
  if (mesh.dim == 2) {
    const Eigen::Vector2d t =
        (mesh.vertices.row(fv[1]) - mesh.vertices.row(fv[0])).normalized();
    n << t.y(), -t.x();
  } else {
    const Eigen::Vector3d a = mesh.vertices.row(fv[1]) - mesh.vertices.row(fv[0]);
    const Eigen::Vector3d b = mesh.vertices.row(fv[2]) - mesh.vertices.row(fv[0]);
    n = a.cross(b).normalized();
  }
  // Orient away from the unique incident cell's centroid.
  const auto& c = mesh.cells[mesh.facet_cells[facet][0]];
  Eigen::VectorXd centroid = Eigen::VectorXd::Zero(mesh.dim);
  for (int v : c) centroid += mesh.vertices.row(v).transpose();
  centroid /= static_cast<double>(c.size());
  const Eigen::VectorXd mid = mesh.vertices.row(fv[0]).transpose();
  if (n.dot(mid - centroid) < 0) n = -n;
  return n;
}

void derive_topology(Mesh& mesh) {
  const int d = mesh.dim;
  if (d != 2 && d != 3) throw std::invalid_argument("mesh: dim must be 2 or 3");
  const int nv = mesh.n_vertices();
  if (mesh.vertices.cols() != d)
    throw std::invalid_argument("mesh: vertex coordinate width != dim");

  std::set<std::vector<int>> seen;
  for (const auto& c : mesh.cells) {
    if (static_cast<int>(c.size()) != d + 1)
      throw std::invalid_argument("mesh: cell with wrong vertex count");
    for (int v : c)
      if (v < 0 || v >= nv)
        throw std::invalid_argument("mesh: cell references missing vertex");
    std::vector<int> s(c);
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      throw std::invalid_argument("mesh: degenerate cell (repeated vertex)");
    if (!seen.insert(s).second)
      throw std::invalid_argument("mesh: duplicate cell");
  }
  for (int e = 0; e < mesh.n_cells(); ++e)
    if (cell_volume(mesh, e) <= 0.0)
      throw std::invalid_argument("mesh: cell with non-positive volume");

  // Edges: unique ascending pairs in lexicographic order.
  const auto& etab = Mesh::simplex_edges(d);
  std::set<std::array<int, 2>> eset;
  for (const auto& c : mesh.cells)
    for (const auto& le : etab) {
      int a = c[le[0]], b = c[le[1]];
      eset.insert({std::min(a, b), std::max(a, b)});
    }
  mesh.edges.assign(eset.begin(), eset.end());
  std::map<std::array<int, 2>, int> eidx;
  for (int i = 0; i < mesh.n_edges(); ++i) eidx[mesh.edges[i]] = i;

  mesh.cell_edges.assign(mesh.n_cells(), {});
  mesh.cell_edge_signs.assign(mesh.n_cells(), {});
  for (int e = 0; e < mesh.n_cells(); ++e) {
    const auto& c = mesh.cells[e];
    for (const auto& le : etab) {
      int a = c[le[0]], b = c[le[1]];
      mesh.cell_edges[e].push_back(eidx[{std::min(a, b), std::max(a, b)}]);
      mesh.cell_edge_signs[e].push_back(a < b ? 1 : -1);
    }
  }

  // Faces (3D): unique ascending triples in lexicographic order.
  mesh.faces.clear();
  mesh.cell_faces.assign(mesh.n_cells(), {});
  mesh.cell_face_signs.assign(mesh.n_cells(), {});
  if (d == 3) {
    std::set<std::array<int, 3>> fset;
    for (const auto& c : mesh.cells)
      for (const auto& lf : Mesh::tet_faces()) {
        std::array<int, 3> t = {c[lf[0]], c[lf[1]], c[lf[2]]};
        std::sort(t.begin(), t.end());
        fset.insert(t);
      }
    mesh.faces.assign(fset.begin(), fset.end());
    std::map<std::array<int, 3>, int> fidx;
    for (int i = 0; i < mesh.n_faces(); ++i) fidx[mesh.faces[i]] = i;
    for (int e = 0; e < mesh.n_cells(); ++e) {
      const auto& c = mesh.cells[e];
      for (const auto& lf : Mesh::tet_faces()) {
        std::array<int, 3> t = {c[lf[0]], c[lf[1]], c[lf[2]]};
        mesh.cell_face_signs[e].push_back(sort3_parity(t));
        std::sort(t.begin(), t.end());
        mesh.cell_faces[e].push_back(fidx[t]);
      }
    }
  }

  // Facet -> cell incidence; every facet must touch one or two cells.
  const int nf = mesh.n_facets();
  mesh.facet_cells.assign(nf, {-1, -1});
  const auto& cell_facets = (d == 2) ? mesh.cell_edges : mesh.cell_faces;
  for (int e = 0; e < mesh.n_cells(); ++e)
    for (int f : cell_facets[e]) {
      auto& fc = mesh.facet_cells[f];
      if (fc[0] == -1) fc[0] = e;
      else if (fc[1] == -1) fc[1] = e;
      else throw std::invalid_argument("mesh: facet shared by more than 2 cells");
    }
}

MeshStats stats(const Mesh& mesh) {
  MeshStats s;
  s.n_v = mesh.n_vertices();
  s.n_ed = mesh.n_edges();
  s.n_f = mesh.n_faces();
  s.n_e = mesh.n_cells();
  for (const auto& c : mesh.cells) {
    const auto& etab = Mesh::simplex_edges(mesh.dim);
    for (const auto& le : etab) {
      const double len =
          (mesh.vertices.row(c[le[0]]) - mesh.vertices.row(c[le[1]])).norm();
      s.h = std::max(s.h, len);
    }
  }
  return s;
}

std::vector<int> boundary_facets(const Mesh& mesh) {
  std::vector<int> out;
  for (int f = 0; f < mesh.n_facets(); ++f)
    if (mesh.facet_cells[f][1] == -1) out.push_back(f);
  return out;
}

std::vector<bool> boundary_vertex_mask(const Mesh& mesh) {
  std::vector<bool> mask(mesh.n_vertices(), false);
  for (int f : boundary_facets(mesh))
    for (int v : mesh.facet_vertices(f)) mask[v] = true;
  return mask;
}

Mesh structured_square(int m) {
  if (m < 1) throw std::invalid_argument("structured_square: m >= 1 required");
  Mesh mesh;
  mesh.dim = 2;
  const int n = m + 1;
  mesh.vertices.resize(n * n, 2);
  auto vid = [n](int i, int j) { return j * n + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      mesh.vertices.row(vid(i, j)) << double(i) / m, double(j) / m;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  derive_topology(mesh);
  tag_facets(mesh, "gamma1", boundary_facets(mesh));
  return mesh;
}

Mesh structured_cube(int m) {
  if (m < 1) throw std::invalid_argument("structured_cube: m >= 1 required");
  Mesh mesh;
  mesh.dim = 3;
  const int n = m + 1;
  mesh.vertices.resize(n * n * n, 3);
  auto vid = [n](int i, int j, int k) { return (k * n + j) * n + i; };
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        mesh.vertices.row(vid(i, j, k)) << double(i) / m, double(j) / m,
            double(k) / m;
  // Kuhn subdivision: each subcube splits along vertex-increment paths
  // 0 -> e_{s0} -> e_{s0}+e_{s1} -> (1,1,1) over all permutations s.
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        for (const auto& s : perms) {
          int p[3] = {i, j, k};
          std::vector<int> tet = {vid(p[0], p[1], p[2])};
          for (int step = 0; step < 3; ++step) {
            ++p[s[step]];
            tet.push_back(vid(p[0], p[1], p[2]));
          }
          // Odd permutations give negative volume; swap the last two.
          int parity = (s[0] == 0 && s[1] == 1) || (s[0] == 1 && s[1] == 2) ||
                               (s[0] == 2 && s[1] == 0)
                           ? 1
                           : -1;
          if (parity < 0) std::swap(tet[2], tet[3]);
          mesh.cells.push_back(tet);
        }
  derive_topology(mesh);
  tag_facets(mesh, "gamma1", boundary_facets(mesh));
  return mesh;
}

Mesh cook_membrane_2d(int m) {
  if (m < 1) throw std::invalid_argument("cook_membrane_2d: m >= 1 required");
  Mesh mesh;
  mesh.dim = 2;
  const int n = m + 1;
  mesh.vertices.resize(n * n, 2);
  auto vid = [n](int i, int j) { return j * n + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double xi = double(i) / m, eta = double(j) / m;
      mesh.vertices.row(vid(i, j)) << 48.0 * xi,
          44.0 * xi + eta * (44.0 - 28.0 * xi);
    }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  derive_topology(mesh);
  const double tol = 1e-9;
  tag_facets(mesh, "gamma1", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(0)) < tol;
             }));
  tag_facets(mesh, "gamma2", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(0) - 48.0) < tol;
             }));
  return mesh;
}

Mesh cook_membrane_3d(int m, int mz) {
  if (m < 1) throw std::invalid_argument("cook_membrane_3d: m >= 1 required");
  if (mz <= 0) mz = std::max(1, (10 * m + 24) / 48);
  Mesh mesh;
  mesh.dim = 3;
  const int n = m + 1, nz = mz + 1;
  mesh.vertices.resize(n * n * nz, 3);
  auto vid = [n](int i, int j, int k) { return (k * n + j) * n + i; };
  for (int k = 0; k <= mz; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double xi = double(i) / m, eta = double(j) / m;
        mesh.vertices.row(vid(i, j, k)) << 48.0 * xi,
            44.0 * xi + eta * (44.0 - 28.0 * xi), 10.0 * k / mz;
      }
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < mz; ++k)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i)
        for (const auto& s : perms) {
          int p[3] = {i, j, k};
          std::vector<int> tet = {vid(p[0], p[1], p[2])};
          for (int step = 0; step < 3; ++step) {
            ++p[s[step]];
            tet.push_back(vid(p[0], p[1], p[2]));
          }
          // Fix inverted tets (logical parity or the tapered map).
          Eigen::Matrix3d J;
          for (int col = 0; col < 3; ++col)
            J.col(col) = (mesh.vertices.row(tet[col + 1]) -
                          mesh.vertices.row(tet[0]))
                             .transpose();
          if (J.determinant() < 0) std::swap(tet[2], tet[3]);
          mesh.cells.push_back(tet);
        }
  derive_topology(mesh);
  const double tol = 1e-9;
  tag_facets(mesh, "gamma1", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(0)) < tol;
             }));
  tag_facets(mesh, "gamma2", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(0) - 48.0) < tol;
             }));
  return mesh;
}

Mesh compression_block_2d(int m, const GeometryParams& p) {
  if (m < 1) throw std::invalid_argument("compression_block_2d: m >= 1 required");
  Mesh mesh;
  mesh.dim = 2;
  const int mx = 2 * m, my = m;
  const int nx = mx + 1, ny = my + 1;
  mesh.vertices.resize(nx * ny, 2);
  auto vid = [nx](int i, int j) { return j * nx + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      mesh.vertices.row(vid(i, j)) << p.width * i / mx, p.height * j / my;
  for (int j = 0; j < my; ++j)
    for (int i = 0; i < mx; ++i) {
      mesh.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      mesh.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  derive_topology(mesh);
  const double tol = 1e-9;
  tag_facets(mesh, "top", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(1) - p.height) < tol;
             }));
  tag_facets(mesh, "bottom", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(1)) < tol;
             }));
  tag_facets(mesh, "load", boundary_facets_where(mesh, [&](const auto& x) {
               return std::abs(x(1) - p.height) < tol &&
                      x(0) > p.load_x0 - tol && x(0) < p.load_x1 + tol;
             }));
  return mesh;
}

Mesh benchmark_geometry(const std::string& name, const GeometryParams& p) {
  if (name == "cook2d") return cook_membrane_2d(p.m);
  if (name == "cook3d") return cook_membrane_3d(p.m, p.mz);
  if (name == "compression2d") return compression_block_2d(p.m, p);
  throw std::invalid_argument("benchmark_geometry: unknown geometry '" + name +
                              "'");
}

Mesh jittered(const Mesh& mesh, double rel_amount, unsigned seed) {
  Mesh out = mesh;
  const auto on_boundary = boundary_vertex_mask(mesh);
  // Shortest incident edge per vertex bounds the displacement.
  std::vector<double> min_edge(mesh.n_vertices(),
                               std::numeric_limits<double>::max());
  for (const auto& e : mesh.edges) {
    const double len = (mesh.vertices.row(e[0]) - mesh.vertices.row(e[1])).norm();
    min_edge[e[0]] = std::min(min_edge[e[0]], len);
    min_edge[e[1]] = std::min(min_edge[e[1]], len);
  }
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(-0.5, 0.5);
  Eigen::MatrixXd offset = Eigen::MatrixXd::Zero(mesh.n_vertices(), mesh.dim);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    for (int d = 0; d < mesh.dim; ++d) {
      const double u = uni(rng);  // always consume, for determinism
      if (!on_boundary[v]) offset(v, d) = rel_amount * min_edge[v] * u;
    }
  }
  for (int attempt = 0; attempt < 12; ++attempt) {
    out.vertices = mesh.vertices + offset;
    bool ok = true;
    for (int e = 0; e < out.n_cells() && ok; ++e)
      if (cell_volume(out, e) <= 0.0) ok = false;
    if (ok) return out;
    offset *= 0.5;
  }
  out.vertices = mesh.vertices;
  return out;
}

}  // namespace tfe
