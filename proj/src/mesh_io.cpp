#include "tfe/mesh_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tfe {

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_mesh: cannot open '" + path + "'");
  Mesh mesh;
  int nv = 0, ne = 0;
  if (!(in >> mesh.dim >> nv >> ne))
    throw std::runtime_error("read_mesh: malformed header");
  if (mesh.dim != 2 && mesh.dim != 3)
    throw std::runtime_error("read_mesh: dim must be 2 or 3");
  if (nv <= 0 || ne <= 0)
    throw std::runtime_error("read_mesh: non-positive counts");
  mesh.vertices.resize(nv, mesh.dim);
  for (int v = 0; v < nv; ++v)
    for (int d = 0; d < mesh.dim; ++d)
      if (!(in >> mesh.vertices(v, d)))
        throw std::runtime_error("read_mesh: truncated vertex list");
  mesh.cells.assign(ne, std::vector<int>(mesh.dim + 1));
  for (int e = 0; e < ne; ++e)
    for (int i = 0; i <= mesh.dim; ++i) {
      if (!(in >> mesh.cells[e][i]))
        throw std::runtime_error("read_mesh: truncated cell list");
      if (mesh.cells[e][i] < 0 || mesh.cells[e][i] >= nv)
        throw std::runtime_error("read_mesh: cell references missing vertex");
    }
  derive_topology(mesh);

  std::string kw;
  if (in >> kw) {
    if (kw != "tags") throw std::runtime_error("read_mesh: expected 'tags'");
    int k = 0;
    if (!(in >> k) || k < 0)
      throw std::runtime_error("read_mesh: malformed tag count");
    // Facet lookup by sorted vertex tuple.
    std::map<std::vector<int>, int> facet_idx;
    for (int f = 0; f < mesh.n_facets(); ++f)
      facet_idx[mesh.facet_vertices(f)] = f;
    const int tuple = mesh.dim;  // 2 vertex ids in 2D, 3 in 3D
    for (int line = 0; line < k; ++line) {
      std::vector<int> fv(tuple);
      for (int i = 0; i < tuple; ++i)
        if (!(in >> fv[i]))
          throw std::runtime_error("read_mesh: truncated tag line");
      std::string name;
      if (!(in >> name))
        throw std::runtime_error("read_mesh: tag line without a name");
      std::sort(fv.begin(), fv.end());
      auto it = facet_idx.find(fv);
      if (it == facet_idx.end())
        throw std::runtime_error("read_mesh: tag references unknown facet");
      mesh.tags[name].push_back(it->second);
    }
    for (auto& [name, facets] : mesh.tags) std::sort(facets.begin(), facets.end());
  }
  return mesh;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh: cannot open '" + path + "'");
  out << std::setprecision(17);
  out << mesh.dim << ' ' << mesh.n_vertices() << ' ' << mesh.n_cells() << '\n';
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    for (int d = 0; d < mesh.dim; ++d)
      out << (d ? " " : "") << mesh.vertices(v, d);
    out << '\n';
  }
  for (const auto& c : mesh.cells) {
    for (size_t i = 0; i < c.size(); ++i) out << (i ? " " : "") << c[i];
    out << '\n';
  }
  int k = 0;
  for (const auto& [name, facets] : mesh.tags) k += static_cast<int>(facets.size());
  out << "tags " << k << '\n';
  for (const auto& [name, facets] : mesh.tags)
    for (int f : facets) {
      for (int v : mesh.facet_vertices(f)) out << v << ' ';
      out << name << '\n';
    }
  if (!out) throw std::runtime_error("write_mesh: write failure on '" + path + "'");
}

}  // namespace tfe
