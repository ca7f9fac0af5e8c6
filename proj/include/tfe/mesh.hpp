// Simplicial meshes (triangles, tetrahedra): benchmark geometry generators,
// derived edge/face topology with deterministic global orientations, boundary
// tagging, and mesh statistics.
//
// Global orientation rules: an edge runs from its lower to its higher vertex
// index; a face is identified by its ascending vertex-index triple. Derived
// entities are numbered in lexicographic order of their sorted vertex tuples,
// so two constructions of the same mesh agree exactly.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

namespace tfe {

/// Simplicial mesh with globally oriented derived entities. Immutable after
/// construction; safe to share read-only across workers.
struct Mesh {
  int dim = 2;
  Eigen::MatrixXd vertices;             ///< n_vertices x dim
  std::vector<std::vector<int>> cells;  ///< dim+1 vertex ids, positive volume

  // Derived topology (filled by derive_topology).
  std::vector<std::array<int, 2>> edges;  ///< ascending pairs, lex order
  std::vector<std::array<int, 3>> faces;  ///< 3D only: ascending triples
  std::vector<std::vector<int>> cell_edges;       ///< per cell, local order
  std::vector<std::vector<int>> cell_edge_signs;  ///< +1 local dir == global
  std::vector<std::vector<int>> cell_faces;       ///< 3D only
  std::vector<std::vector<int>> cell_face_signs;  ///< permutation parity
  /// Per facet (edge in 2D, face in 3D): incident cells; second is -1 on the
  /// boundary. First cell = lowest incident cell index.
  std::vector<std::array<int, 2>> facet_cells;

  /// Tag name -> sorted facet indices. Tags may overlap.
  std::map<std::string, std::vector<int>> tags;

  int n_vertices() const { return static_cast<int>(vertices.rows()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_faces() const { return static_cast<int>(faces.size()); }
  int n_facets() const { return dim == 2 ? n_edges() : n_faces(); }

  /// Vertex ids of a facet (2 in 2D, 3 in 3D, ascending).
  std::vector<int> facet_vertices(int facet) const;
  /// Facet indices tagged with `tag`; throws std::invalid_argument if absent.
  const std::vector<int>& tagged_facets(const std::string& tag) const;

  /// Local edge table of the reference simplex: pairs of local vertex ids.
  static const std::vector<std::array<int, 2>>& simplex_edges(int dim);
  /// Local face table of the tetrahedron: face k is opposite vertex k.
  static const std::vector<std::array<int, 3>>& tet_faces();
};

/// Entity counts and the mesh size h = maximum cell diameter.
struct MeshStats {
  int n_v = 0, n_ed = 0, n_f = 0, n_e = 0;
  double h = 0.0;
};

/// Unit square [0,1]^2, m x m quads each split along the (i,j)->(i+1,j+1)
/// diagonal; 2m^2 triangles. Whole boundary tagged "gamma1". Requires m >= 1.
Mesh structured_square(int m);

/// Unit cube, m^3 subcubes in 6 tetrahedra each (Kuhn subdivision along the
/// main diagonal); 6m^3 tets. Whole boundary tagged "gamma1". Requires m >= 1.
Mesh structured_cube(int m);

/// Geometry parameters for benchmark_geometry. Unused fields are ignored.
struct GeometryParams {
  int m = 2;             ///< in-plane subdivisions
  int mz = 0;            ///< cook3d: thickness subdivisions (0 = proportional)
  double width = 20.0;   ///< compression2d block width (mm)
  double height = 10.0;  ///< compression2d block height (mm)
  double load_x0 = 5.0;  ///< compression2d loaded segment start (mm)
  double load_x1 = 15.0; ///< compression2d loaded segment end (mm)
};

/// Tapered Cook membrane (0,0),(48,44),(48,60),(0,44) mm, m x m grid split
/// into triangles. Tags: "gamma1" (clamped edge x=0), "gamma2" (loaded edge
/// x=48).
Mesh cook_membrane_2d(int m);

/// Cook cross-section extruded 10 mm in Z and split into tetrahedra
/// (conformal Kuhn pattern on the logical grid). Tags as in 2D.
/// mz = 0 picks a thickness subdivision proportional to m.
Mesh cook_membrane_3d(int m, int mz = 0);

/// Rectangular block (default 20 x 10 mm), 2m x m grid. Tags: "top" (y =
/// height), "bottom" (y = 0), "load" (top facets inside [load_x0, load_x1]).
/// Use even m so the loaded segment ends on mesh nodes.
Mesh compression_block_2d(int m, const GeometryParams& p = GeometryParams{});

/// Dispatch by name: "cook2d", "cook3d", "compression2d".
/// Throws std::invalid_argument for unknown names.
Mesh benchmark_geometry(const std::string& name, const GeometryParams& p);

/// Fill derived topology (edges, faces, incidences, facet_cells) and validate:
/// cells must be distinct non-degenerate positive-volume simplices referencing
/// existing vertices, and every facet must touch one or two cells.
void derive_topology(Mesh& mesh);

/// Entity counts and h (maximum over cells of the longest edge).
MeshStats stats(const Mesh& mesh);

/// Copy of `mesh` with interior vertices displaced by a deterministic
/// pseudo-random offset of magnitude <= rel_amount x (shortest incident
/// edge). Retries with halved offsets until all cell volumes stay positive.
Mesh jittered(const Mesh& mesh, double rel_amount, unsigned seed);

/// Facet indices lying on the boundary (exactly one incident cell).
std::vector<int> boundary_facets(const Mesh& mesh);
/// True if the vertex lies on any boundary facet.
std::vector<bool> boundary_vertex_mask(const Mesh& mesh);

/// Signed volume of a cell (area in 2D).
double cell_volume(const Mesh& mesh, int cell);
/// Measure of a facet (length in 2D, area in 3D).
double facet_measure(const Mesh& mesh, int facet);
/// Unit normal of a boundary facet pointing out of its unique cell.
/// Throws std::invalid_argument on interior facets.
Eigen::VectorXd boundary_facet_normal(const Mesh& mesh, int facet);

}  // namespace tfe
