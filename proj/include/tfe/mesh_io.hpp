// Plain-text mesh serialization.
//
// Format:
//   dim n_vertices n_cells
//   <n_vertices coordinate lines>
//   <n_cells connectivity lines (dim+1 vertex ids)>
//   tags k
//   <k lines: facet vertex tuple followed by the tag name>
//
// Round-trips all Mesh fields; derived topology is rebuilt on read.
#pragma once

#include <string>

#include "tfe/mesh.hpp"

namespace tfe {

/// Parse a mesh from `path`. Throws std::runtime_error on malformed files
/// (bad header, missing vertices, out-of-range cell or tag references).
Mesh read_mesh(const std::string& path);

/// Write `mesh` to `path` in the plain-text format, full precision.
void write_mesh(const Mesh& mesh, const std::string& path);

}  // namespace tfe
