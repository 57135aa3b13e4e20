#include "degen/mesh.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

namespace degen {

namespace {

// Outward unit normal of the directed edge a->b of a counterclockwise cell.
Point right_normal(const Point& a, const Point& b) {
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const double len = std::hypot(dx, dy);
  return {dy / len, -dx / len};
}

}  // namespace

Mesh Mesh::structured_unit_square(int n) {
  if (n < 1) {
    throw std::invalid_argument("structured_unit_square: n must be >= 1, got " + std::to_string(n));
  }
  Mesh mesh;
  mesh.n_ = n;

  const int nv = n + 1;
  mesh.vertices_.reserve(static_cast<std::size_t>(nv) * nv);
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.vertices_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    }
  }
  auto vertex = [nv](int i, int j) { return j * nv + i; };

  // Edge numbering: horizontal, then vertical, then diagonal.
  const int num_horizontal = n * (n + 1);
  const int num_vertical = n * (n + 1);
  auto horizontal = [n](int i, int j) { return j * n + i; };
  auto vertical = [n, num_horizontal](int i, int j) { return num_horizontal + j * (n + 1) + i; };
  auto diagonal = [n, num_horizontal, num_vertical](int i, int j) {
    return num_horizontal + num_vertical + j * n + i;
  };

  mesh.edges_.resize(static_cast<std::size_t>(num_horizontal + num_vertical + n * n));
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.edges_[horizontal(i, j)].vertices = {vertex(i, j), vertex(i + 1, j)};
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= n; ++i) {
      mesh.edges_[vertical(i, j)].vertices = {vertex(i, j), vertex(i, j + 1)};
    }
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.edges_[diagonal(i, j)].vertices = {vertex(i, j), vertex(i + 1, j + 1)};
    }
  }

  mesh.cells_.reserve(static_cast<std::size_t>(2 * n * n));
  std::vector<std::array<int, 3>> local_edges;
  local_edges.reserve(static_cast<std::size_t>(2 * n * n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vertex(i, j);
      const int v10 = vertex(i + 1, j);
      const int v11 = vertex(i + 1, j + 1);
      const int v01 = vertex(i, j + 1);
      // lower-right triangle, then upper-left triangle; local edge k opposite vertex k
      mesh.cells_.push_back({v00, v10, v11});
      local_edges.push_back({vertical(i + 1, j), diagonal(i, j), horizontal(i, j)});
      mesh.cells_.push_back({v00, v11, v01});
      local_edges.push_back({horizontal(i, j + 1), vertical(i, j), diagonal(i, j)});
    }
  }

  // Cells are visited in increasing order, so the first visitor of an edge is
  // its lower-numbered neighbour and fixes the global normal.
  mesh.edge_cell_count_.assign(mesh.edges_.size(), 0);
  mesh.cell_edges_.resize(mesh.cells_.size());
  for (std::size_t c = 0; c < mesh.cells_.size(); ++c) {
    const auto& cv = mesh.cells_[c];
    for (int k = 0; k < 3; ++k) {
      const int e = local_edges[c][k];
      const Point& a = mesh.vertices_[cv[(k + 1) % 3]];
      const Point& b = mesh.vertices_[cv[(k + 2) % 3]];
      const Point outward = right_normal(a, b);
      int sign = 1;
      if (mesh.edge_cell_count_[e] == 0) {
        mesh.edges_[e].normal = outward;
      } else {
        sign = -1;
      }
      ++mesh.edge_cell_count_[e];
      mesh.cell_edges_[c][k] = {e, sign};
    }
  }

  for (std::size_t e = 0; e < mesh.edges_.size(); ++e) {
    if (mesh.edge_cell_count_[e] == 1) mesh.boundary_edges_.push_back(static_cast<int>(e));
  }
  return mesh;
}

void Mesh::write_text(std::ostream& os) const {
  os << "# vertices " << vertices_.size() << '\n';
  for (const auto& p : vertices_) os << p.x << ' ' << p.y << '\n';
  os << "# cells " << cells_.size() << '\n';
  for (const auto& c : cells_) os << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
}

CellGeometry cell_geometry(const Mesh& mesh, int cell) {
  if (cell < 0 || static_cast<std::size_t>(cell) >= mesh.num_cells()) {
    throw std::invalid_argument("cell_geometry: cell index " + std::to_string(cell) + " out of range");
  }
  const auto& cv = mesh.cells()[cell];
  const auto verts = mesh.vertices();
  const Point& p0 = verts[cv[0]];
  const Point& p1 = verts[cv[1]];
  const Point& p2 = verts[cv[2]];

  CellGeometry geo;
  geo.area = 0.5 * ((p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y));
  geo.barycenter = {(p0.x + p1.x + p2.x) / 3.0, (p0.y + p1.y + p2.y) / 3.0};
  const auto& ce = mesh.cell_edges()[cell];
  for (int k = 0; k < 3; ++k) {
    const Point& a = verts[cv[(k + 1) % 3]];
    const Point& b = verts[cv[(k + 2) % 3]];
    geo.edges[k].length = std::hypot(b.x - a.x, b.y - a.y);
    geo.edges[k].midpoint = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
    geo.edges[k].outward_sign = ce[k].sign;
  }
  return geo;
}

}  // namespace degen
