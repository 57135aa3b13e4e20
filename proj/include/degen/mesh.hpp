#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace degen {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Mesh edge with its globally fixed unit normal. For interior edges the
/// normal points out of the lower-numbered adjacent cell, for boundary edges
/// it points out of the domain.
struct Edge {
  std::array<int, 2> vertices{};
  Point normal;
};

/// Edge reference from inside a cell. `sign` is +1 when the global edge
/// normal is the outward normal of this cell and -1 otherwise.
struct CellEdge {
  int edge = -1;
  int sign = 0;
};

/// Structured conforming triangulation of the unit square.
///
/// Each of the n x n squares is split along its lower-left to upper-right
/// diagonal. Cell vertices are stored counterclockwise and local edge k is
/// the edge opposite local vertex k. All indices are deterministic functions
/// of the grid position, so two builds with the same n are identical.
class Mesh {
 public:
  /// Throws std::invalid_argument for n < 1.
  static Mesh structured_unit_square(int n);

  int subdivisions() const { return n_; }
  double h() const { return 1.0 / n_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_cells() const { return cells_.size(); }

  std::span<const Point> vertices() const { return vertices_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::array<int, 3>> cells() const { return cells_; }
  std::span<const std::array<CellEdge, 3>> cell_edges() const { return cell_edges_; }
  std::span<const int> boundary_edges() const { return boundary_edges_; }

  bool is_boundary_edge(int edge) const { return edge_cell_count_.at(edge) == 1; }

  /// Plain-text dump (vertex list followed by cell list) for plotting.
  void write_text(std::ostream& os) const;

 private:
  Mesh() = default;

  int n_ = 0;
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> cells_;
  std::vector<std::array<CellEdge, 3>> cell_edges_;
  std::vector<int> boundary_edges_;
  std::vector<int> edge_cell_count_;
};

struct EdgeGeometry {
  double length = 0.0;
  Point midpoint;
  /// Converts the global edge normal into the outward normal of the cell.
  int outward_sign = 0;
};

struct CellGeometry {
  double area = 0.0;
  Point barycenter;
  std::array<EdgeGeometry, 3> edges{};
};

/// Throws std::invalid_argument for an out-of-range cell index.
CellGeometry cell_geometry(const Mesh& mesh, int cell);

}  // namespace degen
