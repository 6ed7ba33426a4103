#pragma once

// Two-layer rectangular triangulation: rock salt at the bottom, overburden
// sediment on top. Nodes move with the body; connectivity never changes.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sla/tensor.hpp"

namespace sla {

enum class Region : std::uint8_t { Salt = 0, Sediment = 1 };

enum class BoundaryTag : std::uint8_t { TopFree, SideRoller, BottomRoller };

struct BoundaryEdge {
  std::array<int, 2> nodes{};
  BoundaryTag tag = BoundaryTag::TopFree;
  int triangle = -1;  ///< the single triangle owning this edge

  friend bool operator==(const BoundaryEdge&, const BoundaryEdge&) = default;
};

struct Geometry {
  double length = 0.0;           ///< m
  double salt_height = 0.0;      ///< m
  double sediment_height = 0.0;  ///< m
  int nx = 0;
  int ny_salt = 0;
  int ny_sediment = 0;

  double height() const { return salt_height + sediment_height; }
  double element_width() const { return length / nx; }

  friend bool operator==(const Geometry&, const Geometry&) = default;
};

/// Throws InvalidGeometry unless all dimensions and counts are positive.
void validate(const Geometry& g);

struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;  ///< counter-clockwise
  std::vector<Region> region;                 ///< one per triangle
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<int> interface_nodes;  ///< left to right along the salt-sediment interface

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_triangles() const { return triangles.size(); }
};

/// Structured (nx+1) x (ny_salt+ny_sediment+1) grid; each cell is split along
/// one diagonal whose direction alternates with the cell parity (i + j), so
/// the pattern is mirror-symmetric about the domain's vertical centre line
/// whenever nx is even.
Mesh build_two_layer_mesh(const Geometry& geom);

/// Nodes translated by u (one vector per node); connectivity and tags kept.
Mesh displace_nodes(const Mesh& mesh, std::span<const Vec2> u);

double signed_area(const Mesh& mesh, std::size_t triangle);

/// min over triangles of current / reference signed area. <= 0 means a
/// triangle has collapsed or inverted.
double min_area_ratio(const Mesh& mesh, const Mesh& reference);

std::vector<Vec2> extract_interface(const Mesh& mesh);

/// Outward unit normal of a boundary edge in current coordinates, oriented
/// away from the edge's owning triangle.
Vec2 boundary_normal(const Mesh& mesh, const BoundaryEdge& edge);

/// Per node: {x constrained, y constrained}. Side rollers fix x, the bottom
/// roller fixes y; corners where both meet are fully pinned.
std::vector<std::array<bool, 2>> roller_constraints(const Mesh& mesh);

}  // namespace sla
