#include "sla/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sla/errors.hpp"

namespace sla {

void validate(const Geometry& g) {
  if (!(g.length > 0.0) || !(g.salt_height > 0.0) || !(g.sediment_height > 0.0)) {
    throw InvalidGeometry("domain dimensions must be positive");
  }
  if (g.nx < 1 || g.ny_salt < 1 || g.ny_sediment < 1) {
    throw InvalidGeometry("element counts must be at least 1 (nx=" + std::to_string(g.nx) +
                          ", ny_salt=" + std::to_string(g.ny_salt) +
                          ", ny_sediment=" + std::to_string(g.ny_sediment) + ")");
  }
}

Mesh build_two_layer_mesh(const Geometry& geom) {
  validate(geom);
  const int nx = geom.nx;
  const int ny = geom.ny_salt + geom.ny_sediment;
  const int row = nx + 1;
  auto id = [row](int i, int j) { return j * row + i; };

  Mesh mesh;
  mesh.nodes.reserve(static_cast<std::size_t>(row) * (ny + 1));
  const double dx = geom.length / nx;
  const double dy_salt = geom.salt_height / geom.ny_salt;
  const double dy_sed = geom.sediment_height / geom.ny_sediment;
  for (int j = 0; j <= ny; ++j) {
    const double y = j <= geom.ny_salt
                         ? j * dy_salt
                         : geom.salt_height + (j - geom.ny_salt) * dy_sed;
    for (int i = 0; i <= nx; ++i) {
      // Pin the last column exactly to the domain length.
      const double x = i == nx ? geom.length : i * dx;
      mesh.nodes.push_back({x, y});
    }
  }

  // Triangle index of the owner of each boundary edge, recorded while splitting.
  std::vector<int> bottom_owner(nx), top_owner(nx), left_owner(ny), right_owner(ny);

  mesh.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
  for (int j = 0; j < ny; ++j) {
    const Region reg = j < geom.ny_salt ? Region::Salt : Region::Sediment;
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n01 = id(i, j + 1), n11 = id(i + 1, j + 1);
      const int first = static_cast<int>(mesh.triangles.size());
      if ((i + j) % 2 == 0) {
        // diagonal n00 - n11
        mesh.triangles.push_back({n00, n10, n11});
        mesh.triangles.push_back({n00, n11, n01});
        if (j == 0) bottom_owner[i] = first;
        if (j == ny - 1) top_owner[i] = first + 1;
        if (i == 0) left_owner[j] = first + 1;
        if (i == nx - 1) right_owner[j] = first;
      } else {
        // diagonal n10 - n01
        mesh.triangles.push_back({n00, n10, n01});
        mesh.triangles.push_back({n10, n11, n01});
        if (j == 0) bottom_owner[i] = first;
        if (j == ny - 1) top_owner[i] = first + 1;
        if (i == 0) left_owner[j] = first;
        if (i == nx - 1) right_owner[j] = first + 1;
      }
      mesh.region.push_back(reg);
      mesh.region.push_back(reg);
    }
  }

  // Edges are listed in counter-clockwise order around the domain.
  for (int i = 0; i < nx; ++i) {
    mesh.boundary_edges.push_back({{id(i, 0), id(i + 1, 0)}, BoundaryTag::BottomRoller,
                                   bottom_owner[i]});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary_edges.push_back({{id(nx, j), id(nx, j + 1)}, BoundaryTag::SideRoller,
                                   right_owner[j]});
  }
  for (int i = nx; i > 0; --i) {
    mesh.boundary_edges.push_back({{id(i, ny), id(i - 1, ny)}, BoundaryTag::TopFree,
                                   top_owner[i - 1]});
  }
  for (int j = ny; j > 0; --j) {
    mesh.boundary_edges.push_back({{id(0, j), id(0, j - 1)}, BoundaryTag::SideRoller,
                                   left_owner[j - 1]});
  }

  mesh.interface_nodes.reserve(row);
  for (int i = 0; i <= nx; ++i) mesh.interface_nodes.push_back(id(i, geom.ny_salt));
  return mesh;
}

Mesh displace_nodes(const Mesh& mesh, std::span<const Vec2> u) {
  if (u.size() != mesh.nodes.size()) {
    throw ValidationError("displacement field size does not match node count");
  }
  Mesh out = mesh;
  for (std::size_t i = 0; i < u.size(); ++i) out.nodes[i] += u[i];
  return out;
}

double signed_area(const Mesh& mesh, std::size_t triangle) {
  const auto& t = mesh.triangles[triangle];
  const Vec2& a = mesh.nodes[t[0]];
  return 0.5 * cross(mesh.nodes[t[1]] - a, mesh.nodes[t[2]] - a);
}

double min_area_ratio(const Mesh& mesh, const Mesh& reference) {
  if (mesh.triangles.size() != reference.triangles.size()) {
    throw ValidationError("meshes do not share connectivity");
  }
  double ratio = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    ratio = std::min(ratio, signed_area(mesh, t) / signed_area(reference, t));
  }
  return ratio;
}

std::vector<Vec2> extract_interface(const Mesh& mesh) {
  std::vector<Vec2> line;
  line.reserve(mesh.interface_nodes.size());
  for (int n : mesh.interface_nodes) line.push_back(mesh.nodes[n]);
  return line;
}

Vec2 boundary_normal(const Mesh& mesh, const BoundaryEdge& edge) {
  const Vec2& a = mesh.nodes[edge.nodes[0]];
  const Vec2& b = mesh.nodes[edge.nodes[1]];
  const Vec2 d = b - a;
  const double len = norm(d);
  Vec2 n{d.y / len, -d.x / len};
  if (edge.triangle >= 0) {
    const auto& t = mesh.triangles[edge.triangle];
    for (int v : t) {
      if (v == edge.nodes[0] || v == edge.nodes[1]) continue;
      if (dot(n, mesh.nodes[v] - a) > 0.0) n = -n;
    }
  }
  return n;
}

std::vector<std::array<bool, 2>> roller_constraints(const Mesh& mesh) {
  std::vector<std::array<bool, 2>> fixed(mesh.nodes.size(), {false, false});
  for (const auto& e : mesh.boundary_edges) {
    for (int n : e.nodes) {
      if (e.tag == BoundaryTag::SideRoller) fixed[n][0] = true;
      if (e.tag == BoundaryTag::BottomRoller) fixed[n][1] = true;
    }
  }
  return fixed;
}

}  // namespace sla
