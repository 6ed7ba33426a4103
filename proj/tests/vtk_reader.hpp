#pragma once

// Minimal legacy-VTK (ASCII, UNSTRUCTURED_GRID) reader used only to check
// the snapshot writer.

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sla::test {

struct VtkFile {
  std::string version_line;
  std::string title;
  std::vector<std::array<double, 3>> points;
  std::vector<std::vector<long>> cells;
  std::vector<int> cell_types;
  std::map<std::string, std::vector<double>> cell_scalars;
  std::map<std::string, std::vector<std::array<double, 3>>> point_vectors;
};

/// Throws std::runtime_error on any structural problem.
VtkFile read_vtk(const std::filesystem::path& path);

}  // namespace sla::test
