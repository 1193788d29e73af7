#ifndef MLAFEM_IO_VTK_HPP
#define MLAFEM_IO_VTK_HPP

#include "../errors.hpp"
#include "../mesh.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mlafem::io {

struct VtkField {
  std::string name;
  std::span<const double> values;
};

/// Legacy ASCII unstructured grid. Point fields need one value per vertex,
/// cell fields one value per active element.
inline void write_vtk(std::ostream& os, const Mesh& mesh, std::span<const VtkField> point_data = {},
                      std::span<const VtkField> cell_data = {}, const std::string& title = "mlafem") {
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_elements();
  for (const auto& f : point_data) {
    if (static_cast<int>(f.values.size()) != nv) throw DimensionError("vtk: point field '" + f.name + "' has wrong length");
  }
  for (const auto& f : cell_data) {
    if (static_cast<int>(f.values.size()) != ne) throw DimensionError("vtk: cell field '" + f.name + "' has wrong length");
  }
  os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << std::setprecision(17);
  os << "POINTS " << nv << " double\n";
  for (const Vertex& v : mesh.vertices()) os << v.x << ' ' << v.y << " 0\n";
  os << "CELLS " << ne << ' ' << 4 * ne << '\n';
  for (int e = 0; e < ne; ++e) {
    const auto& t = mesh.element_vertices(e);
    os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  os << "CELL_TYPES " << ne << '\n';
  for (int e = 0; e < ne; ++e) os << "5\n";
  if (!point_data.empty()) {
    os << "POINT_DATA " << nv << '\n';
    for (const auto& f : point_data) {
      os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double x : f.values) os << x << '\n';
    }
  }
  if (!cell_data.empty()) {
    os << "CELL_DATA " << ne << '\n';
    for (const auto& f : cell_data) {
      os << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (double x : f.values) os << x << '\n';
    }
  }
}

inline void write_vtk_file(const std::string& path, const Mesh& mesh, std::span<const VtkField> point_data = {},
                           std::span<const VtkField> cell_data = {}) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_vtk(out, mesh, point_data, cell_data);
}

} // namespace mlafem::io

#endif
