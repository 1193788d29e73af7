#ifndef MLAFEM_IO_MESH_IO_HPP
#define MLAFEM_IO_MESH_IO_HPP

#include "../errors.hpp"
#include "../mesh.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mlafem::io {

// Text format:
//   nv nt
//   x y boundary_flag      (nv lines)
//   v0 v1 v2               (nt lines, 0-based)

inline void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  os << std::setprecision(17);
  for (const Vertex& v : mesh.vertices()) os << v.x << ' ' << v.y << ' ' << (v.boundary_flag ? 1 : 0) << '\n';
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& t = mesh.element_vertices(e);
    os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
}

inline Mesh read_mesh(std::istream& is) {
  long nv = 0, nt = 0;
  if (!(is >> nv >> nt)) throw ParseError("mesh file: missing 'nv nt' header");
  if (nv < 3 || nt < 1) throw ParseError("mesh file: need at least 3 vertices and 1 triangle");
  std::vector<Point2> points(static_cast<std::size_t>(nv));
  std::vector<bool> flags(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    int flag = 0;
    if (!(is >> points[i].x >> points[i].y >> flag)) throw ParseError("mesh file: bad vertex line " + std::to_string(i));
    if (flag != 0 && flag != 1) throw ParseError("mesh file: boundary flag must be 0 or 1 on vertex " + std::to_string(i));
    flags[i] = flag == 1;
  }
  std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(nt));
  for (long i = 0; i < nt; ++i) {
    if (!(is >> tris[i][0] >> tris[i][1] >> tris[i][2])) throw ParseError("mesh file: bad triangle line " + std::to_string(i));
  }
  std::string extra;
  if (is >> extra) throw ParseError("mesh file: trailing content '" + extra + "'");
  return Mesh::from_arrays(points, tris, flags);
}

inline Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

inline void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write mesh file '" + path + "'");
  write_mesh(out, mesh);
}

} // namespace mlafem::io

#endif
