#ifndef MLAFEM_MESH_HPP
#define MLAFEM_MESH_HPP

#include "domain.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "sparse.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mlafem {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  bool boundary_flag = false;

  [[nodiscard]] Point2 point() const { return {x, y}; }
};

/// v[0] is the newest vertex; the refinement edge is v[1]-v[2].
struct Triangle {
  std::array<int, 3> v{};
  std::optional<int> parent;
  int generation = 0;
};

/// Edge between two vertices of the active mesh. `elements[1]` is -1 on the boundary.
struct Edge {
  std::array<int, 2> v{};
  std::array<int, 2> elements{-1, -1};

  [[nodiscard]] bool is_boundary() const { return elements[1] < 0; }
};

/// Local geometric data of one active element. Local edge i is opposite
/// local vertex i.
struct ElementGeometry {
  std::array<Point2, 3> vertex{};
  double area = 0.0;
  double diameter = 0.0; // longest edge
  std::array<double, 3> edge_length{};
  std::array<Vec2, 3> normal{};       // outward unit normals
  std::array<Vec2, 3> grad_lambda{};  // gradients of the barycentric coordinates

  [[nodiscard]] Point2 centroid() const {
    return {(vertex[0].x + vertex[1].x + vertex[2].x) / 3.0, (vertex[0].y + vertex[1].y + vertex[2].y) / 3.0};
  }
  [[nodiscard]] Point2 map(double l0, double l1, double l2) const {
    return {l0 * vertex[0].x + l1 * vertex[1].x + l2 * vertex[2].x, l0 * vertex[0].y + l1 * vertex[1].y + l2 * vertex[2].y};
  }
  /// Gradient of a P1 function with nodal values u on this element.
  [[nodiscard]] Vec2 gradient(std::array<double, 3> u) const {
    return u[0] * grad_lambda[0] + u[1] * grad_lambda[1] + u[2] * grad_lambda[2];
  }
};

/// Conforming triangulation with a newest-vertex bisection genealogy.
///
/// Elements are addressed by their position in the active list (0 ..
/// num_elements()-1). Genealogy ids index `triangle()` and are stable across
/// refinement: triangles are appended and deactivated, never deleted. Vertex
/// indices are stable too, so a vertex vector of a coarser level is a prefix
/// of the finer one.
class Mesh {
public:
  Mesh() = default;

  /// Builds an initial mesh. Orientation is normalised to counterclockwise,
  /// and each triangle's refinement edge is set to its longest edge (ties go
  /// to the edge whose opposite vertex has the smallest index). Boundary flags,
  /// when given, must agree with the topological boundary.
  static Mesh from_arrays(std::span<const Point2> points, std::span<const std::array<int, 3>> triangles,
                          std::optional<std::vector<bool>> boundary_flags = std::nullopt) {
    Mesh m;
    m.hierarchy_id_ = next_hierarchy_id();
    m.vertices_.reserve(points.size());
    for (const Point2& p : points) m.vertices_.push_back({p.x, p.y, false});
    m.vertex_parents_.assign(points.size(), {-1, -1});
    const int nv = static_cast<int>(points.size());
    for (const auto& t : triangles) {
      for (int k : t) {
        if (k < 0 || k >= nv) throw GeometryError("triangle references vertex " + std::to_string(k) + " out of range");
      }
      std::array<int, 3> v = t;
      const double a2 = signed_area2(points[v[0]], points[v[1]], points[v[2]]);
      const double scale = std::max({distance(points[v[0]], points[v[1]]), distance(points[v[1]], points[v[2]]),
                                     distance(points[v[2]], points[v[0]])});
      if (!(std::abs(a2) > 1e-14 * scale * scale)) {
        throw GeometryError("degenerate triangle (" + std::to_string(v[0]) + "," + std::to_string(v[1]) + "," +
                            std::to_string(v[2]) + ")");
      }
      if (a2 < 0) std::swap(v[1], v[2]);
      // Rotate so that v[0] is opposite the longest edge.
      int best = 0;
      double best_len = -1.0;
      for (int i = 0; i < 3; ++i) {
        const double len = distance(points[v[(i + 1) % 3]], points[v[(i + 2) % 3]]);
        const bool longer = len > best_len * (1 + 1e-12);
        const bool tie = !longer && len >= best_len * (1 - 1e-12) && v[i] < v[best];
        if (longer || tie) {
          best = i;
          best_len = std::max(len, best_len);
        }
      }
      std::rotate(v.begin(), v.begin() + best, v.end());
      m.active_.push_back(static_cast<int>(m.triangles_.size()));
      m.triangles_.push_back({v, std::nullopt, 0});
    }
    m.rebuild_topology();
    std::vector<bool> topo(points.size(), false);
    for (const Edge& e : m.edges_) {
      if (e.is_boundary()) topo[e.v[0]] = topo[e.v[1]] = true;
    }
    if (boundary_flags) {
      if (boundary_flags->size() != points.size()) throw DimensionError("boundary flag count differs from vertex count");
      for (std::size_t i = 0; i < points.size(); ++i) {
        if ((*boundary_flags)[i] != topo[i]) {
          throw ConfigurationError("boundary flag of vertex " + std::to_string(i) + " disagrees with mesh topology");
        }
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) m.vertices_[i].boundary_flag = topo[i];
    m.rebuild_free_dofs();
    return m;
  }

  [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_elements() const noexcept { return static_cast<int>(active_.size()); }
  [[nodiscard]] int genealogy_size() const noexcept { return static_cast<int>(triangles_.size()); }
  [[nodiscard]] std::uint64_t hierarchy_id() const noexcept { return hierarchy_id_; }

  [[nodiscard]] const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const Vertex& vertex(int i) const { return vertices_[i]; }
  [[nodiscard]] Point2 point(int i) const { return vertices_[i].point(); }
  /// Endpoints of the edge a vertex was created on; {-1,-1} for initial vertices.
  [[nodiscard]] std::array<int, 2> vertex_parents(int i) const { return vertex_parents_[i]; }

  [[nodiscard]] const std::vector<int>& active() const noexcept { return active_; }
  [[nodiscard]] const Triangle& triangle(int genealogy_id) const { return triangles_[genealogy_id]; }
  [[nodiscard]] const Triangle& element(int e) const { return triangles_[active_[e]]; }
  [[nodiscard]] const std::array<int, 3>& element_vertices(int e) const { return element(e).v; }

  [[nodiscard]] const std::vector<Edge>& edges() const noexcept { return edges_; }
  /// Edge ids of element e; entry i is the edge opposite local vertex i.
  [[nodiscard]] const std::array<int, 3>& element_edges(int e) const { return element_edges_[e]; }
  [[nodiscard]] std::optional<int> find_edge(int a, int b) const {
    const auto it = edge_lookup_.find(edge_key(a, b));
    if (it == edge_lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Interior vertices in increasing order; these carry the H^1_0 unknowns.
  [[nodiscard]] const std::vector<int>& free_dofs() const noexcept { return free_dofs_; }
  [[nodiscard]] int num_free_dofs() const noexcept { return static_cast<int>(free_dofs_.size()); }

  [[nodiscard]] ElementGeometry geometry(int e) const {
    const auto& v = element_vertices(e);
    ElementGeometry g;
    for (int i = 0; i < 3; ++i) g.vertex[i] = point(v[i]);
    const double a2 = signed_area2(g.vertex[0], g.vertex[1], g.vertex[2]);
    if (!(a2 > 0)) throw GeometryError("non-positive area on element " + std::to_string(e));
    g.area = 0.5 * a2;
    for (int i = 0; i < 3; ++i) {
      const Point2 p = g.vertex[(i + 1) % 3];
      const Point2 q = g.vertex[(i + 2) % 3];
      const Vec2 t = q - p;
      const double len = norm(t);
      g.edge_length[i] = len;
      g.normal[i] = {t.y / len, -t.x / len};
      // grad lambda_i points from edge i towards vertex i with length 1/height.
      g.grad_lambda[i] = (-1.0 / a2) * Vec2{t.y, -t.x};
      g.diameter = std::max(g.diameter, len);
    }
    return g;
  }

  [[nodiscard]] double total_area() const {
    double s = 0.0;
    for (int e = 0; e < num_elements(); ++e) s += geometry(e).area;
    return s;
  }

  /// Smallest interior angle (radians) over all active elements.
  [[nodiscard]] double min_angle() const {
    double worst = std::numbers::pi;
    for (int e = 0; e < num_elements(); ++e) {
      const auto g = geometry(e);
      for (int i = 0; i < 3; ++i) {
        const Vec2 a = g.vertex[(i + 1) % 3] - g.vertex[i];
        const Vec2 b = g.vertex[(i + 2) % 3] - g.vertex[i];
        worst = std::min(worst, std::atan2(std::abs(cross(a, b)), dot(a, b)));
      }
    }
    return worst;
  }

  [[nodiscard]] int max_generation() const {
    int g = 0;
    for (int id : active_) g = std::max(g, triangles_[id].generation);
    return g;
  }

  /// Newest-vertex bisection of the marked elements followed by conforming
  /// closure. Every marked element is bisected at least once; no element is
  /// bisected more than twice.
  [[nodiscard]] Mesh refine(std::span<const int> marked) const {
    Mesh out = *this;
    if (marked.empty()) return out;
    const int ne = num_elements();
    std::vector<char> edge_marked(edges_.size(), 0);
    std::vector<int> work;
    auto mark_edge = [&](int ed) {
      if (edge_marked[ed]) return;
      edge_marked[ed] = 1;
      for (int el : edges_[ed].elements) {
        if (el >= 0) work.push_back(el);
      }
    };
    for (int e : marked) {
      if (e < 0 || e >= ne) throw DimensionError("marked element " + std::to_string(e) + " is not active");
      mark_edge(element_edges_[e][0]);
    }
    // Closure: an element with any bisected edge must bisect its refinement edge.
    while (!work.empty()) {
      const int e = work.back();
      work.pop_back();
      mark_edge(element_edges_[e][0]);
    }

    std::vector<int> midpoint_of(edges_.size(), -1);
    for (std::size_t ed = 0; ed < edges_.size(); ++ed) {
      if (!edge_marked[ed]) continue;
      const Edge& edge = edges_[ed];
      const Point2 m = midpoint(point(edge.v[0]), point(edge.v[1]));
      midpoint_of[ed] = static_cast<int>(out.vertices_.size());
      out.vertices_.push_back({m.x, m.y, edge.is_boundary()});
      out.vertex_parents_.push_back(edge.v);
    }

    std::vector<int> next_active;
    next_active.reserve(active_.size() * 2);
    for (int e = 0; e < ne; ++e) {
      const auto& ed = element_edges_[e];
      if (!edge_marked[ed[0]]) {
        next_active.push_back(active_[e]);
        continue;
      }
      const auto [left, right] = out.split(active_[e], midpoint_of[ed[0]]);
      // left = (m, v0, v1) holds the old edge v0-v1 (opposite v2), right = (m, v2, v0) the edge opposite v1.
      for (const auto& [child, old_edge] : {std::pair{left, ed[2]}, std::pair{right, ed[1]}}) {
        if (edge_marked[old_edge]) {
          const auto [a, b] = out.split(child, midpoint_of[old_edge]);
          next_active.push_back(a);
          next_active.push_back(b);
        } else {
          next_active.push_back(child);
        }
      }
    }
    out.active_ = std::move(next_active);
    out.rebuild_topology();
    out.rebuild_free_dofs();
    return out;
  }

  /// Uniform refinement: every element bisected `times` times.
  [[nodiscard]] Mesh refine_uniform(int times = 1) const {
    Mesh m = *this;
    for (int k = 0; k < times; ++k) {
      std::vector<int> all(static_cast<std::size_t>(m.num_elements()));
      for (int e = 0; e < m.num_elements(); ++e) all[e] = e;
      m = m.refine(all);
    }
    return m;
  }

  /// Topological and geometric consistency audit. Returns a description of the
  /// first violation found, or an empty string.
  [[nodiscard]] std::string audit(const DomainDef* domain = nullptr) const {
    for (int e = 0; e < num_elements(); ++e) {
      const auto& v = element_vertices(e);
      if (!(signed_area2(point(v[0]), point(v[1]), point(v[2])) > 0)) {
        return "element " + std::to_string(e) + " not counterclockwise";
      }
      const Triangle& t = element(e);
      if (t.parent) {
        const Triangle& p = triangles_[*t.parent];
        if (t.generation != p.generation + 1) return "generation mismatch on element " + std::to_string(e);
        for (int k : t.v) {
          const bool in_parent = std::find(p.v.begin(), p.v.end(), k) != p.v.end();
          const auto par = vertex_parents_[k];
          const bool is_ref_midpoint = (par[0] == p.v[1] && par[1] == p.v[2]) || (par[0] == p.v[2] && par[1] == p.v[1]);
          if (!in_parent && !is_ref_midpoint) return "element " + std::to_string(e) + " not nested in its parent";
        }
      } else if (t.generation != 0) {
        return "root element with nonzero generation";
      }
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& edge = edges_[i];
      const Point2 a = point(edge.v[0]);
      const Point2 b = point(edge.v[1]);
      if (edge.is_boundary()) {
        if (!vertices_[edge.v[0]].boundary_flag || !vertices_[edge.v[1]].boundary_flag) {
          return "hanging node: edge " + std::to_string(i) + " has one element but an interior endpoint";
        }
        if (domain && !domain->on_boundary(midpoint(a, b))) {
          return "hanging node: edge " + std::to_string(i) + " has one element but lies inside the domain";
        }
      } else {
        // The two elements must lie on opposite sides.
        auto apex = [&](int el) {
          for (int k : element_vertices(el)) {
            if (k != edge.v[0] && k != edge.v[1]) return point(k);
          }
          return a;
        };
        const double s0 = signed_area2(a, b, apex(edge.elements[0]));
        const double s1 = signed_area2(a, b, apex(edge.elements[1]));
        if (!(s0 * s1 < 0)) return "overlapping elements across edge " + std::to_string(i);
      }
    }
    if (domain) {
      for (const Vertex& v : vertices_) {
        if (v.boundary_flag != domain->on_boundary(v.point())) return "boundary flag wrong at vertex";
      }
      const double area = total_area();
      if (std::abs(area - domain->area()) > 1e-12 * domain->area()) return "active area differs from domain area";
    }
    return {};
  }

  /// Brute-force point location. Returns the element index and barycentric
  /// coordinates, or nullopt when p is outside the mesh.
  [[nodiscard]] std::optional<std::pair<int, std::array<double, 3>>> locate(Point2 p, double tol = 1e-12) const {
    for (int e = 0; e < num_elements(); ++e) {
      const auto& v = element_vertices(e);
      const auto bc = barycentric(p, point(v[0]), point(v[1]), point(v[2]));
      if (bc[0] >= -tol && bc[1] >= -tol && bc[2] >= -tol) return std::pair{e, bc};
    }
    return std::nullopt;
  }

  /// Value at p of the P1 function with vertex values u.
  [[nodiscard]] double evaluate(std::span<const double> u, Point2 p) const {
    const auto hit = locate(p);
    if (!hit) throw GeometryError("evaluation point outside the mesh");
    const auto& v = element_vertices(hit->first);
    return hit->second[0] * u[v[0]] + hit->second[1] * u[v[1]] + hit->second[2] * u[v[2]];
  }

  /// True if this mesh's genealogy extends `coarse`'s (same hierarchy, shared
  /// prefix of vertices and triangles).
  [[nodiscard]] bool descends_from(const Mesh& coarse) const {
    if (hierarchy_id_ != coarse.hierarchy_id_) return false;
    if (coarse.vertices_.size() > vertices_.size() || coarse.triangles_.size() > triangles_.size()) return false;
    for (std::size_t i = 0; i < coarse.vertices_.size(); ++i) {
      if (vertices_[i].x != coarse.vertices_[i].x || vertices_[i].y != coarse.vertices_[i].y) return false;
    }
    for (std::size_t i = 0; i < coarse.triangles_.size(); ++i) {
      if (triangles_[i].v != coarse.triangles_[i].v || triangles_[i].parent != coarse.triangles_[i].parent) return false;
    }
    std::vector<char> coarse_active(coarse.triangles_.size(), 0);
    for (int id : coarse.active_) coarse_active[id] = 1;
    for (int id : active_) {
      int t = id;
      while (t >= static_cast<int>(coarse_active.size()) || !coarse_active[t]) {
        if (!triangles_[t].parent) return false;
        t = *triangles_[t].parent;
      }
    }
    return true;
  }

  /// Genealogy id of the ancestor of element e that is active in `coarse`.
  [[nodiscard]] int ancestor_in(const Mesh& coarse, int e) const {
    std::vector<char> coarse_active(coarse.triangles_.size(), 0);
    for (int id : coarse.active_) coarse_active[id] = 1;
    int t = active_[e];
    while (t >= static_cast<int>(coarse_active.size()) || !coarse_active[t]) {
      if (!triangles_[t].parent) throw HierarchyError("element has no ancestor in the coarse mesh");
      t = *triangles_[t].parent;
    }
    return t;
  }

private:
  static std::uint64_t next_hierarchy_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
  }

  static std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  std::pair<int, int> split(int id, int mid) {
    const Triangle t = triangles_[id];
    const int first = static_cast<int>(triangles_.size());
    triangles_.push_back({{mid, t.v[0], t.v[1]}, id, t.generation + 1});
    triangles_.push_back({{mid, t.v[2], t.v[0]}, id, t.generation + 1});
    return {first, first + 1};
  }

  void rebuild_topology() {
    edges_.clear();
    edge_lookup_.clear();
    edge_lookup_.reserve(active_.size() * 2);
    element_edges_.assign(active_.size(), {-1, -1, -1});
    for (int e = 0; e < num_elements(); ++e) {
      const auto& v = element_vertices(e);
      for (int i = 0; i < 3; ++i) {
        const int a = v[(i + 1) % 3];
        const int b = v[(i + 2) % 3];
        const auto [it, inserted] = edge_lookup_.try_emplace(edge_key(a, b), static_cast<int>(edges_.size()));
        if (inserted) {
          edges_.push_back({{std::min(a, b), std::max(a, b)}, {e, -1}});
        } else {
          Edge& edge = edges_[it->second];
          if (edge.elements[1] >= 0) {
            throw GeometryError("edge (" + std::to_string(a) + "," + std::to_string(b) + ") shared by more than two elements");
          }
          edge.elements[1] = e;
        }
        element_edges_[e][i] = it->second;
      }
    }
  }

  void rebuild_free_dofs() {
    free_dofs_.clear();
    for (int i = 0; i < num_vertices(); ++i) {
      if (!vertices_[i].boundary_flag) free_dofs_.push_back(i);
    }
  }

  std::uint64_t hierarchy_id_ = 0;
  std::vector<Vertex> vertices_;
  std::vector<std::array<int, 2>> vertex_parents_;
  std::vector<Triangle> triangles_;
  std::vector<int> active_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> edge_lookup_;
  std::vector<std::array<int, 3>> element_edges_;
  std::vector<int> free_dofs_;
};

/// Bisects the marked elements (positions in the active list) with closure.
inline Mesh bisect(const Mesh& mesh, std::span<const int> marked) { return mesh.refine(marked); }

/// Structured initial triangulation: `cells` squares per unit of side length
/// for the L-shape, per side for squares; each square is cut along its
/// lower-left to upper-right diagonal.
inline Mesh initial_mesh(const DomainDef& domain, int cells) {
  domain.validate();
  if (cells < 1) throw ConfigurationError("initial mesh needs at least one cell per side");
  const int n = domain.kind == DomainKind::l_shape ? 2 * cells : cells;
  const double h = (domain.hi - domain.lo) / n;
  std::vector<int> index(static_cast<std::size_t>((n + 1) * (n + 1)), -1);
  std::vector<Point2> points;
  auto coord = [&](int i) { return i == n ? domain.hi : domain.lo + i * h; };
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const Point2 p{coord(i), coord(j)};
      if (!domain.contains(p)) continue;
      index[j * (n + 1) + i] = static_cast<int>(points.size());
      points.push_back(p);
    }
  }
  std::vector<std::array<int, 3>> tris;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point2 centre{0.5 * (coord(i) + coord(i + 1)), 0.5 * (coord(j) + coord(j + 1))};
      if (!domain.contains(centre)) continue;
      const int p00 = index[j * (n + 1) + i];
      const int p10 = index[j * (n + 1) + i + 1];
      const int p11 = index[(j + 1) * (n + 1) + i + 1];
      const int p01 = index[(j + 1) * (n + 1) + i];
      tris.push_back({p00, p10, p11});
      tris.push_back({p00, p11, p01});
    }
  }
  return Mesh::from_arrays(points, tris);
}

/// Coarse-to-fine interpolation matrix (fine vertices x coarse vertices).
/// Row i holds the barycentric coordinates of fine vertex i in the coarse
/// element containing it.
inline SparseMatrix prolongation(const Mesh& coarse, const Mesh& fine) {
  if (!fine.descends_from(coarse)) throw HierarchyError("prolongation: fine mesh is not nested in the coarse mesh");
  const int nc = coarse.num_vertices();
  const int nf = fine.num_vertices();
  std::vector<std::vector<std::pair<int, double>>> rows(static_cast<std::size_t>(nf));
  for (int i = 0; i < nc; ++i) rows[i] = {{i, 1.0}};
  for (int i = nc; i < nf; ++i) {
    const auto par = fine.vertex_parents(i);
    auto& row = rows[i];
    for (int p : par) {
      for (const auto& [c, w] : rows[p]) {
        auto it = std::find_if(row.begin(), row.end(), [c = c](const auto& entry) { return entry.first == c; });
        if (it == row.end()) {
          row.emplace_back(c, 0.5 * w);
        } else {
          it->second += 0.5 * w;
        }
      }
    }
  }
  std::vector<Triplet> t;
  for (int i = 0; i < nf; ++i) {
    for (const auto& [c, w] : rows[i]) t.push_back({i, c, w});
  }
  return SparseMatrix::from_triplets(nf, nc, std::move(t));
}

} // namespace mlafem

#endif
