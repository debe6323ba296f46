#include "fraktur/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <tuple>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"

namespace fraktur {

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::DirichletMinus: return "DirichletMinus";
    case BoundaryTag::DirichletPlus: return "DirichletPlus";
    case BoundaryTag::Free: return "Free";
  }
  return "?";
}

BoundaryTag parse_boundary_tag(std::string_view name) {
  if (name == "DirichletMinus") return BoundaryTag::DirichletMinus;
  if (name == "DirichletPlus") return BoundaryTag::DirichletPlus;
  if (name == "Free") return BoundaryTag::Free;
  throw InvalidArgument("unknown boundary tag '" + std::string(name) + "'");
}

bool TriMesh::operator==(const TriMesh& other) const {
  if (vertices.size() != other.vertices.size()) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].x() != other.vertices[i].x() || vertices[i].y() != other.vertices[i].y()) return false;
  return triangles == other.triangles && boundary_edges == other.boundary_edges && seam_pairs == other.seam_pairs;
}

namespace {

double distance_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool inside_polygon(const Vec2& p, const std::vector<Vec2>& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

double distance_to_band(const Vec2& p, const std::vector<Vec2>& band) {
  if (band.size() == 1) return (p - band[0]).norm();
  if (band.size() >= 3 && inside_polygon(p, band)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  const std::size_t edges = band.size() >= 3 ? band.size() : 1;
  for (std::size_t i = 0; i < edges; ++i) d = std::min(d, distance_to_segment(p, band[i], band[(i + 1) % band.size()]));
  return d;
}

bool on_domain_boundary(const Vec2& p, double a, double tol) {
  return std::abs(p.x()) <= tol || std::abs(p.y()) <= tol || std::abs(p.x() - 2 * a) <= tol ||
         std::abs(p.y() - 2 * a) <= tol;
}

bool is_corner(const Vec2& p, double a, double tol) {
  const bool xb = std::abs(p.x()) <= tol || std::abs(p.x() - 2 * a) <= tol;
  const bool yb = std::abs(p.y()) <= tol || std::abs(p.y() - 2 * a) <= tol;
  return xb && yb;
}

using CellKey = std::tuple<int, int, int>;  // level, i, j

class Quadtree {
 public:
  Quadtree(int roots, int levels) : roots_(roots), levels_(levels) {}

  std::set<CellKey> leaves;

  int cells_at(int level) const { return roots_ << level; }

  // Level of the leaf covering cell (level, i, j), or -1 if that cell is subdivided.
  int covering_level(int level, int i, int j) const {
    for (int l = level; l >= 0; --l) {
      if (leaves.count({l, i >> (level - l), j >> (level - l)})) return l;
    }
    return -1;
  }

  void split(const CellKey& c) {
    const auto [l, i, j] = c;
    leaves.erase(c);
    for (int dj = 0; dj < 2; ++dj)
      for (int di = 0; di < 2; ++di) leaves.insert({l + 1, 2 * i + di, 2 * j + dj});
  }

  // Refine until edge-adjacent leaves differ by at most one level.
  void balance() {
    static constexpr int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (;;) {
      std::set<CellKey> to_split;
      for (const auto& [l, i, j] : leaves) {
        if (l < 2) continue;
        const int n = cells_at(l);
        for (const auto& d : dirs) {
          const int ni = i + d[0], nj = j + d[1];
          if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
          const int cl = covering_level(l, ni, nj);
          if (cl >= 0 && cl < l - 1) to_split.insert({cl, ni >> (l - cl), nj >> (l - cl)});
        }
      }
      if (to_split.empty()) return;
      for (const auto& c : to_split) split(c);
    }
  }

  int levels() const { return levels_; }

 private:
  int roots_;
  int levels_;
};

struct Grid {
  int levels = 0;    // refinement levels below the coarse cells
  int fine = 0;      // fine cells per side
  double a = 1.0;
  double fine_size() const { return 2.0 * a / fine; }
  // Node keys live on the half-fine-cell lattice.
  Vec2 coord(int ix, int iy) const { return Vec2(a * ix / fine, a * iy / fine); }
  int half_units(double v) const { return static_cast<int>(std::lround(v * fine / a)); }
  bool on_lattice(double v, int step_half) const {
    const double u = v * fine / a;
    const long r = std::lround(u);
    return std::abs(u - static_cast<double>(r)) <= 1e-9 && r % step_half == 0;
  }
};

Grid make_grid(const DomainSpec& spec) {
  Grid g;
  g.a = spec.a;
  g.levels = spec.h_max > spec.h_min ? static_cast<int>(std::floor(std::log2(spec.h_max / spec.h_min) + 1e-12)) : 0;
  const int m = 8 << g.levels;
  g.fine = m * static_cast<int>(std::ceil(2.0 * spec.a / (m * spec.h_min) - 1e-12));
  return g;
}

void validate_spec(const DomainSpec& spec, const Grid& grid) {
  if (!(spec.a > 0.0)) throw InvalidArgument("domain half-side a must be positive");
  if (!(spec.h_min > 0.0) || !(spec.h_max >= spec.h_min))
    throw InvalidArgument("mesh sizes must satisfy 0 < h_min <= h_max");
  if (spec.band_width < 0.0) throw InvalidArgument("refinement band width must be non-negative");
  const double tol = 1e-12 * spec.a;
  for (std::size_t k = 0; k < spec.slits.size(); ++k) {
    const Segment& s = spec.slits[k];
    const std::string id = "slit " + std::to_string(k) + ": ";
    for (const Vec2& p : {s.a, s.b}) {
      if (p.x() < -tol || p.y() < -tol || p.x() > 2 * spec.a + tol || p.y() > 2 * spec.a + tol)
        throw InvalidArgument(id + "endpoint outside the domain");
      if (is_corner(p, spec.a, tol)) throw InvalidArgument(id + "endpoint on a domain corner");
    }
    const bool vertical = s.a.x() == s.b.x();
    const bool horizontal = s.a.y() == s.b.y();
    if (vertical == horizontal) throw InvalidArgument(id + "must be a non-degenerate axis-aligned segment");
    const double len = (s.b - s.a).norm();
    if (!(len > spec.h_min)) throw InvalidArgument(id + "length " + fmt17(len) + " does not exceed h_min");
    const double line = vertical ? s.a.x() : s.a.y();
    if (std::abs(line) <= tol || std::abs(line - 2 * spec.a) <= tol)
      throw InvalidArgument(id + "lies on the domain boundary");
    for (double v : {s.a.x(), s.a.y(), s.b.x(), s.b.y()})
      if (!grid.on_lattice(v, 2))
        throw InvalidArgument(id + "endpoints must lie on the fine grid of size " + fmt17(grid.fine_size()));
  }
}

}  // namespace

std::vector<Vec2> slit_tips(const DomainSpec& spec) {
  std::vector<Vec2> tips;
  const double tol = 1e-12 * spec.a;
  for (const auto& s : spec.slits)
    for (const Vec2& p : {s.a, s.b})
      if (!on_domain_boundary(p, spec.a, tol)) tips.push_back(p);
  return tips;
}

TriMesh build_slit_domain(const DomainSpec& spec) {
  const Grid grid = make_grid(spec);
  validate_spec(spec, grid);

  const int roots = grid.fine >> grid.levels;
  Quadtree tree(roots, grid.levels);
  const double fine = grid.fine_size();

  auto needs_refine = [&](int l, int i, int j) {
    if (l >= grid.levels) return false;
    const double cs = fine * (1 << (grid.levels - l));
    const Vec2 center((i + 0.5) * cs, (j + 0.5) * cs);
    const double r = cs * std::numbers::sqrt2 / 2.0;
    if (!spec.refinement_band.empty() && distance_to_band(center, spec.refinement_band) <= spec.band_width + r)
      return true;
    for (const auto& s : spec.slits)
      if (distance_to_segment(center, s.a, s.b) <= r * (1.0 + 1e-12)) return true;
    return false;
  };

  std::vector<CellKey> work;
  for (int j = 0; j < roots; ++j)
    for (int i = 0; i < roots; ++i) work.emplace_back(0, i, j);
  while (!work.empty()) {
    const auto [l, i, j] = work.back();
    work.pop_back();
    if (needs_refine(l, i, j)) {
      for (int dj = 0; dj < 2; ++dj)
        for (int di = 0; di < 2; ++di) work.emplace_back(l + 1, 2 * i + di, 2 * j + dj);
    } else {
      tree.leaves.insert({l, i, j});
    }
  }
  tree.balance();

  TriMesh mesh;
  std::map<std::pair<int, int>, int> node_of;
  auto node = [&](int ix, int iy) {
    auto [it, inserted] = node_of.try_emplace({ix, iy}, static_cast<int>(mesh.vertices.size()));
    if (inserted) mesh.vertices.push_back(grid.coord(ix, iy));
    return it->second;
  };

  for (const auto& [l, i, j] : tree.leaves) {
    const int hs = 1 << (grid.levels - l + 1);
    const int x0 = i * hs, y0 = j * hs;
    const int corners[4][2] = {{x0, y0}, {x0 + hs, y0}, {x0 + hs, y0 + hs}, {x0, y0 + hs}};
    const int side_dir[4][2] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
    const int c = node(x0 + hs / 2, y0 + hs / 2);
    const int n = tree.cells_at(l);
    for (int s = 0; s < 4; ++s) {
      const int p = node(corners[s][0], corners[s][1]);
      const int* qk = corners[(s + 1) % 4];
      const int ni = i + side_dir[s][0], nj = j + side_dir[s][1];
      const bool neighbour_finer = ni >= 0 && nj >= 0 && ni < n && nj < n && tree.covering_level(l, ni, nj) < 0;
      if (neighbour_finer) {
        const int m = node((corners[s][0] + qk[0]) / 2, (corners[s][1] + qk[1]) / 2);
        mesh.triangles.push_back({c, p, m});
        mesh.triangles.push_back({c, m, node(qk[0], qk[1])});
      } else {
        mesh.triangles.push_back({c, p, node(qk[0], qk[1])});
      }
    }
  }

  // Cut the slits open.
  const double tol = 1e-12 * spec.a;
  for (const auto& slit : spec.slits) {
    const bool vertical = slit.a.x() == slit.b.x();
    const int line = grid.half_units(vertical ? slit.a.x() : slit.a.y());
    int lo = grid.half_units(vertical ? slit.a.y() : slit.a.x());
    int hi = grid.half_units(vertical ? slit.b.y() : slit.b.x());
    if (lo > hi) std::swap(lo, hi);

    std::map<int, int> twin_of;
    for (int t = lo; t <= hi; ++t) {
      const std::pair<int, int> key = vertical ? std::pair{line, t} : std::pair{t, line};
      auto it = node_of.find(key);
      if (it == node_of.end()) continue;
      const Vec2 p = mesh.vertices[it->second];
      const bool endpoint = t == lo || t == hi;
      if (endpoint && !on_domain_boundary(p, spec.a, tol)) continue;  // crack tip stays connected
      const int twin = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(p);
      twin_of[it->second] = twin;
      mesh.seam_pairs.push_back({it->second, twin});
    }
    const double line_coord = vertical ? slit.a.x() : slit.a.y();
    for (auto& tri : mesh.triangles) {
      const Vec2 centroid = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
      const bool plus_side = (vertical ? centroid.x() : centroid.y()) > line_coord;
      if (!plus_side) continue;
      for (int& v : tri) {
        auto it = twin_of.find(v);
        if (it != twin_of.end()) v = it->second;
      }
    }
  }

  // Boundary edges are those used by a single triangle.
  std::map<std::pair<int, int>, std::pair<int, std::pair<int, int>>> edge_use;
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int u = tri[e], v = tri[(e + 1) % 3];
      auto& entry = edge_use[{std::min(u, v), std::max(u, v)}];
      ++entry.first;
      entry.second = {u, v};
    }
  for (const auto& [key, use] : edge_use) {
    if (use.first != 1) continue;
    const auto [u, v] = use.second;
    const Vec2 mid = 0.5 * (mesh.vertices[u] + mesh.vertices[v]);
    BoundaryTag tag = BoundaryTag::Free;
    for (const auto& ds : spec.dirichlet_segments)
      if (distance_to_segment(mid, ds.segment.a, ds.segment.b) <= 1e-9 * spec.a) {
        tag = ds.tag;
        break;
      }
    mesh.boundary_edges.push_back({u, v, tag});
  }
  return mesh;
}

TriMesh structured_rectangle(int nx, int ny, double x0, double y0, double x1, double y1) {
  if (nx < 1 || ny < 1 || !(x1 > x0) || !(y1 > y0)) throw InvalidArgument("structured_rectangle: bad extent");
  TriMesh mesh;
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.emplace_back(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  for (int i = 0; i < nx; ++i) {
    mesh.boundary_edges.push_back({id(i, 0), id(i + 1, 0), BoundaryTag::Free});
    mesh.boundary_edges.push_back({id(i + 1, ny), id(i, ny), BoundaryTag::Free});
  }
  for (int j = 0; j < ny; ++j) {
    mesh.boundary_edges.push_back({id(nx, j), id(nx, j + 1), BoundaryTag::Free});
    mesh.boundary_edges.push_back({id(0, j + 1), id(0, j), BoundaryTag::Free});
  }
  return mesh;
}

std::vector<int> boundary_nodes(const TriMesh& mesh, BoundaryTag tag) {
  std::set<int> seam;
  if (tag != BoundaryTag::Free)
    for (const auto& sp : mesh.seam_pairs) {
      seam.insert(sp.node);
      seam.insert(sp.twin);
    }
  std::set<int> nodes;
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != tag) continue;
    for (int v : {e.i, e.j})
      if (!seam.count(v)) nodes.insert(v);
  }
  return {nodes.begin(), nodes.end()};
}

double signed_area(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Vec2 e1 = mesh.vertices[tri[1]] - mesh.vertices[tri[0]];
  const Vec2 e2 = mesh.vertices[tri[2]] - mesh.vertices[tri[0]];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double total_area(const TriMesh& mesh) {
  double sum = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) sum += signed_area(mesh, t);
  return sum;
}

double min_angle_degrees(const TriMesh& mesh) {
  double worst = 180.0;
  for (const auto& tri : mesh.triangles)
    for (int k = 0; k < 3; ++k) {
      const Vec2 u = mesh.vertices[tri[(k + 1) % 3]] - mesh.vertices[tri[k]];
      const Vec2 v = mesh.vertices[tri[(k + 2) % 3]] - mesh.vertices[tri[k]];
      const double ang = std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
      worst = std::min(worst, ang * 180.0 / std::numbers::pi);
    }
  return worst;
}

std::vector<double> edge_lengths(const TriMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& tri : mesh.triangles)
    for (int e = 0; e < 3; ++e) edges.insert({std::min(tri[e], tri[(e + 1) % 3]), std::max(tri[e], tri[(e + 1) % 3])});
  std::vector<double> out;
  out.reserve(edges.size());
  for (const auto& [u, v] : edges) out.push_back((mesh.vertices[u] - mesh.vertices[v]).norm());
  return out;
}

void validate(const TriMesh& mesh) {
  const int nv = static_cast<int>(mesh.vertices.size());
  auto check_index = [nv](int v, const std::string& what) {
    if (v < 0 || v >= nv) throw InvalidArgument(what + " references vertex " + std::to_string(v) + " out of range");
  };
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    for (int v : mesh.triangles[t]) check_index(v, "triangle " + std::to_string(t));
    if (!(signed_area(mesh, t) > 0.0)) throw InvalidArgument("triangle " + std::to_string(t) + " has non-positive area");
  }
  for (const auto& e : mesh.boundary_edges) {
    check_index(e.i, "boundary edge");
    check_index(e.j, "boundary edge");
  }
  for (const auto& sp : mesh.seam_pairs) {
    check_index(sp.node, "seam pair");
    check_index(sp.twin, "seam pair");
    if (mesh.vertices[sp.node] != mesh.vertices[sp.twin])
      throw InvalidArgument("seam pair " + std::to_string(sp.node) + "/" + std::to_string(sp.twin) +
                            " has distinct coordinates");
  }
}

std::vector<std::string> preset_names() { return {"single_slit", "example1", "example2", "example3"}; }

DomainSpec preset_domain(std::string_view name, double a, double ell, double h_min, double h_max) {
  DomainSpec spec;
  spec.a = a;
  spec.h_min = h_min;
  spec.h_max = h_max;
  spec.band_width = 4.0 * ell;
  const auto P = [a](double x, double y) { return Vec2(x * a, y * a); };
  const auto minus = BoundaryTag::DirichletMinus;
  const auto plus = BoundaryTag::DirichletPlus;

  if (name == "single_slit" || name == "example1") {
    spec.slits = {{P(1, 1.5), P(1, 2)}};
    spec.dirichlet_segments = {{{P(0, 2), P(1, 2)}, minus}, {{P(1, 2), P(2, 2)}, plus}};
    if (name == "single_slit")
      spec.refinement_band = {P(1, 1.5), P(1, 0), P(2, 0.5)};
    else
      spec.refinement_band = {P(0.5, 0), P(1.5, 0), P(1.5, 1.5), P(0.5, 1.5)};
  } else if (name == "example2") {
    spec.slits = {{P(0.5, 1.5), P(0.5, 2)}, {P(1.5, 1.5), P(1.5, 2)}};
    spec.dirichlet_segments = {
        {{P(0, 2), P(0.5, 2)}, minus}, {{P(0.5, 2), P(1.5, 2)}, plus}, {{P(1.5, 2), P(2, 2)}, minus}};
    spec.refinement_band = {P(0.5, 0), P(1.5, 0), P(1.5, 1.5), P(0.5, 1.5)};
  } else if (name == "example3") {
    spec.slits = {{P(0.5, 1.5), P(0.5, 2)}, {P(1.5, 0), P(1.5, 0.5)}};
    spec.dirichlet_segments = {{{P(0, 2), P(0.5, 2)}, minus},
                               {{P(0.5, 2), P(2, 2)}, plus},
                               {{P(0, 0), P(1.5, 0)}, minus},
                               {{P(1.5, 0), P(2, 0)}, plus}};
    spec.refinement_band = {P(0.5, 0.5), P(1.5, 0.5), P(1.5, 1.5), P(0.5, 1.5)};
  } else {
    throw InvalidArgument("unknown geometry preset '" + std::string(name) +
                          "' (expected single_slit, example1, example2 or example3)");
  }
  return spec;
}

}  // namespace fraktur
