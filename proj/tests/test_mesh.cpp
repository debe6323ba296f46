#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <sstream>

#include "fraktur/error.hpp"
#include "fraktur/mesh.hpp"

using namespace fraktur;

namespace {

std::vector<std::vector<int>> adjacency(const TriMesh& m) {
  std::vector<std::set<int>> s(m.num_vertices());
  for (const auto& t : m.triangles)
    for (int a = 0; a < 3; ++a) {
      s[t[a]].insert(t[(a + 1) % 3]);
      s[t[(a + 1) % 3]].insert(t[a]);
    }
  std::vector<std::vector<int>> adj;
  for (auto& x : s) adj.emplace_back(x.begin(), x.end());
  return adj;
}

int graph_distance(const std::vector<std::vector<int>>& adj, int from, int to) {
  std::vector<int> d(adj.size(), -1);
  std::queue<int> q;
  d[from] = 0;
  q.push(from);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (v == to) return d[v];
    for (int w : adj[v])
      if (d[w] < 0) {
        d[w] = d[v] + 1;
        q.push(w);
      }
  }
  return -1;
}

bool in_triangle(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c) {
  auto cross = [](const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); };
  const double d1 = cross(b - a, p - a), d2 = cross(c - b, p - b), d3 = cross(a - c, p - c);
  return (d1 >= 0 && d2 >= 0 && d3 >= 0) || (d1 <= 0 && d2 <= 0 && d3 <= 0);
}

const TriMesh& single_slit_coarse() {
  static const TriMesh m = build_slit_domain(preset_domain("single_slit", 1.0, 0.08, 0.04, 0.16));
  return m;
}

}  // namespace

TEST_CASE("single-slit preset geometry") {
  const DomainSpec spec = preset_domain("single_slit", 1.0, 0.04, 0.008, 0.04);
  REQUIRE(spec.slits.size() == 1);
  CHECK(spec.slits[0].a == Vec2(1, 1.5));
  CHECK(spec.slits[0].b == Vec2(1, 2));
  REQUIRE(spec.dirichlet_segments.size() == 2);
  CHECK(spec.dirichlet_segments[0].tag == BoundaryTag::DirichletMinus);
  CHECK(spec.dirichlet_segments[0].segment.b.x() == 1.0);
  CHECK(spec.dirichlet_segments[1].tag == BoundaryTag::DirichletPlus);
  const auto tips = slit_tips(spec);
  REQUIRE(tips.size() == 1);
  CHECK(tips[0] == Vec2(1, 1.5));
  CHECK_THROWS_AS(preset_domain("nope", 1.0, 0.04, 0.008, 0.04), InvalidArgument);
}

TEST_CASE("uniform mesh without band") {
  DomainSpec spec;
  spec.a = 1.0;
  spec.h_min = spec.h_max = 0.25;
  const TriMesh m = build_slit_domain(spec);
  validate(m);
  for (double e : edge_lengths(m)) CHECK(e <= 0.375);
  CHECK(total_area(m) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("preset meshes: area, orientation, slit topology") {
  for (const std::string& name : preset_names()) {
    CAPTURE(name);
    const DomainSpec spec = preset_domain(name, 1.0, 0.1, 0.05, 0.2);
    const TriMesh m = build_slit_domain(spec);
    validate(m);
    CHECK(total_area(m) == doctest::Approx(4.0).epsilon(1e-10));
    for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(signed_area(m, t) > 0.0);
    CHECK(min_angle_degrees(m) >= 30.0);
    CHECK_FALSE(m.seam_pairs.empty());
    const auto adj = adjacency(m);
    for (const auto& sp : m.seam_pairs) {
      CHECK(m.vertices[sp.node] == m.vertices[sp.twin]);
      CHECK(graph_distance(adj, sp.node, sp.twin) > 1);
    }
    // No triangle straddles a slit: every edge crossing x = slit.x within the slit span is absent.
    for (const auto& s : spec.slits)
      for (const auto& t : m.triangles)
        for (int a = 0; a < 3; ++a) {
          const Vec2& p = m.vertices[t[a]];
          const Vec2& q = m.vertices[t[(a + 1) % 3]];
          const double x = s.a.x();
          const double ylo = std::min(s.a.y(), s.b.y()), yhi = std::max(s.a.y(), s.b.y());
          if ((p.x() - x) * (q.x() - x) < 0.0) {
            const double y = p.y() + (x - p.x()) / (q.x() - p.x()) * (q.y() - p.y());
            CHECK_FALSE((y > ylo + 1e-12 && y < yhi - 1e-12));
          }
        }
  }
}

TEST_CASE("band sizing on the single-slit preset") {
  const double ell = 0.04;
  const TriMesh m = build_slit_domain(preset_domain("single_slit", 1.0, ell, ell / 5, ell));
  std::vector<double> band, outside;
  std::set<std::pair<int, int>> seen;
  for (const auto& t : m.triangles)
    for (int a = 0; a < 3; ++a) {
      const int i = std::min(t[a], t[(a + 1) % 3]), j = std::max(t[a], t[(a + 1) % 3]);
      if (!seen.insert({i, j}).second) continue;
      const Vec2 mid = 0.5 * (m.vertices[i] + m.vertices[j]);
      const double len = (m.vertices[i] - m.vertices[j]).norm();
      if (in_triangle(mid, Vec2(1, 1.5), Vec2(1, 0), Vec2(2, 0.5)))
        band.push_back(len);
      else
        outside.push_back(len);
    }
  std::nth_element(band.begin(), band.begin() + band.size() / 2, band.end());
  const double median = band[band.size() / 2];
  CHECK(median >= 0.004);
  CHECK(median <= 0.012);
  // Diagonals of h-squares reach sqrt(2) h.
  for (double e : outside) CHECK(e <= 1.5 * ell * std::sqrt(2.0) + 1e-12);
}

TEST_CASE("boundary tags") {
  const TriMesh sq = structured_rectangle(1, 1, 0, 0, 1, 1);
  CHECK(boundary_nodes(sq, BoundaryTag::Free).size() == 4);
  CHECK(boundary_nodes(sq, BoundaryTag::DirichletMinus).empty());

  const TriMesh& m = single_slit_coarse();
  const auto minus = boundary_nodes(m, BoundaryTag::DirichletMinus);
  const auto plus = boundary_nodes(m, BoundaryTag::DirichletPlus);
  CHECK_FALSE(minus.empty());
  CHECK_FALSE(plus.empty());
  for (int i : minus) {
    CHECK(m.vertices[i].y() == 2.0);
    CHECK(m.vertices[i].x() < 1.0);
  }
  for (int i : plus) {
    CHECK(m.vertices[i].y() == 2.0);
    CHECK(m.vertices[i].x() > 1.0);
  }
  // The top node on the slit sits in neither Dirichlet set.
  for (int i : minus) CHECK(m.vertices[i] != Vec2(1, 2));
  for (int i : plus) CHECK(m.vertices[i] != Vec2(1, 2));
  CHECK(to_string(BoundaryTag::DirichletPlus) == "DirichletPlus");
  CHECK(parse_boundary_tag("Free") == BoundaryTag::Free);
  CHECK_THROWS_AS(parse_boundary_tag("Robin"), InvalidArgument);
}

TEST_CASE("mesh determinism") {
  const DomainSpec spec = preset_domain("example3", 1.0, 0.1, 0.05, 0.2);
  CHECK(build_slit_domain(spec) == build_slit_domain(spec));
}

TEST_CASE("mesh file round trip") {
  const TriMesh sq = structured_rectangle(1, 1, 0, 0, 1, 1);
  std::stringstream s1;
  write_mesh(s1, sq);
  CHECK(read_mesh(s1) == sq);

  const TriMesh& m = single_slit_coarse();
  std::stringstream s2;
  write_mesh(s2, m);
  const TriMesh back = read_mesh(s2);
  CHECK(back.num_vertices() == m.num_vertices());
  CHECK(back == m);
}

TEST_CASE("mesh file errors") {
  const TriMesh sq = structured_rectangle(1, 1, 0, 0, 1, 1);
  std::stringstream s;
  write_mesh(s, sq);
  const std::string text = s.str();
  const std::string truncated = text.substr(0, text.find("$EndTriangles"));
  std::istringstream t(truncated);
  try {
    read_mesh(t);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("Triangles") != std::string::npos);
  }
  std::istringstream no_seams(text.substr(0, text.find("$SeamPairs")));
  CHECK_THROWS_WITH_AS(read_mesh(no_seams), doctest::Contains("SeamPairs"), ParseError);
  std::string bad = text;
  bad.replace(bad.find("$Triangles\n") + 11, 1, "7");
  std::istringstream b(bad);
  CHECK_THROWS_AS(read_mesh(b), ParseError);
}

TEST_CASE("validate rejects broken meshes") {
  TriMesh m = structured_rectangle(2, 2, 0, 0, 1, 1);
  TriMesh flipped = m;
  std::swap(flipped.triangles[0][1], flipped.triangles[0][2]);
  CHECK_THROWS_AS(validate(flipped), InvalidArgument);
  TriMesh oob = m;
  oob.triangles[0][0] = 999;
  CHECK_THROWS_AS(validate(oob), InvalidArgument);
}

TEST_CASE("domain spec errors") {
  DomainSpec spec = preset_domain("single_slit", 1.0, 0.04, 0.6, 0.8);
  CHECK_THROWS_AS(build_slit_domain(spec), InvalidArgument);  // h_min >= slit length
  DomainSpec inv = preset_domain("single_slit", 1.0, 0.04, 0.08, 0.04);
  CHECK_THROWS_AS(build_slit_domain(inv), InvalidArgument);  // h_min > h_max
}
