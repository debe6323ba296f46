#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "fraktur/anisotropy.hpp"

namespace fraktur {

enum class BoundaryTag { DirichletMinus, DirichletPlus, Free };

std::string_view to_string(BoundaryTag tag);
/// Throws InvalidArgument for names other than DirichletMinus, DirichletPlus, Free.
BoundaryTag parse_boundary_tag(std::string_view name);

struct Segment {
  Vec2 a = Vec2::Zero();
  Vec2 b = Vec2::Zero();
};

struct DirichletSegment {
  Segment segment;
  BoundaryTag tag = BoundaryTag::Free;
};

struct BoundaryEdge {
  int i = 0;
  int j = 0;
  BoundaryTag tag = BoundaryTag::Free;
  bool operator==(const BoundaryEdge&) const = default;
};

/// `twin` duplicates `node` on the positive side of a slit.
struct SeamPair {
  int node = 0;
  int twin = 0;
  bool operator==(const SeamPair&) const = default;
};

struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<SeamPair> seam_pairs;

  std::size_t num_vertices() const { return vertices.size(); }
  std::size_t num_triangles() const { return triangles.size(); }

  /// Bitwise equality of coordinates and exact equality of all index data.
  bool operator==(const TriMesh& other) const;
};

struct DomainSpec {
  double a = 1.0;                    ///< the domain is [0, 2a]^2
  std::vector<Segment> slits;        ///< axis-aligned cuts
  std::vector<Vec2> refinement_band; ///< polygon (>= 3 points), polyline (2) or point (1); empty for none
  double band_width = 0.0;           ///< the band is every point within this distance of the polygon
  double h_min = 0.1;
  double h_max = 0.1;
  std::vector<DirichletSegment> dirichlet_segments;
};

/// Preset names: single_slit, example1, example2, example3. The band is widened by 4 ell.
DomainSpec preset_domain(std::string_view name, double a, double ell, double h_min, double h_max);
std::vector<std::string> preset_names();

/// Interior (non-boundary) endpoints of the slits, in slit order.
std::vector<Vec2> slit_tips(const DomainSpec& spec);

/// Quadtree triangulation with 2:1 balance, refined to h_min in the band and
/// along slits, followed by node duplication along the slits.
TriMesh build_slit_domain(const DomainSpec& spec);

/// Uniform right-triangle mesh of [x0,x1]x[y0,y1] with nx*ny*2 triangles; all
/// boundary edges are Free.
TriMesh structured_rectangle(int nx, int ny, double x0, double y0, double x1, double y1);

/// Sorted nodes lying on edges with `tag`. For the Dirichlet tags, nodes that
/// belong to a seam pair are excluded.
std::vector<int> boundary_nodes(const TriMesh& mesh, BoundaryTag tag);

double signed_area(const TriMesh& mesh, std::size_t t);
double total_area(const TriMesh& mesh);
double min_angle_degrees(const TriMesh& mesh);
/// Length of every distinct edge, in a deterministic order.
std::vector<double> edge_lengths(const TriMesh& mesh);

/// Throws InvalidArgument naming the first violated mesh invariant
/// (index range, positive area, boundary/seam references).
void validate(const TriMesh& mesh);

/// Text format with $Vertices, $Triangles, $BoundaryEdges, $SeamPairs sections.
void write_mesh(std::ostream& os, const TriMesh& mesh);
void write_mesh_file(const std::string& path, const TriMesh& mesh);
/// Throws ParseError carrying the offending line number.
TriMesh read_mesh(std::istream& is);
TriMesh read_mesh_file(const std::string& path);

}  // namespace fraktur
