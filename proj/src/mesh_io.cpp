#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"
#include "fraktur/mesh.hpp"

namespace fraktur {

void write_mesh(std::ostream& os, const TriMesh& mesh) {
  os << "$Vertices\n";
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
    os << i << ' ' << fmt17(mesh.vertices[i].x()) << ' ' << fmt17(mesh.vertices[i].y()) << '\n';
  os << "$EndVertices\n$Triangles\n";
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "$EndTriangles\n$BoundaryEdges\n";
  for (const auto& e : mesh.boundary_edges) os << e.i << ' ' << e.j << ' ' << to_string(e.tag) << '\n';
  os << "$EndBoundaryEdges\n$SeamPairs\n";
  for (const auto& s : mesh.seam_pairs) os << s.node << ' ' << s.twin << '\n';
  os << "$EndSeamPairs\n";
}

void write_mesh_file(const std::string& path, const TriMesh& mesh) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_mesh(os, mesh);
  if (!os) throw Error("failed writing mesh to '" + path + "'");
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-blank line; false at end of input.
  bool next(std::string& line) {
    while (std::getline(is_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  }

  int number() const { return number_; }

 private:
  std::istream& is_;
  int number_ = 0;
};

template <typename... T>
void parse_fields(const std::string& line, int lineno, const char* what, T&... out) {
  std::istringstream ss(line);
  ss.imbue(std::locale::classic());
  ((ss >> out), ...);
  std::string extra;
  if (!ss || (ss >> extra)) throw ParseError(std::string("malformed ") + what + " record '" + line + "'", lineno);
}

}  // namespace

TriMesh read_mesh(std::istream& is) {
  TriMesh mesh;
  LineReader reader(is);
  std::string line;
  const char* sections[] = {"Vertices", "Triangles", "BoundaryEdges", "SeamPairs"};
  for (const char* section : sections) {
    const std::string open = std::string("$") + section;
    const std::string close = std::string("$End") + section;
    if (!reader.next(line)) throw ParseError("missing section " + open, reader.number());
    if (line != open) throw ParseError("expected " + open + ", found '" + line + "'", reader.number());
    bool closed = false;
    while (reader.next(line)) {
      if (line == close) {
        closed = true;
        break;
      }
      const int ln = reader.number();
      if (line[0] == '$') throw ParseError("expected " + close + " before '" + line + "'", ln);
      if (open == "$Vertices") {
        long idx;
        double x, y;
        parse_fields(line, ln, "vertex", idx, x, y);
        if (idx != static_cast<long>(mesh.vertices.size()))
          throw ParseError("vertex index " + std::to_string(idx) + " out of sequence", ln);
        mesh.vertices.emplace_back(x, y);
      } else if (open == "$Triangles") {
        std::array<int, 3> t{};
        parse_fields(line, ln, "triangle", t[0], t[1], t[2]);
        mesh.triangles.push_back(t);
      } else if (open == "$BoundaryEdges") {
        int i, j;
        std::string tag;
        parse_fields(line, ln, "boundary edge", i, j, tag);
        try {
          mesh.boundary_edges.push_back({i, j, parse_boundary_tag(tag)});
        } catch (const InvalidArgument& e) {
          throw ParseError(e.what(), ln);
        }
      } else {
        int n, t;
        parse_fields(line, ln, "seam pair", n, t);
        mesh.seam_pairs.push_back({n, t});
      }
    }
    if (!closed) throw ParseError("missing " + close + " (file truncated in section " + open + ")", reader.number());
  }
  if (reader.next(line)) throw ParseError("unexpected content after $EndSeamPairs", reader.number());
  try {
    validate(mesh);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("invalid mesh: ") + e.what());
  }
  return mesh;
}

TriMesh read_mesh_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open mesh file '" + path + "'");
  return read_mesh(is);
}

}  // namespace fraktur
