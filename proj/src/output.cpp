#include "fraktur/output.hpp"

#include <fstream>
#include <ostream>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"

namespace fraktur {

std::string history_header() {
  return "step,u_bar,E_el,E_S,E_pen,E_total,min_alpha,max_alpha,stag_iters,tr_iters,crack_tip_x,crack_tip_y,reaction";
}

std::string history_row(const StepRecord& r) {
  std::string s = std::to_string(r.step);
  for (double v : {r.u_bar, r.energy.elastic, r.energy.surface, r.energy.penalty, r.energy.total, r.min_alpha,
                   r.max_alpha})
    s += "," + fmt17(v);
  s += "," + std::to_string(r.stag.iterations) + "," + std::to_string(r.stag.tr_iterations);
  s += "," + fmt17(r.crack_tip.x()) + "," + fmt17(r.crack_tip.y());
  s += "," + fmt17(r.reaction);
  return s;
}

void write_history_csv(std::ostream& os, const std::vector<StepRecord>& history) {
  os << history_header() << '\n';
  for (const auto& r : history) os << history_row(r) << '\n';
}

void write_vtk(std::ostream& os, const TriMesh& mesh, const Vector& u, const Vector& alpha) {
  const std::size_t n = mesh.num_vertices();
  if (static_cast<std::size_t>(u.size()) != n || static_cast<std::size_t>(alpha.size()) != n)
    throw InvalidArgument("field sizes do not match the mesh");
  os << "# vtk DataFile Version 3.0\nphase-field fracture fields\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << n << " double\n";
  for (const auto& v : mesh.vertices) os << fmt17(v.x()) << ' ' << fmt17(v.y()) << " 0\n";
  const std::size_t nt = mesh.num_triangles();
  os << "CELLS " << nt << ' ' << 4 * nt << '\n';
  for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << nt << '\n';
  for (std::size_t e = 0; e < nt; ++e) os << "5\n";
  os << "POINT_DATA " << n << '\n';
  os << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) os << fmt17(u[static_cast<Eigen::Index>(i)]) << '\n';
  os << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < n; ++i) os << fmt17(alpha[static_cast<Eigen::Index>(i)]) << '\n';
}

void write_vtk_file(const std::string& path, const TriMesh& mesh, const Vector& u, const Vector& alpha) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  write_vtk(out, mesh, u, alpha);
}

void write_polyline_csv(std::ostream& os, const std::vector<Vec2>& points) {
  os << "x,y\n";
  for (const auto& p : points) os << fmt17(p.x()) << ',' << fmt17(p.y()) << '\n';
}

std::optional<ExistenceReport> classify_model(const ModelSpec& model) {
  const double tau = model.anisotropy() ? model.anisotropy()->tau() : 0.0;
  switch (model.family()) {
    case Family::Foc2: return classify(WellposedFamily::Foc2, tau);
    case Family::Foc4:
      return classify(model.is_anisotropic() ? WellposedFamily::Foc4 : WellposedFamily::IsoFoc4, tau);
    default: return std::nullopt;
  }
}

}  // namespace fraktur
