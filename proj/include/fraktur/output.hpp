#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fraktur/config.hpp"
#include "fraktur/solver.hpp"
#include "fraktur/wellposedness.hpp"

namespace fraktur {

/// step,u_bar,E_el,E_S,E_pen,E_total,min_alpha,max_alpha,stag_iters,tr_iters,crack_tip_x,crack_tip_y,reaction
std::string history_header();
std::string history_row(const StepRecord& r);
void write_history_csv(std::ostream& os, const std::vector<StepRecord>& history);

/// Legacy ASCII VTK unstructured grid with point scalars `u` and `alpha`.
void write_vtk(std::ostream& os, const TriMesh& mesh, const Vector& u, const Vector& alpha);
void write_vtk_file(const std::string& path, const TriMesh& mesh, const Vector& u, const Vector& alpha);

/// `x,y` rows.
void write_polyline_csv(std::ostream& os, const std::vector<Vec2>& points);

/// Classification used in run reports: Foc4 without anisotropy maps to IsoFoc4;
/// AT families have no table entry.
std::optional<ExistenceReport> classify_model(const ModelSpec& model);

}  // namespace fraktur
