#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fraktur/linear_solver.hpp"
#include "fraktur/material_models.hpp"
#include "fraktur/mesh.hpp"
#include "fraktur/solver.hpp"

namespace fraktur {

inline constexpr int kSchemaVersion = 1;

/// Axis-aligned box of elements (by centroid) that use a different material.
struct MaterialZone {
  double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
  double g0_factor = 1.0;  ///< multiplies the model's G0
  bool isotropic = false;  ///< drop the anisotropy inside the zone
};

struct RunConfig {
  std::string preset = "single_slit";
  std::optional<DomainSpec> domain;  ///< explicit geometry instead of a preset
  double a = 1.0;
  double h_min = 0.0;  ///< 0 selects ell/5
  double h_max = 0.0;  ///< 0 selects ell

  Family family = Family::AT2;
  std::optional<double> tau;
  double omega = 0.0;
  std::optional<DegradationSpec> degradation;  ///< default: (1-alpha^4)^2 for Foc4, quadratic otherwise
  double ell = 0.04;
  double g0 = 1.0;
  double mu = 1.0;
  std::vector<MaterialZone> zones;  ///< default for example1: isotropic side strips with 100 G0

  LoadProgram load;
  StaggeredParams staggered;  ///< tol_stag and newton_tol are relative to G0 a here
  TrustRegionParams trust_region;
  int quadrature_degree = 1;
  LinearSolverKind linear_solver = LinearSolverKind::Ldlt;

  std::string output_dir = "out";
  int snapshot_stride = 1;
  unsigned seed = 0;

  ModelSpec model() const;
  double resolved_h_min() const { return h_min > 0.0 ? h_min : ell / 5.0; }
  double resolved_h_max() const { return h_max > 0.0 ? h_max : ell; }
  DomainSpec resolved_domain() const;
  std::vector<MaterialZone> resolved_zones() const;
};

/// Parses the JSON text. Syntax errors carry the line number; unknown keys and
/// type or range violations name the JSON path of the field.
RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// JSON text that parses back to the same configuration.
std::string config_to_json(const RunConfig& config);

}  // namespace fraktur
