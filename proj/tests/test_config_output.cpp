#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "fraktur/config.hpp"
#include "fraktur/error.hpp"
#include "fraktur/output.hpp"

using namespace fraktur;

namespace {

const char* kFull = R"({
  "schema_version": 1,
  "geometry": {"preset": "example1", "a": 2.0, "h_min": 0.01, "h_max": 0.05},
  "model": {"family": "Foc4", "ell": 0.05, "g0": 2.0, "tau": 0.3, "omega": 0.7, "degradation": "poly4"},
  "mu": 3.0,
  "load": {"delta_u": 0.05, "n_steps": 7},
  "staggered": {"tol_stag": 1e-6, "max_iters": 40, "tol_ir": 0.02, "alpha_method": "trust_region"},
  "trust_region": {"r0": 0.02, "max_outer": 50},
  "numerics": {"quadrature_degree": 3, "linear_solver": "cg"},
  "output": {"dir": "runs/x", "snapshot_stride": 2},
  "seed": 9
})";

std::string parse_error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config and defaults") {
  const RunConfig c = parse_config(R"({"schema_version": 1, "model": {"family": "AT1", "ell": 0.1}})");
  CHECK(c.family == Family::AT1);
  CHECK(c.ell == 0.1);
  CHECK(c.preset == "single_slit");
  CHECK(c.resolved_h_min() == doctest::Approx(0.02));
  CHECK(c.resolved_h_max() == 0.1);
  CHECK(c.load.delta_u == 0.1);
  CHECK(c.load.n_steps == 15);
  CHECK(c.model().degradation().kind == DegradationSpec::Kind::QuadraticOneMinusAlpha);
  CHECK(c.resolved_zones().empty());
}

TEST_CASE("full config") {
  const RunConfig c = parse_config(kFull);
  CHECK(c.a == 2.0);
  CHECK(c.family == Family::Foc4);
  REQUIRE(c.tau.has_value());
  CHECK(*c.tau == 0.3);
  CHECK(c.omega == 0.7);
  CHECK(c.mu == 3.0);
  CHECK(c.load.n_steps == 7);
  CHECK(c.staggered.max_iters == 40);
  CHECK(c.staggered.alpha_method == AlphaMethod::TrustRegion);
  CHECK(c.trust_region.r0 == 0.02);
  CHECK(c.quadrature_degree == 3);
  CHECK(c.output_dir == "runs/x");
  CHECK(c.seed == 9u);
  CHECK(c.model().is_anisotropic());
  // example1 gets isotropic stiff strips on both sides.
  const auto zones = c.resolved_zones();
  REQUIRE(zones.size() == 2);
  CHECK(zones[0].g0_factor == 100.0);
  CHECK(zones[1].x_min == 3.0);
}

TEST_CASE("round trip through JSON") {
  for (const char* text :
       {kFull, R"({"schema_version": 1, "model": {"family": "AT2", "ell": 0.04}})",
        R"({"schema_version": 1, "geometry": {"domain": {"slits": [[[1, 1.5], [1, 2]]],
            "dirichlet": [{"from": [0, 2], "to": [1, 2], "tag": "DirichletMinus"},
                          {"from": [1, 2], "to": [2, 2], "tag": "DirichletPlus"}]}},
            "model": {"family": "Foc2", "ell": 0.08, "tau": 0.8, "omega": 0.785398},
            "zones": [{"x_min": 0, "x_max": 0.5, "y_min": 0, "y_max": 2, "g0_factor": 10, "isotropic": true}]})"}) {
    const RunConfig a = parse_config(text);
    const std::string j = config_to_json(a);
    const RunConfig b = parse_config(j);
    CHECK(config_to_json(b) == j);
    CHECK(b.family == a.family);
    CHECK(b.ell == a.ell);
    CHECK(b.tau == a.tau);
    CHECK(b.zones.size() == a.zones.size());
    CHECK(b.domain.has_value() == a.domain.has_value());
  }
}

TEST_CASE("config errors name the field") {
  CHECK(parse_error_of(R"({"model": {"family": "AT2", "ell": 0.1}})").find("/schema_version") != std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 2, "model": {"family": "AT2", "ell": 0.1}})").find("unsupported") !=
        std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT2"}})").find("/model/ell") != std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT3", "ell": 0.1}})").find("/model/family") !=
        std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT2", "ell": 0.1, "foo": 1}})")
            .find("/model/foo: unknown key") != std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT2", "ell": "x"}})").find("expected a number") !=
        std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT2", "ell": 0.1, "omega": 1}})")
            .find("without tau") != std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT2", "ell": 0.1},
                           "numerics": {"quadrature_degree": 9}})")
            .find("/numerics/quadrature_degree") != std::string::npos);
  CHECK(parse_error_of(R"({"schema_version": 1, "model": {"family": "AT2", "ell": 0.1},
                           "staggered": {"alpha_method": "lbfgs"}})")
            .find("/staggered/alpha_method") != std::string::npos);
}

TEST_CASE("JSON syntax errors carry the line") {
  try {
    parse_config("{\n  \"schema_version\": 1,\n  \"model\": {\n}}}\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(load_config_file("/nonexistent/run.json"), InvalidArgument);
}

TEST_CASE("history CSV") {
  StepRecord r;
  r.step = 3;
  r.u_bar = 0.3;
  r.energy.elastic = 1.5;
  r.energy.surface = 0.25;
  r.energy.total = 1.75;
  r.max_alpha = 0.5;
  r.stag.iterations = 4;
  r.crack_tip = Vec2(1.0, 1.25);
  r.reaction = -2.5;
  std::ostringstream os;
  write_history_csv(os, {r});
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == history_header());
  CHECK(header.substr(header.rfind(',') + 1) == "reaction");
  std::vector<std::string> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
  REQUIRE(cells.size() == 13);
  CHECK(cells[0] == "3");
  CHECK(std::stod(cells[1]) == 0.3);
  CHECK(std::stod(cells[5]) == 1.75);
  CHECK(cells[8] == "4");
  CHECK(std::stod(cells[11]) == 1.25);
  CHECK(std::stod(cells[12]) == -2.5);
}

TEST_CASE("VTK output") {
  const TriMesh m = structured_rectangle(2, 1, 0, 0, 1, 1);
  Vector u = Vector::LinSpaced(m.num_vertices(), 0, 1), alpha = Vector::Zero(m.num_vertices());
  std::ostringstream os;
  write_vtk(os, m, u, alpha);
  const std::string s = os.str();
  CHECK(s.rfind("# vtk DataFile Version 3.0", 0) == 0);
  CHECK(s.find("POINTS " + std::to_string(m.num_vertices()) + " double") != std::string::npos);
  CHECK(s.find("CELLS " + std::to_string(m.num_triangles()) + " " + std::to_string(4 * m.num_triangles())) !=
        std::string::npos);
  CHECK(s.find("SCALARS alpha double 1") != std::string::npos);
  CHECK_THROWS_AS(write_vtk(os, m, Vector::Zero(2), alpha), InvalidArgument);

  std::ostringstream pl;
  write_polyline_csv(pl, {Vec2(0, 1), Vec2(0.5, 2)});
  CHECK(pl.str() == "x,y\n0,1\n0.5,2\n");
}

TEST_CASE("model classification for reports") {
  CHECK_FALSE(classify_model(ModelSpec(Family::AT1, std::nullopt, DegradationSpec::quadratic(), 0.1)).has_value());
  const auto iso = classify_model(ModelSpec(Family::Foc4, std::nullopt, DegradationSpec::quartic_squared(), 0.1));
  REQUIRE(iso);
  CHECK(iso->family == WellposedFamily::IsoFoc4);
  const auto an =
      classify_model(ModelSpec(Family::Foc4, AnisotropyParams(4, 0.5, 0.0), DegradationSpec::quartic_squared(), 0.1));
  REQUIRE(an);
  CHECK(an->existence == Verdict::NotShownByDM);
  const auto f2 =
      classify_model(ModelSpec(Family::Foc2, AnisotropyParams(2, 0.8, 0.3), DegradationSpec::quadratic(), 0.1));
  REQUIRE(f2);
  CHECK(f2->uniqueness == Verdict::Shown);
}
