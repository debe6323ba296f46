#include "fraktur/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fraktur/error.hpp"

namespace fraktur {

using nlohmann::json;

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ParseError(join(path, key) + ": unknown key");
}

double get_number(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(join(path, key) + ": expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& path, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ParseError(join(path, key) + ": expected an integer");
  return v.get<int>();
}

bool get_bool(const json& obj, const std::string& path, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ParseError(join(path, key) + ": expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& path, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ParseError(join(path, key) + ": expected a string");
  return v.get<std::string>();
}

void require(const json& obj, const std::string& path, const char* key) {
  if (!obj.contains(key)) throw ParseError(join(path, key) + ": required field is missing");
}

Vec2 get_point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError(path + ": expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

// Re-throws library argument errors with the path of the offending field.
template <typename F>
auto at_path(const std::string& path, F&& fn) {
  try {
    return fn();
  } catch (const InvalidArgument& e) {
    throw ParseError(path + ": " + e.what());
  }
}

DomainSpec parse_domain(const json& d, const std::string& path, double a) {
  check_keys(d, path, {"slits", "refinement_band", "band_width", "dirichlet"});
  DomainSpec spec;
  spec.a = a;
  if (d.contains("slits")) {
    const json& s = d.at("slits");
    if (!s.is_array()) throw ParseError(join(path, "slits") + ": expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string p = join(join(path, "slits"), std::to_string(i));
      if (!s[i].is_array() || s[i].size() != 2) throw ParseError(p + ": expected [[x, y], [x, y]]");
      spec.slits.push_back({get_point(s[i][0], p + "/0"), get_point(s[i][1], p + "/1")});
    }
  }
  if (d.contains("refinement_band")) {
    const json& b = d.at("refinement_band");
    if (!b.is_array()) throw ParseError(join(path, "refinement_band") + ": expected an array");
    for (std::size_t i = 0; i < b.size(); ++i)
      spec.refinement_band.push_back(get_point(b[i], join(join(path, "refinement_band"), std::to_string(i))));
  }
  spec.band_width = get_number(d, path, "band_width", 0.0);
  if (d.contains("dirichlet")) {
    const json& b = d.at("dirichlet");
    if (!b.is_array()) throw ParseError(join(path, "dirichlet") + ": expected an array");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string p = join(join(path, "dirichlet"), std::to_string(i));
      check_keys(b[i], p, {"from", "to", "tag"});
      require(b[i], p, "from");
      require(b[i], p, "to");
      require(b[i], p, "tag");
      DirichletSegment seg;
      seg.segment = {get_point(b[i].at("from"), p + "/from"), get_point(b[i].at("to"), p + "/to")};
      seg.tag = at_path(p + "/tag", [&] { return parse_boundary_tag(get_string(b[i], p, "tag", "")); });
      spec.dirichlet_segments.push_back(seg);
    }
  }
  return spec;
}

}  // namespace

ModelSpec RunConfig::model() const {
  std::optional<AnisotropyParams> aniso;
  if (tau) aniso = AnisotropyParams(family == Family::Foc2 ? 2 : 4, *tau, omega);
  const DegradationSpec deg =
      degradation ? *degradation
                  : (family == Family::Foc4 ? DegradationSpec::quartic_squared() : DegradationSpec::quadratic());
  return ModelSpec(family, aniso, deg, ell, g0);
}

DomainSpec RunConfig::resolved_domain() const {
  if (domain) {
    DomainSpec d = *domain;
    d.h_min = resolved_h_min();
    d.h_max = resolved_h_max();
    return d;
  }
  return preset_domain(preset, a, ell, resolved_h_min(), resolved_h_max());
}

std::vector<MaterialZone> RunConfig::resolved_zones() const {
  if (!zones.empty() || domain || preset != "example1") return zones;
  return {{0.0, 0.5 * a, 0.0, 2.0 * a, 100.0, true}, {1.5 * a, 2.0 * a, 0.0, 2.0 * a, 100.0, true}};
}

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    std::string msg = e.what();
    const auto colon = msg.find("syntax error");
    throw ParseError("invalid JSON: " + (colon == std::string::npos ? msg : msg.substr(colon)),
                     line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  const std::string top;
  check_keys(root, top, {"schema_version", "geometry", "model", "mu", "zones", "load", "staggered", "trust_region",
                         "numerics", "output", "seed"});
  require(root, top, "schema_version");
  if (get_int(root, top, "schema_version", 0) != kSchemaVersion)
    throw ParseError("/schema_version: unsupported version (expected " + std::to_string(kSchemaVersion) + ")");

  RunConfig c;
  if (root.contains("geometry")) {
    const json& g = root.at("geometry");
    const std::string p = "/geometry";
    check_keys(g, p, {"preset", "a", "h_min", "h_max", "domain"});
    c.a = get_number(g, p, "a", c.a);
    if (!(c.a > 0.0)) throw ParseError(p + "/a: must be positive");
    c.h_min = get_number(g, p, "h_min", 0.0);
    c.h_max = get_number(g, p, "h_max", 0.0);
    if (c.h_min < 0.0 || c.h_max < 0.0) throw ParseError(p + ": h_min and h_max must be positive");
    if (g.contains("preset") && g.contains("domain")) throw ParseError(p + ": give either preset or domain, not both");
    c.preset = get_string(g, p, "preset", c.preset);
    if (g.contains("domain")) c.domain = parse_domain(g.at("domain"), p + "/domain", c.a);
  }
  {
    const std::string p = "/model";
    require(root, top, "model");
    const json& m = root.at("model");
    check_keys(m, p, {"family", "ell", "g0", "tau", "omega", "degradation"});
    require(m, p, "family");
    require(m, p, "ell");
    c.family = at_path(p + "/family", [&] { return parse_family(get_string(m, p, "family", "")); });
    c.ell = get_number(m, p, "ell", c.ell);
    if (!(c.ell > 0.0)) throw ParseError(p + "/ell: must be positive");
    c.g0 = get_number(m, p, "g0", c.g0);
    if (!(c.g0 > 0.0)) throw ParseError(p + "/g0: must be positive");
    if (m.contains("tau")) c.tau = get_number(m, p, "tau", 0.0);
    c.omega = get_number(m, p, "omega", 0.0);
    if (m.contains("omega") && !m.contains("tau")) throw ParseError(p + "/omega: given without tau");
    if (m.contains("degradation"))
      c.degradation = at_path(p + "/degradation", [&] { return parse_degradation(get_string(m, p, "degradation", "")); });
    at_path(p, [&] { return c.model(); });
  }
  c.mu = get_number(root, top, "mu", c.mu);
  if (!(c.mu > 0.0)) throw ParseError("/mu: must be positive");
  if (root.contains("zones")) {
    const json& z = root.at("zones");
    if (!z.is_array()) throw ParseError("/zones: expected an array");
    for (std::size_t i = 0; i < z.size(); ++i) {
      const std::string p = "/zones/" + std::to_string(i);
      check_keys(z[i], p, {"x_min", "x_max", "y_min", "y_max", "g0_factor", "isotropic"});
      for (const char* k : {"x_min", "x_max", "y_min", "y_max"}) require(z[i], p, k);
      MaterialZone zone;
      zone.x_min = get_number(z[i], p, "x_min", 0.0);
      zone.x_max = get_number(z[i], p, "x_max", 0.0);
      zone.y_min = get_number(z[i], p, "y_min", 0.0);
      zone.y_max = get_number(z[i], p, "y_max", 0.0);
      zone.g0_factor = get_number(z[i], p, "g0_factor", 1.0);
      zone.isotropic = get_bool(z[i], p, "isotropic", false);
      if (!(zone.g0_factor > 0.0)) throw ParseError(p + "/g0_factor: must be positive");
      c.zones.push_back(zone);
    }
  }
  if (root.contains("load")) {
    const json& l = root.at("load");
    const std::string p = "/load";
    check_keys(l, p, {"delta_u", "n_steps"});
    c.load.delta_u = get_number(l, p, "delta_u", c.load.delta_u);
    c.load.n_steps = get_int(l, p, "n_steps", c.load.n_steps);
    at_path(p, [&] { c.load.validate(); return 0; });
  }
  if (root.contains("staggered")) {
    const json& s = root.at("staggered");
    const std::string p = "/staggered";
    check_keys(s, p, {"tol_stag", "max_iters", "tol_ir", "alpha_first", "alpha_method", "newton_tol",
                      "newton_max_iters", "abort_on_nonconvergence", "nucleation_seed"});
    auto& st = c.staggered;
    st.tol_stag = get_number(s, p, "tol_stag", st.tol_stag);
    st.max_iters = get_int(s, p, "max_iters", st.max_iters);
    st.tol_ir = get_number(s, p, "tol_ir", st.tol_ir);
    st.alpha_first = get_bool(s, p, "alpha_first", st.alpha_first);
    if (s.contains("alpha_method"))
      st.alpha_method =
          at_path(p + "/alpha_method", [&] { return parse_alpha_method(get_string(s, p, "alpha_method", "")); });
    st.newton_tol = get_number(s, p, "newton_tol", st.newton_tol);
    st.newton_max_iters = get_int(s, p, "newton_max_iters", st.newton_max_iters);
    st.abort_on_nonconvergence = get_bool(s, p, "abort_on_nonconvergence", st.abort_on_nonconvergence);
    st.nucleation_seed = get_number(s, p, "nucleation_seed", st.nucleation_seed);
    at_path(p, [&] { st.validate(); return 0; });
  }
  if (root.contains("trust_region")) {
    const json& t = root.at("trust_region");
    const std::string p = "/trust_region";
    check_keys(t, p, {"r0", "eta1", "eta2", "shrink", "grow", "box_lambda", "tol_pf", "max_outer", "r_min", "z0",
                      "max_inner", "flat_regularization", "box_active_fraction"});
    auto& tr = c.trust_region;
    tr.r0 = get_number(t, p, "r0", tr.r0);
    tr.eta1 = get_number(t, p, "eta1", tr.eta1);
    tr.eta2 = get_number(t, p, "eta2", tr.eta2);
    tr.shrink = get_number(t, p, "shrink", tr.shrink);
    tr.grow = get_number(t, p, "grow", tr.grow);
    tr.box_lambda = get_number(t, p, "box_lambda", tr.box_lambda);
    tr.tol_pf = get_number(t, p, "tol_pf", tr.tol_pf);
    tr.max_outer = get_int(t, p, "max_outer", tr.max_outer);
    tr.r_min = get_number(t, p, "r_min", tr.r_min);
    tr.z0 = get_number(t, p, "z0", tr.z0);
    tr.max_inner = get_int(t, p, "max_inner", tr.max_inner);
    tr.flat_regularization = get_number(t, p, "flat_regularization", tr.flat_regularization);
    tr.box_active_fraction = get_number(t, p, "box_active_fraction", tr.box_active_fraction);
    at_path(p, [&] { tr.validate(); return 0; });
  }
  if (root.contains("numerics")) {
    const json& n = root.at("numerics");
    const std::string p = "/numerics";
    check_keys(n, p, {"quadrature_degree", "linear_solver"});
    c.quadrature_degree = get_int(n, p, "quadrature_degree", c.quadrature_degree);
    if (c.quadrature_degree < 1 || c.quadrature_degree > 5)
      throw ParseError(p + "/quadrature_degree: must lie in 1..5");
    if (n.contains("linear_solver"))
      c.linear_solver =
          at_path(p + "/linear_solver", [&] { return parse_linear_solver(get_string(n, p, "linear_solver", "")); });
  }
  if (root.contains("output")) {
    const json& o = root.at("output");
    const std::string p = "/output";
    check_keys(o, p, {"dir", "snapshot_stride"});
    c.output_dir = get_string(o, p, "dir", c.output_dir);
    c.snapshot_stride = get_int(o, p, "snapshot_stride", c.snapshot_stride);
    if (c.snapshot_stride < 0) throw ParseError(p + "/snapshot_stride: must be nonnegative (0 disables snapshots)");
  }
  if (root.contains("seed")) {
    const int s = get_int(root, top, "seed", 0);
    if (s < 0) throw ParseError("/seed: must be nonnegative");
    c.seed = static_cast<unsigned>(s);
  }
  return c;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const RunConfig& c) {
  json root;
  root["schema_version"] = kSchemaVersion;
  json geometry = {{"a", c.a}, {"h_min", c.h_min}, {"h_max", c.h_max}};
  if (c.domain) {
    json d;
    d["slits"] = json::array();
    for (const auto& s : c.domain->slits)
      d["slits"].push_back({{s.a.x(), s.a.y()}, {s.b.x(), s.b.y()}});
    d["refinement_band"] = json::array();
    for (const auto& q : c.domain->refinement_band) d["refinement_band"].push_back({q.x(), q.y()});
    d["band_width"] = c.domain->band_width;
    d["dirichlet"] = json::array();
    for (const auto& s : c.domain->dirichlet_segments)
      d["dirichlet"].push_back({{"from", {s.segment.a.x(), s.segment.a.y()}},
                                {"to", {s.segment.b.x(), s.segment.b.y()}},
                                {"tag", std::string(to_string(s.tag))}});
    geometry["domain"] = d;
  } else {
    geometry["preset"] = c.preset;
  }
  root["geometry"] = geometry;
  json model = {{"family", std::string(to_string(c.family))}, {"ell", c.ell}, {"g0", c.g0}};
  if (c.tau) {
    model["tau"] = *c.tau;
    model["omega"] = c.omega;
  }
  if (c.degradation) model["degradation"] = c.degradation->name();
  root["model"] = model;
  root["mu"] = c.mu;
  if (!c.zones.empty()) {
    root["zones"] = json::array();
    for (const auto& z : c.zones)
      root["zones"].push_back({{"x_min", z.x_min}, {"x_max", z.x_max}, {"y_min", z.y_min}, {"y_max", z.y_max},
                               {"g0_factor", z.g0_factor}, {"isotropic", z.isotropic}});
  }
  root["load"] = {{"delta_u", c.load.delta_u}, {"n_steps", c.load.n_steps}};
  const auto& st = c.staggered;
  root["staggered"] = {{"tol_stag", st.tol_stag},
                       {"max_iters", st.max_iters},
                       {"tol_ir", st.tol_ir},
                       {"alpha_first", st.alpha_first},
                       {"alpha_method", std::string(to_string(st.alpha_method))},
                       {"newton_tol", st.newton_tol},
                       {"newton_max_iters", st.newton_max_iters},
                       {"abort_on_nonconvergence", st.abort_on_nonconvergence},
                       {"nucleation_seed", st.nucleation_seed}};
  const auto& tr = c.trust_region;
  root["trust_region"] = {{"r0", tr.r0},         {"eta1", tr.eta1},
                          {"eta2", tr.eta2},     {"shrink", tr.shrink},
                          {"grow", tr.grow},     {"box_lambda", tr.box_lambda},
                          {"tol_pf", tr.tol_pf}, {"max_outer", tr.max_outer},
                          {"r_min", tr.r_min},   {"z0", tr.z0},
                          {"max_inner", tr.max_inner}, {"flat_regularization", tr.flat_regularization},
                          {"box_active_fraction", tr.box_active_fraction}};
  root["numerics"] = {{"quadrature_degree", c.quadrature_degree},
                      {"linear_solver", c.linear_solver == LinearSolverKind::Ldlt ? "ldlt" : "cg"}};
  root["output"] = {{"dir", c.output_dir}, {"snapshot_stride", c.snapshot_stride}};
  root["seed"] = c.seed;
  return root.dump(2) + "\n";
}

}  // namespace fraktur
