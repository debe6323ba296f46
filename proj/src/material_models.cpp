#include "fraktur/material_models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "fraktur/error.hpp"
#include "fraktur/format.hpp"

namespace fraktur {

namespace {

std::string normalized(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (ch == '-' || ch == '_') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

// Local density divided by G0/ell, i.e. the dimensionless w-like part.
LocalTerm unit_local(Family f, double a) {
  switch (f) {
    case Family::AT1: {
      const double c = 1.0 / c_w(Family::AT1);
      return {c * a, c, 0.0};
    }
    case Family::AT2:
    case Family::Foc2: return {0.5 * a * a, a, 1.0};
    case Family::Foc4: {
      const double c = 3.0 / (4.0 * b_w(4.0));
      return {c * a * a * a * a, 4.0 * c * a * a * a, 12.0 * c * a * a};
    }
  }
  return {};
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::AT1: return "AT1";
    case Family::AT2: return "AT2";
    case Family::Foc2: return "Foc2";
    case Family::Foc4: return "Foc4";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  const std::string n = normalized(name);
  if (n == "at1") return Family::AT1;
  if (n == "at2") return Family::AT2;
  if (n == "foc2") return Family::Foc2;
  if (n == "foc4") return Family::Foc4;
  throw InvalidArgument("unknown model family '" + std::string(name) + "' (expected AT1, AT2, Foc2 or Foc4)");
}

double Polynomial::operator()(double x) const {
  double r = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * x + *it;
  return r;
}

double Polynomial::derivative(double x) const {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 1;) r = r * x + static_cast<double>(i) * c[i];
  return r;
}

double Polynomial::second_derivative(double x) const {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 2;) r = r * x + static_cast<double>(i * (i - 1)) * c[i];
  return r;
}

DegradationSpec DegradationSpec::poly_family(int m) {
  if (m < 1) throw InvalidArgument("degradation family parameter m must be >= 1, got " + std::to_string(m));
  return {Kind::PolyFamily, m};
}

std::string DegradationSpec::name() const {
  switch (kind) {
    case Kind::QuadraticOneMinusAlpha: return "quadratic";
    case Kind::QuarticSquared: return "quartic_squared";
    case Kind::PolyFamily: return "poly" + std::to_string(m);
  }
  return "?";
}

DegradationSpec parse_degradation(std::string_view name) {
  const std::string n = normalized(name);
  if (n == "quadratic" || n == "quadraticoneminusalpha") return DegradationSpec::quadratic();
  if (n == "quarticsquared") return DegradationSpec::quartic_squared();
  if (n.rfind("poly", 0) == 0 && n.size() > 4) {
    const std::string digits = n.substr(4);
    if (std::all_of(digits.begin(), digits.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return DegradationSpec::poly_family(std::stoi(digits));
  }
  throw InvalidArgument("unknown degradation '" + std::string(name) +
                        "' (expected quadratic, quartic_squared or poly<m>)");
}

Polynomial degradation_polynomial(const DegradationSpec& spec) {
  switch (spec.kind) {
    case DegradationSpec::Kind::QuadraticOneMinusAlpha: return {{1.0, -2.0, 1.0}};
    case DegradationSpec::Kind::QuarticSquared: return {{1.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 1.0}};
    case DegradationSpec::Kind::PolyFamily: {
      const int m = spec.m;
      if (m < 1) throw InvalidArgument("degradation family parameter m must be >= 1");
      Polynomial p;
      p.c.assign(static_cast<std::size_t>(m + 5), 0.0);
      p.c[0] = 1.0;
      p.c[4] = -(1.0 + 4.0 / m);
      p.c[static_cast<std::size_t>(m + 4)] = 4.0 / m;
      return p;
    }
  }
  return {};
}

DegradationValue degradation(const DegradationSpec& spec, double alpha) {
  DegradationValue v;
  double a = alpha;
  if (a < 0.0 || a > 1.0) {
    a = std::clamp(a, 0.0, 1.0);
    v.clamped = true;
  }
  const Polynomial p = degradation_polynomial(spec);
  v.g = p(a);
  v.dg = p.derivative(a);
  v.d2g = p.second_derivative(a);
  return v;
}

DerivedDegradation derive_degradation(int m) {
  if (m < 1) throw InvalidArgument("derive_degradation: m must be >= 1, got " + std::to_string(m));
  // With s = 1 the right-hand side is -alpha^3 + alpha^(m+3).
  std::vector<double> rhs(static_cast<std::size_t>(m + 4), 0.0);
  rhs[3] = -1.0;
  rhs[static_cast<std::size_t>(m + 3)] = 1.0;

  // Antiderivative vanishing at 0.
  std::vector<double> anti(rhs.size() + 1, 0.0);
  for (std::size_t i = 0; i < rhs.size(); ++i) anti[i + 1] = rhs[i] / static_cast<double>(i + 1);

  double anti_at_one = 0.0;
  for (double c : anti) anti_at_one += c;
  // g = 1 + anti / s  and  g(1) = 0  =>  1/s = -1/anti(1).
  const double inv_s = -1.0 / anti_at_one;

  DerivedDegradation out;
  out.s = 1.0 / inv_s;
  out.g.c.assign(anti.size(), 0.0);
  out.g.c[0] = 1.0;
  for (std::size_t i = 1; i < anti.size(); ++i) out.g.c[i] = anti[i] * inv_s;
  return out;
}

double c_w(Family f) {
  switch (f) {
    case Family::AT1: return 8.0 / 3.0;
    case Family::AT2: return 2.0;
    default: throw InvalidArgument("c_w is defined for the AT families only");
  }
}

double b_w(double p) {
  if (!(p > 1.0)) throw InvalidArgument("b_w requires p > 1");
  const double q = p / (p - 1.0);
  return std::pow(2.0 / p, q);
}

ModelSpec::ModelSpec(Family family, std::optional<AnisotropyParams> anisotropy, DegradationSpec degradation,
                     double ell, double g0)
    : family_(family), anisotropy_(anisotropy), degradation_(degradation), ell_(ell), g0_(g0) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw InvalidArgument("ell must be positive, got " + fmt17(ell));
  if (!(g0 > 0.0) || !std::isfinite(g0)) throw InvalidArgument("g0 must be positive, got " + fmt17(g0));
  if (anisotropy_) {
    if (family == Family::AT1 || family == Family::AT2)
      throw InvalidArgument(std::string(to_string(family)) + " does not support anisotropy");
    if (family == Family::Foc2 && anisotropy_->k() != 2)
      throw InvalidArgument("Foc2 requires a two-fold anisotropy (k = 2)");
    if (family == Family::Foc4 && anisotropy_->k() != 4)
      throw InvalidArgument("Foc4 requires a four-fold anisotropy (k = 4)");
  }
  if (degradation.kind == DegradationSpec::Kind::PolyFamily && degradation.m < 1)
    throw InvalidArgument("degradation family parameter m must be >= 1");
}

LocalTerm surface_local(const ModelSpec& model, double alpha) {
  const double scale = model.g0() / model.ell();
  LocalTerm t = unit_local(model.family(), alpha);
  return {scale * t.value, scale * t.d1, scale * t.d2};
}

Polynomial surface_local_polynomial(const ModelSpec& model) {
  const double scale = model.g0() / model.ell();
  switch (model.family()) {
    case Family::AT1: return {{0.0, scale / c_w(Family::AT1)}};
    case Family::AT2:
    case Family::Foc2: return {{0.0, 0.0, 0.5 * scale}};
    case Family::Foc4: return {{0.0, 0.0, 0.0, 0.0, scale * 3.0 / (4.0 * b_w(4.0))}};
  }
  return {};
}

double gradient_coefficient(const ModelSpec& model) {
  const double l = model.ell();
  switch (model.family()) {
    case Family::AT1: return model.g0() * l / c_w(Family::AT1);
    case Family::AT2:
    case Family::Foc2: return 0.5 * model.g0() * l;
    case Family::Foc4: return 0.25 * model.g0() * l * l * l;
  }
  return 0.0;
}

NormPolynomial gradient_norm_polynomial(const ModelSpec& model) {
  if (model.anisotropy()) return norm_polynomial(*model.anisotropy());
  return euclidean_norm_polynomial(model.gradient_power());
}

namespace {

// Quotient of p by (x - 1), remainder dropped.
Polynomial deflate_at_one(const Polynomial& p) {
  Polynomial q;
  if (p.c.size() < 2) return q;
  q.c.assign(p.c.size() - 1, 0.0);
  double carry = 0.0;
  for (std::size_t i = p.c.size() - 1; i >= 1; --i) {
    carry = p.c[i] + carry;
    q.c[i - 1] = carry;
  }
  return q;
}

Polynomial derivative_polynomial(const Polynomial& p) {
  Polynomial d;
  for (std::size_t i = 1; i < p.c.size(); ++i) d.c.push_back(static_cast<double>(i) * p.c[i]);
  return d;
}

// sigma_bar and eps_bar with alpha already validated/clamped.
HomogeneousPoint homogeneous_unchecked(const ModelSpec& model, double alpha) {
  const Polynomial g = degradation_polynomial(model.degradation());
  HomogeneousPoint pt;
  if (alpha == 0.0) {
    // Leading-order limit of -2 w'(a) / g'(a) as a -> 0.
    const double dg0 = g.derivative(0.0);
    if (model.family() == Family::Foc4 && dg0 == 0.0) {
      // w' ~ 4 c a^3, g' ~ 4 g4 a^3 when g1 = g2 = g3 = 0.
      const bool cubic_start = g.c.size() > 4 && g.c[1] == 0.0 && g.c[2] == 0.0 && g.c[3] == 0.0;
      if (cubic_start && g.c[4] < 0.0) {
        const double c = 3.0 / (4.0 * b_w(4.0));
        pt.eps_bar = std::sqrt(-2.0 * c / g.c[4]);
      }
    } else if (model.family() == Family::AT1 && dg0 < 0.0) {
      pt.eps_bar = std::sqrt(-2.0 / (c_w(Family::AT1) * dg0));
    }
    pt.sigma_bar = g(0.0) * pt.eps_bar;
    return pt;
  }
  // Every degradation has a double root at alpha = 1. Evaluating g = (1-alpha)^2 q
  // and g' = -(1-alpha) r avoids the cancellation of the monomial form near 1.
  const double dw = unit_local(model.family(), alpha).d1;
  const double one_minus = 1.0 - alpha;
  const double q = deflate_at_one(deflate_at_one(g))(alpha);
  const double r = deflate_at_one(derivative_polynomial(g))(alpha);
  const double dg = -one_minus * r;
  if (!(dg < 0.0)) throw DomainError("homogeneous response undefined where g'(alpha) >= 0");
  pt.eps_bar = std::sqrt(2.0 * dw / (one_minus * r));
  pt.sigma_bar = one_minus * one_minus * q * pt.eps_bar;
  return pt;
}

constexpr double kAlphaClamp = 1e-12;

double sigma_bar_clamped(const ModelSpec& model, double alpha) {
  const double a = std::min(alpha, 1.0 - kAlphaClamp);
  return homogeneous_unchecked(model, a).sigma_bar;
}

}  // namespace

HomogeneousPoint homogeneous_response(const ModelSpec& model, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0))
    throw DomainError("homogeneous response requires alpha in [0,1), got " + fmt17(alpha));
  double a = alpha;
  if (model.family() == Family::Foc4 && a > 0.0) a = std::clamp(a, kAlphaClamp, 1.0 - kAlphaClamp);
  return homogeneous_unchecked(model, a);
}

double critical_damage(const ModelSpec& model) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0 - kAlphaClamp;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = sigma_bar_clamped(model, x1);
  double f2 = sigma_bar_clamped(model, x2);
  while (hi - lo > 1e-8) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = sigma_bar_clamped(model, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = sigma_bar_clamped(model, x1);
    }
  }
  const double mid = 0.5 * (lo + hi);
  // The search cannot see a maximum sitting on the left end of the bracket.
  return sigma_bar_clamped(model, 0.0) >= sigma_bar_clamped(model, mid) ? 0.0 : mid;
}

MonotonicityScan stress_monotonicity_scan(int m) {
  if (m < 1 || m > 8) throw InvalidArgument("stress_monotonicity_scan: m must lie in [1,8]");
  const ModelSpec model(Family::Foc4, std::nullopt, DegradationSpec::poly_family(m), 1.0);
  constexpr int n = 10000;
  const double step = 1.0 / (n - 1);
  std::vector<double> sigma(n);
  for (int i = 0; i < n; ++i) sigma[i] = sigma_bar_clamped(model, i * step);

  MonotonicityScan scan{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 1; i + 1 < n; ++i) {
    const double d = (sigma[i + 1] - sigma[i - 1]) / (2.0 * step);
    scan.min_derivative = std::min(scan.min_derivative, d);
    scan.max_derivative = std::max(scan.max_derivative, d);
  }
  return scan;
}

namespace {

double profile_decay_length(const ModelSpec& model) {
  if (model.family() == Family::Foc4) return std::pow(b_w(4.0), 0.25) * model.ell();
  return model.ell();
}

}  // namespace

double optimal_profile(const ModelSpec& model, double t) {
  const double at = std::abs(t);
  const double l = model.ell();
  if (model.family() == Family::AT1) {
    if (at >= 2.0 * l) return 0.0;
    const double r = 1.0 - at / (2.0 * l);
    return r * r;
  }
  return std::exp(-at / profile_decay_length(model));
}

double optimal_profile_slope(const ModelSpec& model, double t) {
  const double at = std::abs(t);
  const double sign = t < 0.0 ? 1.0 : -1.0;
  const double l = model.ell();
  if (model.family() == Family::AT1) {
    if (at >= 2.0 * l) return 0.0;
    return sign * (1.0 - at / (2.0 * l)) / l;
  }
  const double d = profile_decay_length(model);
  return sign * std::exp(-at / d) / d;
}

double profile_surface_energy(const ModelSpec& model, double half_length, double h) {
  if (!(half_length > 0.0) || !(h > 0.0)) throw InvalidArgument("profile_surface_energy: L and h must be positive");
  const int n = static_cast<int>(std::lround(2.0 * half_length / h));
  const double step = 2.0 * half_length / n;
  const double cgrad = gradient_coefficient(model);
  const int p = model.gradient_power();
  auto density = [&](double t) {
    const double a = optimal_profile(model, t);
    const double s = std::abs(optimal_profile_slope(model, t));
    return surface_local(model, a).value + cgrad * std::pow(s, p);
  };
  double sum = 0.5 * (density(-half_length) + density(half_length));
  for (int i = 1; i < n; ++i) sum += density(-half_length + i * step);
  return sum * step / model.g0();
}

namespace {

struct HalfLineEnergy {
  const ModelSpec& model;
  double h;
  int p;
  double cgrad;

  // alpha[0] is the fixed crack value 1.
  double value(const std::vector<double>& a) const {
    double e = 0.0;
    const std::size_t n = a.size() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (a[i + 1] - a[i]) / h;
      e += 0.5 * h * (surface_local(model, a[i]).value + surface_local(model, a[i + 1]).value);
      e += h * cgrad * std::pow(std::abs(d), p);
    }
    return e;
  }

  void gradient_hessian(const std::vector<double>& a, std::vector<double>& g, std::vector<double>& diag,
                        std::vector<double>& off) const {
    const std::size_t n = a.size();
    g.assign(n, 0.0);
    diag.assign(n, 0.0);
    off.assign(n, 0.0);  // off[i] couples i and i+1
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j : {i, i + 1}) {
        const LocalTerm lt = surface_local(model, a[j]);
        g[j] += 0.5 * h * lt.d1;
        diag[j] += 0.5 * h * lt.d2;
      }
      const double d = (a[i + 1] - a[i]) / h;
      const double dp1 = p == 2 ? d : d * d * d;
      const double dp2 = p == 2 ? 1.0 : d * d;
      const double first = cgrad * p * dp1;                     // d/d(a_{i+1}) of h*c*|d|^p
      const double second = cgrad * p * (p - 1) * dp2 / h;      // second derivative
      g[i] -= first;
      g[i + 1] += first;
      diag[i] += second;
      diag[i + 1] += second;
      off[i] -= second;
    }
  }
};

// Solves the tridiagonal system in place; rhs becomes the solution.
void thomas_solve(std::vector<double> diag, std::vector<double> off, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = off[i - 1] / diag[i - 1];
    diag[i] -= w * off[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

Profile1D minimize_profile_1d(const ModelSpec& model, double half_length, double h) {
  if (!(half_length > 0.0) || !(h > 0.0)) throw InvalidArgument("minimize_profile_1d: L and h must be positive");
  const int n = static_cast<int>(std::lround(half_length / h));
  const double step = half_length / n;
  const double l = model.ell();

  HalfLineEnergy energy{model, step, model.gradient_power(), gradient_coefficient(model)};

  Profile1D out;
  out.t.resize(static_cast<std::size_t>(n) + 1);
  std::vector<double> a(out.t.size());
  for (int i = 0; i <= n; ++i) {
    out.t[i] = i * step;
    const double r = 1.0 + out.t[i] / l;
    a[i] = 1.0 / (r * r);
  }
  a[0] = 1.0;

  std::vector<double> g, diag, off, dir, trial(a.size());
  double e = energy.value(a);
  double damping = 1e-8;
  const double gscale = model.g0() * step / l;
  int iter = 0;
  bool stalled = false;
  for (; iter < 5000 && !stalled; ++iter) {
    energy.gradient_hessian(a, g, diag, off);

    // Free set: interior of the box, or on the bound with a descent direction pointing inside.
    std::vector<char> active(a.size(), 0);
    active[0] = 1;
    double pg = 0.0;
    for (std::size_t i = 1; i < a.size(); ++i) {
      if (a[i] <= 0.0 && g[i] > 0.0)
        active[i] = 1;
      else
        pg = std::max(pg, std::abs(g[i]));
    }
    if (pg <= 1e-14 * gscale) break;

    const double scale = *std::max_element(diag.begin(), diag.end());
    bool accepted = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      std::vector<double> dd(diag), oo(off);
      dir.assign(a.size(), 0.0);
      for (std::size_t i = 0; i < a.size(); ++i) {
        dd[i] += damping * scale;
        if (active[i]) {
          dd[i] = 1.0;
          if (i > 0) oo[i - 1] = 0.0;
          oo[i] = 0.0;
        } else {
          dir[i] = -g[i];
        }
      }
      thomas_solve(dd, oo, dir);
      for (std::size_t i = 0; i < a.size(); ++i) trial[i] = active[i] ? a[i] : std::max(0.0, a[i] + dir[i]);
      const double et = energy.value(trial);
      if (et <= e) {
        accepted = true;
        const double change = e - et;
        a.swap(trial);
        e = et;
        damping = std::max(damping * 0.25, 1e-14);
        if (change <= 1e-16 * std::abs(e) && pg <= 1e-10 * gscale) stalled = true;
      } else {
        damping *= 8.0;
      }
    }
    if (!accepted) break;
  }
  out.alpha = std::move(a);
  out.energy = 2.0 * e / model.g0();
  out.iterations = iter;
  return out;
}

double fit_decay_constant(const Profile1D& profile, double ell, double lo, double hi) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < profile.t.size(); ++i) {
    const double a = profile.alpha[i];
    if (a < lo || a > hi) continue;
    const double x = profile.t[i];
    const double y = std::log(a);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw DomainError("fit_decay_constant: fewer than two samples in the fitting window");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope * ell;
}

}  // namespace fraktur
