#include "fraktur/verification.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "fraktur/anisotropy.hpp"
#include "fraktur/error.hpp"
#include "fraktur/fem_assembly.hpp"
#include "fraktur/format.hpp"
#include "fraktur/material_models.hpp"
#include "fraktur/solver.hpp"
#include "fraktur/wellposedness.hpp"

namespace fraktur {

namespace {

using Checks = std::vector<CheckResult>;

void add(Checks& out, std::string name, bool pass, std::string measured) {
  out.push_back({std::move(name), pass, std::move(measured)});
}

ModelSpec iso(Family f, DegradationSpec g = DegradationSpec::quadratic(), double ell = 1.0) {
  return ModelSpec(f, std::nullopt, g, ell);
}

Checks homogeneous_suite() {
  Checks out;
  const double at2 = critical_damage(iso(Family::AT2));
  add(out, "AT2 argmax sigma_bar = 0.25", std::abs(at2 - 0.25) <= 1e-6, fmt17(at2));
  const double foc4 = critical_damage(iso(Family::Foc4));
  add(out, "Foc4 (quadratic g) argmax sigma_bar = 0.5", std::abs(foc4 - 0.5) <= 1e-6, fmt17(foc4));
  const MonotonicityScan m4 = stress_monotonicity_scan(4);
  add(out, "Foc4 (1-a^4)^2: d sigma_bar/d alpha <= 1e-8", m4.max_derivative <= 1e-8, fmt_sci(m4.max_derivative));
  for (int m = 1; m <= 3; ++m) {
    const MonotonicityScan s = stress_monotonicity_scan(m);
    add(out, "poly" + std::to_string(m) + " degradation is not monotone", s.max_derivative > 1e-8,
        fmt_sci(s.max_derivative));
  }
  const DerivedDegradation d = derive_degradation(4);
  const Polynomial target = degradation_polynomial(DegradationSpec::quartic_squared());
  double diff = 0.0;
  for (std::size_t i = 0; i < std::max(d.g.c.size(), target.c.size()); ++i) {
    const double a = i < d.g.c.size() ? d.g.c[i] : 0.0;
    const double b = i < target.c.size() ? target.c[i] : 0.0;
    diff = std::max(diff, std::abs(a - b));
  }
  add(out, "derive_degradation(4) = (1-a^4)^2", diff == 0.0, "max coefficient difference " + fmt_sci(diff));
  return out;
}

Checks profiles_suite() {
  Checks out;
  const double ell = 0.04;
  const DegradationSpec q = DegradationSpec::quadratic();
  for (Family f : {Family::AT1, Family::AT2, Family::Foc4}) {
    const ModelSpec model(f, std::nullopt, q, ell);
    const Profile1D p = minimize_profile_1d(model, 25.0 * ell, ell / 20.0);
    double err = 0.0;
    for (std::size_t i = 0; i < p.t.size(); ++i) err = std::max(err, std::abs(p.alpha[i] - optimal_profile(model, p.t[i])));
    const std::string name(to_string(f));
    add(out, name + " minimized profile matches closed form (Linf <= 0.02)", err <= 0.02, fmt_sci(err));
    add(out, name + " minimized profile energy 1.00 +- 0.01", std::abs(p.energy - 1.0) <= 0.01, fmt_fixed(p.energy, 4));
    const double e = profile_surface_energy(model, 25.0 * ell, ell / 200.0);
    add(out, name + " closed-form profile energy 1.00 +- 0.01", std::abs(e - 1.0) <= 0.01, fmt_fixed(e, 4));
    if (f == Family::Foc4) {
      const double k = fit_decay_constant(p, ell);
      add(out, "Foc4 decay constant 2^(1/3) within 2%", std::abs(k / std::cbrt(2.0) - 1.0) <= 0.02, fmt_fixed(k, 4));
    }
  }
  return out;
}

Checks anisotropy_suite() {
  Checks out;
  const AnisotropyParams w2(2, 1.0 / 3.0, 0.3), s2(2, 0.34, 0.3), w4(4, 1.0 / 15.0, 0.1), s4(4, 0.07, 0.1);
  add(out, "k=2 weak threshold 1/3", weak_anisotropy_check(w2).is_weak && !weak_anisotropy_check(s2).is_weak,
      fmt17(weak_anisotropy_check(w2).tau_threshold));
  add(out, "k=4 weak threshold 1/15", weak_anisotropy_check(w4).is_weak && !weak_anisotropy_check(s4).is_weak,
      fmt17(weak_anisotropy_check(w4).tau_threshold));
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, 0.99), W(0.0, 2.0 * std::numbers::pi);
  double worst_bound = 0.0, worst_tensor = 0.0, worst_iso = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const int k = i % 2 ? 4 : 2;
    const AnisotropyParams p(k, T(rng), W(rng));
    const Vec2 xi(U(rng), U(rng));
    const NormBounds b = norm_bounds(p, xi);
    worst_bound = std::max(worst_bound, std::max(b.lower - b.value, b.value - b.upper));
    const double phi = induced_norm_density(p, xi).value;
    const double t = k == 2 ? contract(structure_tensor2(p), xi) : contract(structure_tensor4(p), xi);
    worst_tensor = std::max(worst_tensor, std::abs(phi - t));
    const AnisotropyParams p0(k, 0.0, W(rng));
    worst_iso = std::max(worst_iso, std::abs(induced_norm_density(p0, xi).value - euclidean_norm_density(k, xi).value));
  }
  add(out, "(1-tau)|xi|^k <= phi^k <= (1+tau)|xi|^k", worst_bound <= 1e-12, fmt_sci(worst_bound));
  add(out, "phi^k equals structure-tensor contraction", worst_tensor <= 1e-12, fmt_sci(worst_tensor));
  add(out, "tau = 0 gives the Euclidean norm", worst_iso <= 1e-12, fmt_sci(worst_iso));
  double worst_normal = 0.0;
  for (int i = 0; i < 200; ++i) {
    const AnisotropyParams p(i % 2 ? 4 : 2, T(rng), W(rng));
    const double th = W(rng);
    const Vec2 n(-std::sin(th), std::cos(th));
    worst_normal = std::max(worst_normal, std::abs(gamma_normal(p, n) - gamma(p, th)));
  }
  add(out, "gamma from the normal matches gamma(theta)", worst_normal <= 1e-12, fmt_sci(worst_normal));
  return out;
}

double rel_inf(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() / std::max(b.cwiseAbs().maxCoeff(), 1e-300);
}

Checks gradients_suite() {
  Checks out;
  const TriMesh mesh = structured_rectangle(10, 10, 0.0, 0.0, 1.0, 1.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const std::vector<ModelSpec> models{
      ModelSpec(Family::AT1, std::nullopt, DegradationSpec::quadratic(), 0.1),
      ModelSpec(Family::AT2, std::nullopt, DegradationSpec::quadratic(), 0.1),
      ModelSpec(Family::Foc2, AnisotropyParams(2, 0.6, 0.4), DegradationSpec::quadratic(), 0.1),
      ModelSpec(Family::Foc4, AnisotropyParams(4, 0.5, 0.3), DegradationSpec::quartic_squared(), 0.1)};
  for (const auto& model : models) {
    const Assembler as(mesh, model, 1.0);
    const std::size_t n = as.num_nodes();
    const double lam = penalty_lambda_hat(model.family(), model.g0(), model.ell(), 0.01);
    SimState s = SimState::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
      s.u[i] = U(rng) - 0.5;
      s.alpha[i] = 0.05 + 0.9 * U(rng);
      // Keep the penalty away from its kink so central differences are smooth.
      s.alpha_prev[i] = s.alpha[i] + (i % 2 ? 0.02 : -0.02);
    }
    const double h = 1e-6;
    Vector fd_u(n), fd_a(n);
    for (std::size_t i = 0; i < n; ++i) {
      SimState p = s, m = s;
      p.u[i] += h;
      m.u[i] -= h;
      fd_u[i] = (as.energy(p, lam).total - as.energy(m, lam).total) / (2 * h);
      p = s;
      m = s;
      p.alpha[i] += h;
      m.alpha[i] -= h;
      fd_a[i] = (as.energy(p, lam).total - as.energy(m, lam).total) / (2 * h);
    }
    const std::string name(to_string(model.family()));
    const double eu = rel_inf(fd_u, as.residual_u(s));
    const double ea = rel_inf(fd_a, as.residual_alpha(s, lam));
    const Eigen::MatrixXd hess = Eigen::MatrixXd(as.hessian_alpha(s, lam));
    double eh = 0.0;
    for (std::size_t j = 0; j < n; j += 7) {
      SimState p = s, m = s;
      p.alpha[j] += h;
      m.alpha[j] -= h;
      const Vector col = (as.residual_alpha(p, lam) - as.residual_alpha(m, lam)) / (2 * h);
      eh = std::max(eh, rel_inf(col, hess.col(static_cast<Eigen::Index>(j))));
    }
    add(out, name + " F_u matches central differences", eu <= 1e-5, fmt_sci(eu));
    add(out, name + " F_alpha matches central differences", ea <= 1e-5, fmt_sci(ea));
    add(out, name + " F_alphaalpha matches central differences", eh <= 1e-5, fmt_sci(eh));
  }
  return out;
}

Checks wellposed_suite() {
  Checks out;
  const auto [l1, l2] = hessian_eigs_foc2(0.5, 0.0, 1.0, 0.04);
  add(out, "Foc2 eigenvalues (0.06, 0.02) at tau=0.5, ell=0.04",
      std::abs(l1 - 0.06) <= 1e-15 && std::abs(l2 - 0.02) <= 1e-15, "(" + fmt17(l1) + ", " + fmt17(l2) + ")");
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-1.0, 1.0), T(0.0, 0.99), W(0.0, 2.0 * std::numbers::pi);
  double worst = 0.0, worst_bound = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double tau = T(rng), omega = W(rng);
    const Vec2 xi(U(rng), U(rng));
    const auto c2 = hessian_eigs_foc2(tau, omega, 1.0, 0.04);
    const auto n2 = numeric_hessian_eigs(2, xi, tau, omega, 1.0, 0.04);
    const auto c4 = hessian_eigs_foc4(xi, tau, omega, 1.0, 0.04);
    const auto n4 = numeric_hessian_eigs(4, xi, tau, omega, 1.0, 0.04);
    const double s4 = std::max(std::abs(c4.first), 1e-300);
    worst = std::max({worst, std::abs(c2.first - n2.first) / c2.first, std::abs(c2.second - n2.second) / c2.first,
                      std::abs(c4.first - n4.first) / s4, std::abs(c4.second - n4.second) / s4});
    const double bound = 0.04 * 0.04 * 0.04 * xi.squaredNorm() * (1.0 - 3.0 * tau);
    worst_bound = std::max(worst_bound, bound - c4.second);
  }
  add(out, "closed-form eigenvalues match the numerical xi-Hessian", worst <= 1e-8, fmt_sci(worst));
  add(out, "Foc4 lambda2 >= G0 ell^3 |xi|^2 (1 - 3 tau)", worst_bound <= 1e-10, fmt_sci(worst_bound));
  const double m13 = foc4_min_lambda2(1.0 / 3.0, 1.0, 1.0);
  add(out, "Foc4 min lambda2 = 0 at tau = 1/3", std::abs(m13) <= 1e-8, fmt_sci(m13));
  const double m05 = foc4_min_lambda2(0.5, 1.0, 1.0);
  add(out, "Foc4 min lambda2 < 0 at tau = 0.5", m05 < 0.0, fmt_sci(m05));
  const CoercivityCheck c = coercivity_bound(WellposedFamily::Foc2, 0.5, 0.0, 0.0, Vec2(1.0, 0.0), 1.0, 0.04);
  add(out, "Foc2 coercivity bound 0.01 at its infimum", std::abs(c.bound - 0.01) <= 1e-15 && std::abs(c.density - 0.01) <= 1e-15,
      fmt17(c.bound));
  const CurvatureWitness w = foc4_negative_curvature_witness(100.0, 1.0, 0.04);
  add(out, "Foc4 alpha-curvature has a negative witness", w.curvature < 0.0,
      "alpha=" + fmt_fixed(w.alpha, 3) + " psi=" + fmt17(w.psi) + " curvature=" + fmt_sci(w.curvature));
  add(out, "Foc2 alpha-curvature positive", alpha_curvature_foc2(0.5, 0.0, 1.0, 0.04) > 0.0,
      fmt17(alpha_curvature_foc2(0.5, 0.0, 1.0, 0.04)));
  bool table = true;
  for (double tau : {0.0, 0.2, 1.0 / 3.0, 0.5, 0.9}) {
    const auto iso4 = classify(WellposedFamily::IsoFoc4, tau);
    const auto f2 = classify(WellposedFamily::Foc2, tau);
    const auto f4 = classify(WellposedFamily::Foc4, tau);
    table = table && iso4.existence == Verdict::Shown && iso4.uniqueness == Verdict::NotShownByDM;
    table = table && f2.existence == Verdict::Shown && f2.uniqueness == Verdict::Shown;
    table = table && f4.existence == (tau <= 1.0 / 3.0 ? Verdict::Shown : Verdict::NotShownByDM) &&
            f4.uniqueness == Verdict::NotShownByDM;
  }
  add(out, "classification table", table, table ? "all entries match" : "mismatch");
  return out;
}

}  // namespace

std::vector<std::string> suite_names() { return {"homogeneous", "profiles", "anisotropy", "gradients", "wellposed", "all"}; }

std::vector<CheckResult> run_suite(std::string_view name) {
  if (name == "homogeneous") return homogeneous_suite();
  if (name == "profiles") return profiles_suite();
  if (name == "anisotropy") return anisotropy_suite();
  if (name == "gradients") return gradients_suite();
  if (name == "wellposed") return wellposed_suite();
  if (name == "all") {
    Checks all;
    for (const auto& s : {"homogeneous", "profiles", "anisotropy", "gradients", "wellposed"}) {
      Checks part = run_suite(s);
      for (auto& c : part) c.name = std::string(s) + ": " + c.name;
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw InvalidArgument("unknown suite '" + std::string(name) +
                        "' (expected homogeneous, profiles, anisotropy, gradients, wellposed or all)");
}

}  // namespace fraktur
