#include "fraktur/fem_assembly.hpp"

#include <algorithm>
#include <cmath>

#include "fraktur/error.hpp"
#include "fraktur/parallel.hpp"

namespace fraktur {

SimState SimState::zeros(std::size_t n) {
  SimState s;
  s.u = Vector::Zero(static_cast<Eigen::Index>(n));
  s.alpha = Vector::Zero(static_cast<Eigen::Index>(n));
  s.alpha_prev = Vector::Zero(static_cast<Eigen::Index>(n));
  return s;
}

QuadratureRule quadrature_rule(int degree) {
  QuadratureRule r;
  auto orbit3 = [&r](double a, double b, double w) {
    r.points.push_back({a, b, b});
    r.points.push_back({b, a, b});
    r.points.push_back({b, b, a});
    r.weights.insert(r.weights.end(), 3, w);
  };
  if (degree <= 1) {
    r.degree = 1;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(1.0);
  } else if (degree == 2) {
    r.degree = 2;
    orbit3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0);
  } else if (degree <= 4) {
    r.degree = 4;
    orbit3(0.108103018168070, 0.445948490915965, 0.223381589678011);
    orbit3(0.816847572980459, 0.091576213509771, 0.109951743655322);
  } else if (degree == 5) {
    r.degree = 5;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(0.225);
    orbit3(0.059715871789770, 0.470142064105115, 0.132394152788506);
    orbit3(0.797426985353087, 0.101286507323456, 0.125939180544827);
  } else {
    throw InvalidArgument("quadrature degree must lie in 1..5, got " + std::to_string(degree));
  }
  return r;
}

Vector DisplacementSystem::expand(const Vector& reduced) const {
  Vector full = fixed;
  for (std::size_t k = 0; k < free_nodes.size(); ++k) full[free_nodes[k]] = reduced[static_cast<Eigen::Index>(k)];
  return full;
}

Assembler::Assembler(const TriMesh& mesh, const ModelSpec& model, double mu, int quad_degree)
    : Assembler(mesh, std::vector<ModelSpec>{model}, std::vector<int>(mesh.triangles.size(), 0), mu, quad_degree) {}

Assembler::Assembler(const TriMesh& mesh, std::vector<ModelSpec> materials, std::vector<int> element_material,
                     double mu, int quad_degree)
    : mesh_(mesh),
      materials_(std::move(materials)),
      element_material_(std::move(element_material)),
      mu_(mu),
      rule_(quadrature_rule(quad_degree)),
      kernels_(&simd::kernels()) {
  if (materials_.empty()) throw InvalidArgument("at least one material model is required");
  if (!(mu > 0.0)) throw InvalidArgument("shear modulus mu must be positive");
  if (element_material_.size() != mesh_.triangles.size())
    throw InvalidArgument("element material map does not match the triangle count");
  validate(mesh_);

  groups_.assign(materials_.size(), {});
  for (std::size_t e = 0; e < element_material_.size(); ++e) {
    const int m = element_material_[e];
    if (m < 0 || m >= static_cast<int>(materials_.size()))
      throw InvalidArgument("element " + std::to_string(e) + " refers to unknown material " + std::to_string(m));
    groups_[m].push_back(static_cast<int>(e));
  }

  const std::size_t ne = mesh_.triangles.size();
  area_.resize(ne);
  for (auto& v : bx_) v.resize(ne);
  for (auto& v : by_) v.resize(ne);
  nodal_weight_ = Vector::Zero(static_cast<Eigen::Index>(mesh_.vertices.size()));
  for (std::size_t e = 0; e < ne; ++e) {
    const auto& t = mesh_.triangles[e];
    const Vec2& p0 = mesh_.vertices[t[0]];
    const Vec2& p1 = mesh_.vertices[t[1]];
    const Vec2& p2 = mesh_.vertices[t[2]];
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    area_[e] = 0.5 * det;
    bx_[0][e] = (p1.y() - p2.y()) / det;
    by_[0][e] = (p2.x() - p1.x()) / det;
    bx_[1][e] = (p2.y() - p0.y()) / det;
    by_[1][e] = (p0.x() - p2.x()) / det;
    bx_[2][e] = (p0.y() - p1.y()) / det;
    by_[2][e] = (p1.x() - p0.x()) / det;
    for (int k = 0; k < 3; ++k) nodal_weight_[t[k]] += area_[e] / 3.0;
  }
  build_patterns();
}

namespace {

int value_index(const SparseMatrix& m, int row, int col) {
  const int* inner = m.innerIndexPtr();
  const int begin = m.outerIndexPtr()[col];
  const int end = m.outerIndexPtr()[col + 1];
  const int* it = std::lower_bound(inner + begin, inner + end, row);
  if (it == inner + end || *it != row) throw std::logic_error("sparsity pattern is missing an element entry");
  return static_cast<int>(it - inner);
}

}  // namespace

void Assembler::build_patterns() {
  const int n = static_cast<int>(mesh_.vertices.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(mesh_.triangles.size() * 9);
  for (const auto& t : mesh_.triangles)
    for (int a : t)
      for (int b : t) trips.emplace_back(a, b, 0.0);
  full_pattern_.resize(n, n);
  full_pattern_.setFromTriplets(trips.begin(), trips.end());
  full_pattern_.makeCompressed();
  full_scatter_.resize(mesh_.triangles.size() * 9);
  for (std::size_t e = 0; e < mesh_.triangles.size(); ++e) {
    const auto& t = mesh_.triangles[e];
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) full_scatter_[e * 9 + k * 3 + l] = value_index(full_pattern_, t[k], t[l]);
  }
}

const Assembler::ReducedPattern& Assembler::reduced_pattern(const std::vector<int>& dirichlet_nodes) const {
  std::lock_guard lock(reduced_mutex_);
  for (const auto& p : reduced_cache_)
    if (p->dirichlet_nodes == dirichlet_nodes) return *p;

  auto p = std::make_unique<ReducedPattern>();
  p->dirichlet_nodes = dirichlet_nodes;
  const int n = static_cast<int>(mesh_.vertices.size());
  p->free_index.assign(n, 0);
  for (int v : dirichlet_nodes) {
    if (v < 0 || v >= n) throw InvalidArgument("Dirichlet node " + std::to_string(v) + " out of range");
    p->free_index[v] = -1;
  }
  for (int v = 0; v < n; ++v)
    if (p->free_index[v] >= 0) {
      p->free_index[v] = static_cast<int>(p->free_nodes.size());
      p->free_nodes.push_back(v);
    }
  const int nf = static_cast<int>(p->free_nodes.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (const auto& t : mesh_.triangles)
    for (int a : t)
      for (int b : t)
        if (p->free_index[a] >= 0 && p->free_index[b] >= 0)
          trips.emplace_back(p->free_index[a], p->free_index[b], 0.0);
  p->pattern.resize(nf, nf);
  p->pattern.setFromTriplets(trips.begin(), trips.end());
  p->pattern.makeCompressed();
  p->scatter.assign(mesh_.triangles.size() * 9, -1);
  for (std::size_t e = 0; e < mesh_.triangles.size(); ++e) {
    const auto& t = mesh_.triangles[e];
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        const int fa = p->free_index[t[k]], fb = p->free_index[t[l]];
        if (fa >= 0 && fb >= 0) p->scatter[e * 9 + k * 3 + l] = value_index(p->pattern, fa, fb);
      }
  }
  reduced_cache_.push_back(std::move(p));
  return *reduced_cache_.back();
}

void Assembler::check_state(const SimState& s) const {
  const auto n = static_cast<Eigen::Index>(mesh_.vertices.size());
  if (s.u.size() != n || s.alpha.size() != n || s.alpha_prev.size() != n)
    throw InvalidArgument("state arrays do not match the mesh vertex count");
}

void Assembler::evaluate(const Vector* u, const Vector& alpha, const Vector* alpha_prev, double lambda_hat,
                         bool residual_stiffness, unsigned want, ElementOutput& out) const {
  const std::size_t ne = mesh_.triangles.size();
  if (want & kEnergy) {
    out.e_el.assign(ne, 0.0);
    out.e_surf.assign(ne, 0.0);
    out.e_pen.assign(ne, 0.0);
  }
  if (want & kResU) out.res_u.assign(ne * 3, 0.0);
  if (want & kResA) out.res_a.assign(ne * 3, 0.0);
  if (want & kHessA) out.hess_a.assign(ne * 9, 0.0);
  if (want & kStiff) out.stiff.assign(ne * 9, 0.0);

  constexpr std::size_t kChunk = 512;
  struct Item {
    std::size_t group, begin, end;
  };
  std::vector<Item> items;
  for (std::size_t g = 0; g < groups_.size(); ++g)
    for (std::size_t b = 0; b < groups_[g].size(); b += kChunk)
      items.push_back({g, b, std::min(groups_[g].size(), b + kChunk)});

  const bool need_alpha_grad = want & (kEnergy | kResA | kHessA);
  const bool need_u = want & (kEnergy | kResU | kResA | kHessA);
  const std::size_t nq = rule_.weights.size();
  const simd::KernelTable& K = *kernels_;

  parallel_for(items.size(), 1, [&](std::size_t ib, std::size_t ie) {
    std::vector<double> buf[40];
    for (std::size_t it = ib; it < ie; ++it) {
      const Item& item = items[it];
      const ModelSpec& model = materials_[item.group];
      const int* elems = groups_[item.group].data() + item.begin;
      const std::size_t n = item.end - item.begin;
      for (auto& b : buf) b.resize(n);
      double* av[3] = {buf[0].data(), buf[1].data(), buf[2].data()};
      double* apv[3] = {buf[3].data(), buf[4].data(), buf[5].data()};
      double* uv[3] = {buf[6].data(), buf[7].data(), buf[8].data()};
      double* bxv[3] = {buf[9].data(), buf[10].data(), buf[11].data()};
      double* byv[3] = {buf[12].data(), buf[13].data(), buf[14].data()};
      double *gux = buf[15].data(), *guy = buf[16].data(), *gax = buf[17].data(), *gay = buf[18].data();
      double *phi = buf[19].data(), *dphx = buf[20].data(), *dphy = buf[21].data();
      double *hxx = buf[22].data(), *hxy = buf[23].data(), *hyy = buf[24].data();
      double *aq = buf[25].data(), *apq = buf[26].data();
      double *gq = buf[27].data(), *dgq = buf[28].data(), *d2gq = buf[29].data();
      double *fq = buf[30].data(), *dfq = buf[31].data(), *d2fq = buf[32].data();
      double *psi = buf[33].data();

      for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<std::size_t>(elems[i]);
        const auto& t = mesh_.triangles[e];
        for (int k = 0; k < 3; ++k) {
          av[k][i] = alpha[t[k]];
          apv[k][i] = alpha_prev ? (*alpha_prev)[t[k]] : 0.0;
          uv[k][i] = u ? (*u)[t[k]] : 0.0;
          bxv[k][i] = bx_[k][e];
          byv[k][i] = by_[k][e];
        }
      }
      if (need_u && u) {
        K.gradient(n, uv, bxv, byv, gux, guy);
        for (std::size_t i = 0; i < n; ++i) psi[i] = 0.5 * mu_ * (gux[i] * gux[i] + guy[i] * guy[i]);
      } else {
        std::fill(gux, gux + n, 0.0);
        std::fill(guy, guy + n, 0.0);
        std::fill(psi, psi + n, 0.0);
      }
      const double cgrad = gradient_coefficient(model);
      if (need_alpha_grad) {
        K.gradient(n, av, bxv, byv, gax, gay);
        const NormPolynomial np = gradient_norm_polynomial(model);
        simd::NormCoefficients nc;
        nc.k = np.k;
        for (int c = 0; c < 5; ++c) nc.c[c] = np.c[c];
        K.norm_density(n, nc, gax, gay, phi, dphx, dphy, hxx, hxy, hyy);
      }
      const Polynomial gpoly = degradation_polynomial(model.degradation());
      const Polynomial fpoly = surface_local_polynomial(model);

      // Element-local accumulators over quadrature points.
      for (std::size_t q = 0; q < nq; ++q) {
        const auto& lam = rule_.points[q];
        const double w = rule_.weights[q];
        for (std::size_t i = 0; i < n; ++i) {
          aq[i] = lam[0] * av[0][i] + lam[1] * av[1][i] + lam[2] * av[2][i];
          apq[i] = lam[0] * apv[0][i] + lam[1] * apv[1][i] + lam[2] * apv[2][i];
        }
        K.polynomial(n, gpoly.c.data(), gpoly.degree(), aq, gq, dgq, d2gq);
        K.polynomial(n, fpoly.c.data(), fpoly.degree(), aq, fq, dfq, d2fq);

        for (std::size_t i = 0; i < n; ++i) {
          const auto e = static_cast<std::size_t>(elems[i]);
          const double area = area_[e];
          const double gap = alpha_prev ? aq[i] - apq[i] : 0.0;
          const double neg = std::min(0.0, gap);
          if (want & kEnergy) {
            out.e_el[e] += area * w * gq[i] * psi[i];
            out.e_surf[e] += area * w * fq[i];
            out.e_pen[e] += area * w * 0.5 * lambda_hat * neg * neg;
          }
          if (want & kResU) {
            const double gw = area * w * gq[i] * mu_;
            for (int k = 0; k < 3; ++k) out.res_u[e * 3 + k] += gw * (gux[i] * bxv[k][i] + guy[i] * byv[k][i]);
          }
          if (want & kResA) {
            const double local = dgq[i] * psi[i] + dfq[i] + lambda_hat * neg;
            for (int k = 0; k < 3; ++k) out.res_a[e * 3 + k] += area * w * lam[k] * local;
          }
          if (want & kHessA) {
            const double local = d2gq[i] * psi[i] + d2fq[i] + (alpha_prev && gap <= 0.0 ? lambda_hat : 0.0);
            for (int k = 0; k < 3; ++k)
              for (int l = 0; l < 3; ++l) out.hess_a[e * 9 + k * 3 + l] += area * w * lam[k] * lam[l] * local;
          }
          if (want & kStiff) {
            const double g = residual_stiffness ? std::max(gq[i], kResidualStiffness) : gq[i];
            const double gw = area * w * g * mu_;
            for (int k = 0; k < 3; ++k)
              for (int l = 0; l < 3; ++l)
                out.stiff[e * 9 + k * 3 + l] += gw * (bxv[k][i] * bxv[l][i] + byv[k][i] * byv[l][i]);
          }
        }
      }

      // Gradient terms are element-constant.
      for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<std::size_t>(elems[i]);
        const double ca = area_[e] * cgrad;
        if (want & kEnergy) out.e_surf[e] += ca * phi[i];
        if (want & kResA)
          for (int k = 0; k < 3; ++k) out.res_a[e * 3 + k] += ca * (dphx[i] * bxv[k][i] + dphy[i] * byv[k][i]);
        if (want & kHessA)
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l) {
              const double hx = hxx[i] * bxv[l][i] + hxy[i] * byv[l][i];
              const double hy = hxy[i] * bxv[l][i] + hyy[i] * byv[l][i];
              out.hess_a[e * 9 + k * 3 + l] += ca * (bxv[k][i] * hx + byv[k][i] * hy);
            }
      }
    }
  });
}

EnergyBreakdown Assembler::energy(const SimState& s, double lambda_hat) const {
  check_state(s);
  ElementOutput out;
  evaluate(&s.u, s.alpha, &s.alpha_prev, lambda_hat, false, kEnergy, out);
  EnergyBreakdown eb;
  for (std::size_t e = 0; e < out.e_el.size(); ++e) {
    eb.elastic += out.e_el[e];
    eb.surface += out.e_surf[e];
    eb.penalty += out.e_pen[e];
  }
  eb.total = eb.elastic + eb.surface + eb.penalty;
  return eb;
}

Vector Assembler::residual_u(const SimState& s) const {
  check_state(s);
  ElementOutput out;
  evaluate(&s.u, s.alpha, nullptr, 0.0, false, kResU, out);
  Vector r = Vector::Zero(static_cast<Eigen::Index>(num_nodes()));
  for (std::size_t e = 0; e < mesh_.triangles.size(); ++e)
    for (int k = 0; k < 3; ++k) r[mesh_.triangles[e][k]] += out.res_u[e * 3 + k];
  return r;
}

Vector Assembler::residual_alpha(const SimState& s, double lambda_hat) const {
  check_state(s);
  ElementOutput out;
  evaluate(&s.u, s.alpha, &s.alpha_prev, lambda_hat, false, kResA, out);
  Vector r = Vector::Zero(static_cast<Eigen::Index>(num_nodes()));
  for (std::size_t e = 0; e < mesh_.triangles.size(); ++e)
    for (int k = 0; k < 3; ++k) r[mesh_.triangles[e][k]] += out.res_a[e * 3 + k];
  return r;
}

SparseMatrix Assembler::hessian_alpha(const SimState& s, double lambda_hat) const {
  check_state(s);
  ElementOutput out;
  evaluate(&s.u, s.alpha, &s.alpha_prev, lambda_hat, false, kHessA, out);
  SparseMatrix h = full_pattern_;
  double* val = h.valuePtr();
  std::fill(val, val + h.nonZeros(), 0.0);
  for (std::size_t i = 0; i < out.hess_a.size(); ++i) val[full_scatter_[i]] += out.hess_a[i];
  return h;
}

SparseMatrix Assembler::stiffness(const Vector& alpha, bool residual_stiffness) const {
  if (alpha.size() != static_cast<Eigen::Index>(num_nodes()))
    throw InvalidArgument("phase field does not match the mesh vertex count");
  ElementOutput out;
  evaluate(nullptr, alpha, nullptr, 0.0, residual_stiffness, kStiff, out);
  SparseMatrix k = full_pattern_;
  double* val = k.valuePtr();
  std::fill(val, val + k.nonZeros(), 0.0);
  for (std::size_t i = 0; i < out.stiff.size(); ++i) val[full_scatter_[i]] += out.stiff[i];
  return k;
}

DisplacementSystem Assembler::assemble_displacement_system(const Vector& alpha, const DirichletData& bc) const {
  if (bc.nodes.empty()) throw SolverError("displacement system is singular: no Dirichlet nodes");
  if (bc.nodes.size() != bc.values.size()) throw InvalidArgument("Dirichlet nodes and values differ in length");
  if (!std::is_sorted(bc.nodes.begin(), bc.nodes.end()) ||
      std::adjacent_find(bc.nodes.begin(), bc.nodes.end()) != bc.nodes.end())
    throw InvalidArgument("Dirichlet nodes must be sorted and unique");
  if (alpha.size() != static_cast<Eigen::Index>(num_nodes()))
    throw InvalidArgument("phase field does not match the mesh vertex count");

  const ReducedPattern& rp = reduced_pattern(bc.nodes);
  ElementOutput out;
  evaluate(nullptr, alpha, nullptr, 0.0, true, kStiff, out);

  DisplacementSystem sys;
  sys.free_nodes = rp.free_nodes;
  sys.fixed = Vector::Zero(static_cast<Eigen::Index>(num_nodes()));
  for (std::size_t k = 0; k < bc.nodes.size(); ++k) sys.fixed[bc.nodes[k]] = bc.values[k];
  sys.matrix = rp.pattern;
  double* val = sys.matrix.valuePtr();
  std::fill(val, val + sys.matrix.nonZeros(), 0.0);
  sys.rhs = Vector::Zero(static_cast<Eigen::Index>(rp.free_nodes.size()));
  for (std::size_t e = 0; e < mesh_.triangles.size(); ++e) {
    const auto& t = mesh_.triangles[e];
    for (int k = 0; k < 3; ++k) {
      const int fa = rp.free_index[t[k]];
      if (fa < 0) continue;
      for (int l = 0; l < 3; ++l) {
        const double kv = out.stiff[e * 9 + k * 3 + l];
        const int slot = rp.scatter[e * 9 + k * 3 + l];
        if (slot >= 0)
          val[slot] += kv;
        else
          sys.rhs[fa] -= kv * sys.fixed[t[l]];
      }
    }
  }
  return sys;
}

}  // namespace fraktur
