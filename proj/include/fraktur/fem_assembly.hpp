#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fraktur/material_models.hpp"
#include "fraktur/mesh.hpp"
#include "fraktur/simd/kernels.hpp"

namespace fraktur {

using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

struct SimState {
  Vector u;
  Vector alpha;
  Vector alpha_prev;
  int step = 0;

  /// Zero displacement and phase field for a mesh with n nodes.
  static SimState zeros(std::size_t n);
};

struct EnergyBreakdown {
  double elastic = 0.0;
  double surface = 0.0;
  double penalty = 0.0;
  double total = 0.0;  ///< elastic + surface + penalty, summed in that order
};

/// Barycentric quadrature on the reference triangle; weights sum to 1.
struct QuadratureRule {
  int degree = 1;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

/// Smallest tabulated rule exact for polynomials of the given degree (1..5).
QuadratureRule quadrature_rule(int degree);

struct DirichletData {
  std::vector<int> nodes;      ///< sorted, unique
  std::vector<double> values;  ///< same length as nodes
};

/// Reduced SPD system over the free displacement dofs.
struct DisplacementSystem {
  SparseMatrix matrix;
  Vector rhs;
  std::vector<int> free_nodes;  ///< reduced index -> node
  Vector fixed;                 ///< full-length vector carrying the Dirichlet values, zero elsewhere

  /// Full nodal vector from a reduced solution.
  Vector expand(const Vector& reduced) const;
};

/// Lower bound used for g in the displacement matrix.
inline constexpr double kResidualStiffness = 1e-8;

/// P1 evaluation of the regularized energy and its derivatives in anti-plane
/// shear (Psi = mu |grad u|^2 / 2). Each element carries one of the supplied
/// material models. Element work is batched through the SIMD kernel table and
/// may run on several threads; all sums are reduced serially in element order.
class Assembler {
 public:
  Assembler(const TriMesh& mesh, const ModelSpec& model, double mu, int quad_degree = 1);
  Assembler(const TriMesh& mesh, std::vector<ModelSpec> materials, std::vector<int> element_material, double mu,
            int quad_degree = 1);

  /// Use a specific kernel table instead of the runtime-selected one.
  void set_kernels(const simd::KernelTable& table) { kernels_ = &table; }
  const simd::KernelTable& kernels() const { return *kernels_; }

  const TriMesh& mesh() const { return mesh_; }
  std::size_t num_nodes() const { return mesh_.vertices.size(); }
  double mu() const { return mu_; }
  const std::vector<ModelSpec>& materials() const { return materials_; }
  const std::vector<int>& element_material() const { return element_material_; }
  const ModelSpec& primary_model() const { return materials_.front(); }

  double element_area(std::size_t e) const { return area_[e]; }
  /// Lumped mass: sum over adjacent elements of area/3.
  const Vector& nodal_weights() const { return nodal_weight_; }

  EnergyBreakdown energy(const SimState& s, double lambda_hat) const;
  /// dF/du_i for every node (Dirichlet rows included).
  Vector residual_u(const SimState& s) const;
  /// dF/dalpha_i.
  Vector residual_alpha(const SimState& s, double lambda_hat) const;
  /// d2F/dalpha_i dalpha_j on the full node pattern.
  SparseMatrix hessian_alpha(const SimState& s, double lambda_hat) const;

  /// Full-node displacement matrix with g replaced by max(g, kResidualStiffness) if requested.
  SparseMatrix stiffness(const Vector& alpha, bool residual_stiffness = true) const;

  /// Symmetric elimination of the Dirichlet nodes. Throws SolverError for an
  /// empty Dirichlet set (the matrix would be singular).
  DisplacementSystem assemble_displacement_system(const Vector& alpha, const DirichletData& bc) const;

 private:
  enum Want : unsigned {
    kEnergy = 1u,
    kResU = 2u,
    kResA = 4u,
    kHessA = 8u,
    kStiff = 16u,
  };

  struct ElementOutput {
    std::vector<double> e_el, e_surf, e_pen;
    std::vector<double> res_u, res_a;  // 3 per element
    std::vector<double> hess_a, stiff; // 9 per element
  };

  void evaluate(const Vector* u, const Vector& alpha, const Vector* alpha_prev, double lambda_hat,
                bool residual_stiffness, unsigned want, ElementOutput& out) const;
  void check_state(const SimState& s) const;
  void build_patterns();

  struct ReducedPattern {
    std::vector<int> dirichlet_nodes;
    std::vector<int> free_index;  // node -> reduced index or -1
    std::vector<int> free_nodes;
    SparseMatrix pattern;
    std::vector<int> scatter;     // 9 per element, value index or -1
  };
  const ReducedPattern& reduced_pattern(const std::vector<int>& dirichlet_nodes) const;

  TriMesh mesh_;
  std::vector<ModelSpec> materials_;
  std::vector<int> element_material_;
  std::vector<std::vector<int>> groups_;
  double mu_;
  QuadratureRule rule_;
  const simd::KernelTable* kernels_;

  std::vector<double> area_;
  std::array<std::vector<double>, 3> bx_, by_;
  Vector nodal_weight_;

  SparseMatrix full_pattern_;
  std::vector<int> full_scatter_;  // 9 per element

  mutable std::mutex reduced_mutex_;
  mutable std::vector<std::unique_ptr<ReducedPattern>> reduced_cache_;
};

}  // namespace fraktur
