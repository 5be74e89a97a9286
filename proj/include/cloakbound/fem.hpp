#ifndef CLOAKBOUND_FEM_HPP
#define CLOAKBOUND_FEM_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <memory>
#include <ostream>
#include <vector>

#include "cloakbound/geometry.hpp"
#include "cloakbound/materials.hpp"

namespace cloakbound {

using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using SparseC = Eigen::SparseMatrix<Complex>;

/// P1 stiffness matrix of div(a grad u) = 0 with piecewise constant tensors,
/// partitioned into interior/boundary blocks. Element integrals are exact for
/// this discretization, so the discrete operator identities hold to roundoff.
/// The interior factorization is computed once and reused across potentials.
class StiffnessSystem {
 public:
  StiffnessSystem(const Mesh& mesh, const std::vector<Tensor2>& field);

  const Mesh& mesh() const { return *mesh_; }
  const SparseC& a_ii() const { return a_ii_; }
  const SparseC& a_ib() const { return a_ib_; }
  const SparseC& a_bi() const { return a_bi_; }
  const SparseC& a_bb() const { return a_bb_; }
  const std::vector<Tensor2>& field() const { return field_; }

  /// Full nodal potential: interior = -A_ii^{-1} A_ib v0, boundary = v0.
  /// v0 is indexed like mesh.boundary_nodes.
  Vec solve_dirichlet(const Vec& v0) const;

  /// Solution for several boundary potentials at once (columns).
  Mat solve_dirichlet_many(const Mat& v0_cols) const;

  /// A_ii^{-1} rhs using the cached factorization.
  Mat solve_interior(const Mat& rhs) const;

  /// Per-triangle constant gradient of a nodal function.
  Eigen::Matrix2Xcd gradient(const Vec& nodal) const;

  /// Discrete energy  sum_T |T| a_T grad(u) . conj(grad(u)).
  Complex energy(const Vec& nodal_u) const;

 private:
  const Mesh* mesh_;
  std::vector<Tensor2> field_;
  SparseC a_ii_, a_ib_, a_bi_, a_bb_;
  mutable std::unique_ptr<Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>> lu_;
  void factorize() const;
};

/// Boundary-node matrix realizing v0 -> a grad(u) . n in the discrete pairing
/// <L v0, conj(v0)> = v0^dagger L v0.
struct DtnOperator {
  enum class Provenance { FemSchur, EffectiveLift };
  Mat matrix;
  Provenance provenance = Provenance::FemSchur;
};

/// Boundary Schur complement  A_bb - A_bi A_ii^{-1} A_ib. Satisfies the
/// discrete Green identity <L v0, conj v0> = sum_T |T| a grad(u).conj(grad u)
/// exactly for the Dirichlet solution u.
DtnOperator dtn_matrix(const StiffnessSystem& sys);

/// <L v0, conj(v0)> = v0^dagger M v0.
Complex quadratic_form(const DtnOperator& dtn, const Vec& v0);

/// Polarization identity: reconstructs <L u, conj(v)> from the four quadratic
/// forms at u + i^k v, k = 0..3.
Complex polarization_reconstruct(const DtnOperator& dtn, const Vec& u, const Vec& v);

/// Values of -e0.x at the boundary nodes.
Vec affine_potential(const Mesh& mesh, const Eigen::Vector2cd& e0);

/// Constant boundary potential.
Vec constant_potential(const Mesh& mesh, Complex value);

/// Plain-text matrix-market-style dump for debugging.
void write_matrix_market(std::ostream& os, const Mat& m);

}  // namespace cloakbound

#endif
