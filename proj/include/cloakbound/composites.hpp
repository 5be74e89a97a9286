#ifndef CLOAKBOUND_COMPOSITES_HPP
#define CLOAKBOUND_COMPOSITES_HPP

#include <Eigen/Dense>
#include <vector>

#include "cloakbound/hodge.hpp"
#include "cloakbound/materials.hpp"

namespace cloakbound {

/// Left multiplication by a per-triangle tensor field, acting locally on the
/// field space. Identical in natural and scaled coordinates because both
/// components of a triangle carry the same weight.
struct MultiplicationOperator {
  std::vector<Tensor2> a;

  /// Apply to columns given in scaled coordinates.
  Mat apply_scaled(const Eigen::Ref<const Mat>& cols) const;
  Mat apply_scaled_real(const Eigen::Ref<const Eigen::MatrixXd>& cols) const;

  /// Apply to one natural-coordinates field.
  Vec apply(const Vec& field) const;

  MultiplicationOperator pointwise_inverse() const;
  MultiplicationOperator adjoint() const;
  MultiplicationOperator scaled_by(Complex lambda) const;
  /// Pointwise Hermitian imaginary part of e^{i gamma} a.
  MultiplicationOperator rotated_imag_part(double gamma) const;
  bool is_hermitian(double tol = 1e-12) const;
  double max_spectral_norm() const;
};

MultiplicationOperator constant_operator(const Mesh& mesh, const Tensor2& value);

/// Blocks a_ij = Gamma_i a Gamma_j against the Hodge bases (dense).
struct ZBlocks {
  Mat a00, a01, a10, a11, a20, a21;
};
ZBlocks make_blocks(const HodgeBasis& basis, const MultiplicationOperator& a,
                    bool with_j = false);

/// Solution of the Dirichlet Z-problem at E0: coefficient vectors of
/// J0 in U, E in E, J in J with J0 + J = a (E0 + E).
struct ZProblemSolution {
  Vec j0_coeff;
  Vec e_coeff;
  Vec j_coeff;
};

ZProblemSolution solve_zproblem(const HodgeBasis& basis, const MultiplicationOperator& a,
                                const Vec& e0_field);

/// Schur complement  a* = a00 - a01 a11^{-1} a10  on U-coefficients.
Mat effective_operator(const HodgeBasis& basis, const MultiplicationOperator& a);

/// Alternative route through the inverse of the (U+E) block:
/// a* = (([a_ij]_{i,j=0,1})^{-1}_{00})^{-1}.
Mat effective_operator_via_inverse(const HodgeBasis& basis,
                                   const MultiplicationOperator& a);

/// DtN matrix whose quadratic form on any v0 equals (a* Pi v0, Pi v0).
DtnOperator dtn_via_effective(const HodgeBasis& basis, const MultiplicationOperator& a);
DtnOperator dtn_via_effective(const HodgeBasis& basis, const Mat& a_star);

/// 2x2 reduction  a^D = Gamma_avg a* Gamma_avg  on constant fields, normalized
/// so that <L(-e0.x), conj(-e0.x)> = (a^D e0, e0) * |Omega|.
Eigen::Matrix2cd effective_affine(const HodgeBasis& basis, const Mat& a_star);
Eigen::Matrix2cd effective_affine(const HodgeBasis& basis, const MultiplicationOperator& a);

/// Same object through the modified Z-problem (U^D = constants, J^D enlarged
/// by the non-constant part of U). Cross-check for effective_affine.
Eigen::Matrix2cd effective_affine_via_modified(const HodgeBasis& basis,
                                               const MultiplicationOperator& a);

/// Smallest eigenvalue of the Hermitian part of (upper - lower); the
/// semidefiniteness certificate for operator sandwiches.
double sandwich_margin(const Mat& lower, const Mat& upper);

struct VariationalBounds {
  Mat lower;  // ((a^{-1})_00)^{-1}
  Mat upper;  // a_00
  double margin_lower = 0.0;  // lambda_min(a* - lower)
  double margin_upper = 0.0;  // lambda_min(upper - a*)
};

/// Dirichlet/Thomson sandwich 0 <= ((a^{-1})_00)^{-1} <= a* <= a_00 for
/// Hermitian positive-definite fields. Rejects non-Hermitian input.
VariationalBounds variational_bounds(const HodgeBasis& basis,
                                     const MultiplicationOperator& a);

struct WienerBounds {
  Eigen::Matrix2cd harmonic;    // <a^{-1}>^{-1}
  Eigen::Matrix2cd arithmetic;  // <a>
};

/// Area-weighted harmonic and arithmetic means of a Hermitian positive field.
WienerBounds wiener_bounds(const Mesh& mesh, const std::vector<Tensor2>& field);

struct CoerciveImagBounds {
  bool applicable = false;  // pointwise Im(e^{i gamma} a) >= cI with c > 0
  double c = 0.0;
  double margin_lower = 0.0;  // lambda_min([Im(e^{ig}a)]* - cI)
  double margin_upper = 0.0;  // lambda_min(Im(e^{ig}a*) - [Im(e^{ig}a)]*)
};

/// Verifies  cI <= [Im(e^{i gamma} a)]* <= Im(e^{i gamma} a*).
CoerciveImagBounds coercive_imaginary_bound(const HodgeBasis& basis,
                                            const MultiplicationOperator& a,
                                            double gamma);

}  // namespace cloakbound

#endif
