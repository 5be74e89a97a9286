#ifndef CLOAKBOUND_HODGE_HPP
#define CLOAKBOUND_HODGE_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <memory>

#include "cloakbound/fem.hpp"
#include "cloakbound/geometry.hpp"

namespace cloakbound {

/// The space of per-triangle constant vector fields with inner product
/// (u,v) = sum_T |T| u_T . conj(v_T). Fields are stored as length-2M complex
/// vectors in natural units; the basis matrices live in sqrt(|T|)-scaled
/// coordinates where the inner product is Euclidean.
struct FieldSpace {
  int num_triangles = 0;
  Eigen::VectorXd sqrt_w;  // size 2M, sqrt(|T|) repeated per component
  double total_area = 0.0;

  int dim() const { return 2 * num_triangles; }
  Vec to_scaled(const Vec& field) const { return sqrt_w.asDiagonal() * field; }
  Vec from_scaled(const Vec& scaled) const {
    return scaled.array() / sqrt_w.array().cast<Complex>();
  }
  Complex inner(const Vec& u, const Vec& v) const {
    // linear in u, antilinear in v
    return (sqrt_w.asDiagonal() * v).dot(sqrt_w.asDiagonal() * u);
  }
  double norm(const Vec& u) const { return to_scaled(u).norm(); }
};

enum class HodgeSubspace { U, E, J, Avg };

/// Exact discrete orthogonal triple decomposition U + E + J of the field
/// space: E spans gradients of interior nodal hats, U spans gradients of
/// discrete-harmonic (a = I) extensions of boundary hats, and J is the
/// orthogonal complement. Immutable after construction.
class HodgeBasis {
 public:
  explicit HodgeBasis(const Mesh& mesh);

  const Mesh& mesh() const { return *mesh_; }
  const FieldSpace& space() const { return space_; }

  // Orthonormal bases, columns in scaled coordinates. All three are real.
  const Eigen::MatrixXd& U() const { return u_; }
  const Eigen::MatrixXd& E() const { return e_; }
  const Eigen::MatrixXd& J() const { return j_; }

  int dim_u() const { return static_cast<int>(u_.cols()); }
  int dim_e() const { return static_cast<int>(e_.cols()); }
  int dim_j() const { return static_cast<int>(j_.cols()); }

  /// Lift  Pi v0 = grad of the discrete-harmonic (a = I) extension of v0,
  /// as a natural-coordinates field. Kernel contains constants.
  Vec lift(const Vec& v0) const;

  /// Scaled-coordinate lift of every boundary unit vector (2M x nb, real).
  const Eigen::MatrixXd& lift_all_scaled() const { return lift_all_; }

  /// Adjoint of the lift: boundary vector w with
  /// w . conj(v0) = (field, Pi v0) for all boundary potentials v0.
  /// Errors when the field is materially outside U (residual > 1e-10 rel).
  Vec lift_adjoint(const Vec& field) const;

  /// Orthogonal projection onto U, E, J, or the constant fields (Avg).
  Vec project(HodgeSubspace which, const Vec& field) const;

  /// Coefficients of a field against one of the orthonormal bases.
  Vec coefficients(HodgeSubspace which, const Vec& field) const;

  /// Field assembled from basis coefficients.
  Vec from_coefficients(HodgeSubspace which, const Vec& coeffs) const;

  /// Natural-coordinates field equal to the constant vector c on every triangle.
  Vec constant_field(const Eigen::Vector2cd& c) const;

  /// Area-weighted mean of a field (the Avg projection collapsed to a vector).
  Eigen::Vector2cd average(const Vec& field) const;

 private:
  const Mesh* mesh_;
  FieldSpace space_;
  Eigen::MatrixXd u_, e_, j_;
  Eigen::MatrixXd lift_all_;  // scaled lifts of boundary unit vectors

  Eigen::SparseMatrix<double> lap_ib_;
  std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> lap_lu_;

  const Eigen::MatrixXd& basis(HodgeSubspace which) const;
};

HodgeBasis build_hodge_basis(const Mesh& mesh);

}  // namespace cloakbound

#endif
