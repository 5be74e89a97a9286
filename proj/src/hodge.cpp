#include "cloakbound/hodge.hpp"

#include <Eigen/QR>

#include "cloakbound/errors.hpp"

namespace cloakbound {

namespace {

Eigen::Matrix<double, 2, 3> hat_gradients(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d p0 = mesh.nodes[tri[0]];
  const Eigen::Vector2d p1 = mesh.nodes[tri[1]];
  const Eigen::Vector2d p2 = mesh.nodes[tri[2]];
  const double twoA = 2.0 * mesh.triangle_area[t];
  Eigen::Matrix<double, 2, 3> g;
  g.col(0) = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / twoA;
  g.col(1) = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / twoA;
  g.col(2) = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / twoA;
  return g;
}

// Scaled-coordinate gradient field of a real nodal function.
Eigen::VectorXd scaled_gradient(const Mesh& mesh, const Eigen::VectorXd& sqrt_w,
                                const Eigen::VectorXd& nodal) {
  Eigen::VectorXd out(2 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = hat_gradients(mesh, t);
    const auto& tri = mesh.triangles[t];
    const Eigen::Vector2d v =
        g * Eigen::Vector3d(nodal[tri[0]], nodal[tri[1]], nodal[tri[2]]);
    out[2 * t] = sqrt_w[2 * t] * v.x();
    out[2 * t + 1] = sqrt_w[2 * t + 1] * v.y();
  }
  return out;
}

Eigen::MatrixXd thin_q(const Eigen::HouseholderQR<Eigen::MatrixXd>& qr, int rows,
                       int cols) {
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

}  // namespace

HodgeBasis::HodgeBasis(const Mesh& mesh) : mesh_(&mesh) {
  const int m = mesh.num_triangles();
  space_.num_triangles = m;
  space_.total_area = 0.0;
  space_.sqrt_w.resize(2 * m);
  for (int t = 0; t < m; ++t) {
    const double s = std::sqrt(mesh.triangle_area[t]);
    space_.sqrt_w[2 * t] = s;
    space_.sqrt_w[2 * t + 1] = s;
    space_.total_area += mesh.triangle_area[t];
  }

  const int dim = 2 * m;
  const int ni = mesh.num_interior();
  const int nb = mesh.num_boundary();

  // Laplace (a = I) stiffness blocks for harmonic extensions.
  std::vector<int> local(mesh.num_nodes(), -1), kind(mesh.num_nodes(), 0);
  for (size_t k = 0; k < mesh.interior_nodes.size(); ++k)
    local[mesh.interior_nodes[k]] = static_cast<int>(k);
  for (size_t k = 0; k < mesh.boundary_nodes.size(); ++k) {
    local[mesh.boundary_nodes[k]] = static_cast<int>(k);
    kind[mesh.boundary_nodes[k]] = 1;
  }
  using Trip = Eigen::Triplet<double>;
  std::vector<Trip> t_ii, t_ib;
  for (int t = 0; t < m; ++t) {
    const auto g = hat_gradients(mesh, t);
    const Eigen::Matrix3d k_local =
        mesh.triangle_area[t] * (g.transpose() * g);
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      if (kind[tri[i]] != 0) continue;
      for (int j = 0; j < 3; ++j) {
        if (kind[tri[j]] == 0)
          t_ii.emplace_back(local[tri[i]], local[tri[j]], k_local(i, j));
        else
          t_ib.emplace_back(local[tri[i]], local[tri[j]], k_local(i, j));
      }
    }
  }
  Eigen::SparseMatrix<double> lap_ii(ni, ni);
  lap_ib_.resize(ni, nb);
  lap_ii.setFromTriplets(t_ii.begin(), t_ii.end());
  lap_ib_.setFromTriplets(t_ib.begin(), t_ib.end());
  lap_lu_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
  lap_lu_->compute(lap_ii);
  if (lap_lu_->info() != Eigen::Success)
    throw NumericalError("hodge: Laplace interior block factorization failed");

  // E: gradients of interior nodal hats, orthonormalized.
  Eigen::MatrixXd e_cand(dim, ni);
  for (int k = 0; k < ni; ++k) {
    Eigen::VectorXd nodal = Eigen::VectorXd::Zero(mesh.num_nodes());
    nodal[mesh.interior_nodes[k]] = 1.0;
    e_cand.col(k) = scaled_gradient(mesh, space_.sqrt_w, nodal);
  }
  {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(e_cand);
    e_ = thin_q(qr, dim, ni);
  }

  // U candidates: gradients of discrete-harmonic extensions of boundary hats.
  // These are also the lifts of the boundary unit vectors.
  const Eigen::MatrixXd interior_ext = lap_lu_->solve(-Eigen::MatrixXd(lap_ib_));
  lift_all_.resize(dim, nb);
  for (int b = 0; b < nb; ++b) {
    Eigen::VectorXd nodal = Eigen::VectorXd::Zero(mesh.num_nodes());
    nodal[mesh.boundary_nodes[b]] = 1.0;
    for (int k = 0; k < ni; ++k) nodal[mesh.interior_nodes[k]] = interior_ext(k, b);
    lift_all_.col(b) = scaled_gradient(mesh, space_.sqrt_w, nodal);
  }

  // One re-orthogonalization sweep against E keeps the cross-Gram at roundoff.
  Eigen::MatrixXd u_cand = lift_all_ - e_ * (e_.transpose() * lift_all_);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_u(u_cand);
  qr_u.setThreshold(1e-10);
  const int rank_u = static_cast<int>(qr_u.rank());
  if (rank_u != nb - 1)
    throw NumericalError("hodge: U basis rank defect (expected boundary count - 1)");
  u_ = (qr_u.householderQ() * Eigen::MatrixXd::Identity(dim, rank_u));

  // J: orthogonal complement of span(U, E) by full-rank completion.
  Eigen::MatrixXd ue(dim, rank_u + ni);
  ue.leftCols(rank_u) = u_;
  ue.rightCols(ni) = e_;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_full(ue);
  const Eigen::MatrixXd q_full =
      qr_full.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  j_ = q_full.rightCols(dim - rank_u - ni);
}

const Eigen::MatrixXd& HodgeBasis::basis(HodgeSubspace which) const {
  switch (which) {
    case HodgeSubspace::U: return u_;
    case HodgeSubspace::E: return e_;
    case HodgeSubspace::J: return j_;
    default: throw Error("hodge: Avg has no stored basis");
  }
}

Vec HodgeBasis::lift(const Vec& v0) const {
  if (v0.size() != mesh_->num_boundary())
    throw ConfigError("lift: boundary potential has wrong size");
  return space_.from_scaled(lift_all_ * v0);
}

Vec HodgeBasis::lift_adjoint(const Vec& field) const {
  const Vec s = space_.to_scaled(field);
  const Vec coeff = u_.transpose() * s;
  const double resid = (s - u_ * coeff).norm();
  if (resid > 1e-10 * std::max(1.0, s.norm()))
    throw NumericalError("lift_adjoint: field is materially outside U");
  return lift_all_.transpose() * s;
}

Vec HodgeBasis::project(HodgeSubspace which, const Vec& field) const {
  if (which == HodgeSubspace::Avg) {
    return constant_field(average(field));
  }
  const auto& b = basis(which);
  const Vec s = space_.to_scaled(field);
  return space_.from_scaled(b * (b.transpose() * s));
}

Vec HodgeBasis::coefficients(HodgeSubspace which, const Vec& field) const {
  return basis(which).transpose() * space_.to_scaled(field);
}

Vec HodgeBasis::from_coefficients(HodgeSubspace which, const Vec& coeffs) const {
  return space_.from_scaled(basis(which) * coeffs);
}

Vec HodgeBasis::constant_field(const Eigen::Vector2cd& c) const {
  Vec f(space_.dim());
  for (int t = 0; t < space_.num_triangles; ++t) {
    f[2 * t] = c.x();
    f[2 * t + 1] = c.y();
  }
  return f;
}

Eigen::Vector2cd HodgeBasis::average(const Vec& field) const {
  Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
  for (int t = 0; t < space_.num_triangles; ++t) {
    const double a = mesh_->triangle_area[t];
    acc.x() += a * field[2 * t];
    acc.y() += a * field[2 * t + 1];
  }
  return acc / space_.total_area;
}

HodgeBasis build_hodge_basis(const Mesh& mesh) { return HodgeBasis(mesh); }

}  // namespace cloakbound
