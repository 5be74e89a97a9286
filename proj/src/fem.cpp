#include "cloakbound/fem.hpp"

#include <sstream>

#include "cloakbound/errors.hpp"

namespace cloakbound {

namespace {

// Constant gradients of the three nodal hats on a triangle: columns of a
// real 2x3 matrix.
Eigen::Matrix<double, 2, 3> hat_gradients(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangles[t];
  const Eigen::Vector2d p0 = mesh.nodes[tri[0]];
  const Eigen::Vector2d p1 = mesh.nodes[tri[1]];
  const Eigen::Vector2d p2 = mesh.nodes[tri[2]];
  const double twoA = 2.0 * mesh.triangle_area[t];
  Eigen::Matrix<double, 2, 3> g;
  // grad(phi_i) = perp(p_{i+2} - p_{i+1}) / (2A) with CCW orientation
  g.col(0) = Eigen::Vector2d(p1.y() - p2.y(), p2.x() - p1.x()) / twoA;
  g.col(1) = Eigen::Vector2d(p2.y() - p0.y(), p0.x() - p2.x()) / twoA;
  g.col(2) = Eigen::Vector2d(p0.y() - p1.y(), p1.x() - p0.x()) / twoA;
  return g;
}

}  // namespace

StiffnessSystem::StiffnessSystem(const Mesh& mesh, const std::vector<Tensor2>& field)
    : mesh_(&mesh), field_(field) {
  if (static_cast<int>(field.size()) != mesh.num_triangles())
    throw ConfigError("assemble: tensor field size does not match triangle count");

  const int n = mesh.num_nodes();
  std::vector<int> local(n, -1), kind(n, 0);  // kind: 0 interior, 1 boundary
  for (size_t k = 0; k < mesh.interior_nodes.size(); ++k)
    local[mesh.interior_nodes[k]] = static_cast<int>(k);
  for (size_t k = 0; k < mesh.boundary_nodes.size(); ++k) {
    local[mesh.boundary_nodes[k]] = static_cast<int>(k);
    kind[mesh.boundary_nodes[k]] = 1;
  }

  using Trip = Eigen::Triplet<Complex>;
  std::vector<Trip> t_ii, t_ib, t_bi, t_bb;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto g = hat_gradients(mesh, t);
    const double area = mesh.triangle_area[t];
    // K_ij = |T| grad(phi_i) . a grad(phi_j); exact for P1 and constant a.
    Eigen::Matrix3cd k_local =
        area * (g.transpose().cast<Complex>() * field_[t] * g.cast<Complex>());
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int gi = tri[i], gj = tri[j];
        const Trip trip(local[gi], local[gj], k_local(i, j));
        if (kind[gi] == 0 && kind[gj] == 0)
          t_ii.push_back(trip);
        else if (kind[gi] == 0)
          t_ib.push_back(trip);
        else if (kind[gj] == 0)
          t_bi.push_back(trip);
        else
          t_bb.push_back(trip);
      }
    }
  }

  const int ni = mesh.num_interior(), nb = mesh.num_boundary();
  a_ii_.resize(ni, ni);
  a_ib_.resize(ni, nb);
  a_bi_.resize(nb, ni);
  a_bb_.resize(nb, nb);
  a_ii_.setFromTriplets(t_ii.begin(), t_ii.end());
  a_ib_.setFromTriplets(t_ib.begin(), t_ib.end());
  a_bi_.setFromTriplets(t_bi.begin(), t_bi.end());
  a_bb_.setFromTriplets(t_bb.begin(), t_bb.end());
}

void StiffnessSystem::factorize() const {
  if (lu_) return;
  lu_ = std::make_unique<Eigen::SparseLU<SparseC, Eigen::COLAMDOrdering<int>>>();
  lu_->compute(a_ii_);
  if (lu_->info() != Eigen::Success) {
    lu_.reset();
    throw NumericalError("solve_dirichlet: interior stiffness block is singular");
  }
}

Vec StiffnessSystem::solve_dirichlet(const Vec& v0) const {
  if (v0.size() != mesh_->num_boundary())
    throw ConfigError("solve_dirichlet: boundary potential has wrong size");
  factorize();
  const Vec rhs = -(a_ib_ * v0);
  const Vec ui = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success)
    throw NumericalError("solve_dirichlet: back substitution failed");

  Vec u = Vec::Zero(mesh_->num_nodes());
  for (size_t k = 0; k < mesh_->interior_nodes.size(); ++k)
    u[mesh_->interior_nodes[k]] = ui[static_cast<Eigen::Index>(k)];
  for (size_t k = 0; k < mesh_->boundary_nodes.size(); ++k)
    u[mesh_->boundary_nodes[k]] = v0[static_cast<Eigen::Index>(k)];
  return u;
}

Mat StiffnessSystem::solve_dirichlet_many(const Mat& v0_cols) const {
  factorize();
  const Mat rhs = -(a_ib_ * v0_cols);
  const Mat ui = lu_->solve(rhs);
  Mat u = Mat::Zero(mesh_->num_nodes(), v0_cols.cols());
  for (size_t k = 0; k < mesh_->interior_nodes.size(); ++k)
    u.row(mesh_->interior_nodes[k]) = ui.row(static_cast<Eigen::Index>(k));
  for (size_t k = 0; k < mesh_->boundary_nodes.size(); ++k)
    u.row(mesh_->boundary_nodes[k]) = v0_cols.row(static_cast<Eigen::Index>(k));
  return u;
}

Eigen::Matrix2Xcd StiffnessSystem::gradient(const Vec& nodal) const {
  Eigen::Matrix2Xcd g(2, mesh_->num_triangles());
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const auto hg = hat_gradients(*mesh_, t);
    const auto& tri = mesh_->triangles[t];
    g.col(t) = hg.cast<Complex>() *
               Eigen::Vector3cd(nodal[tri[0]], nodal[tri[1]], nodal[tri[2]]);
  }
  return g;
}

Complex StiffnessSystem::energy(const Vec& nodal_u) const {
  const Eigen::Matrix2Xcd g = gradient(nodal_u);
  Complex acc = 0.0;
  for (int t = 0; t < mesh_->num_triangles(); ++t) {
    const Eigen::Vector2cd gu = g.col(t);
    // (a grad u) . conj(grad u); Eigen's dot conjugates its left operand
    acc += mesh_->triangle_area[t] * gu.dot(field_[t] * gu);
  }
  return acc;
}

Mat StiffnessSystem::solve_interior(const Mat& rhs) const {
  factorize();
  const Mat x = lu_->solve(rhs);
  if (lu_->info() != Eigen::Success)
    throw NumericalError("solve_interior: back substitution failed");
  return x;
}

DtnOperator dtn_matrix(const StiffnessSystem& sys) {
  const Mat x = sys.solve_interior(Mat(sys.a_ib()));
  DtnOperator dtn;
  dtn.matrix = Mat(sys.a_bb()) - Mat(sys.a_bi()) * x;
  dtn.provenance = DtnOperator::Provenance::FemSchur;
  return dtn;
}

Complex quadratic_form(const DtnOperator& dtn, const Vec& v0) {
  if (v0.size() != dtn.matrix.rows())
    throw ConfigError("quadratic_form: boundary dimension mismatch");
  return v0.dot(dtn.matrix * v0);
}

Complex polarization_reconstruct(const DtnOperator& dtn, const Vec& u, const Vec& v) {
  const Complex i_unit(0.0, 1.0);
  Complex acc = 0.0;
  Complex ik = 1.0;
  for (int k = 0; k < 4; ++k) {
    const Vec w = u + ik * v;
    acc += ik * quadratic_form(dtn, w);
    ik *= i_unit;
  }
  return acc / 4.0;
}

Vec affine_potential(const Mesh& mesh, const Eigen::Vector2cd& e0) {
  Vec v0(mesh.num_boundary());
  for (size_t k = 0; k < mesh.boundary_nodes.size(); ++k) {
    const Eigen::Vector2d p = mesh.nodes[mesh.boundary_nodes[k]];
    v0[static_cast<Eigen::Index>(k)] = -(e0.x() * p.x() + e0.y() * p.y());
  }
  return v0;
}

Vec constant_potential(const Mesh& mesh, Complex value) {
  return Vec::Constant(mesh.num_boundary(), value);
}

void write_matrix_market(std::ostream& os, const Mat& m) {
  os << "%%MatrixMarket matrix array complex general\n";
  os << m.rows() << " " << m.cols() << "\n";
  os.precision(17);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      os << m(i, j).real() << " " << m(i, j).imag() << "\n";
}

}  // namespace cloakbound
