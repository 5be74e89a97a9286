#include "cloakbound/composites.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "cloakbound/errors.hpp"

namespace cloakbound {

Mat MultiplicationOperator::apply_scaled(const Eigen::Ref<const Mat>& cols) const {
  Mat out(cols.rows(), cols.cols());
  const int m = static_cast<int>(a.size());
  for (int t = 0; t < m; ++t)
    out.middleRows(2 * t, 2) = a[t] * cols.middleRows(2 * t, 2);
  return out;
}

Mat MultiplicationOperator::apply_scaled_real(
    const Eigen::Ref<const Eigen::MatrixXd>& cols) const {
  Mat out(cols.rows(), cols.cols());
  const int m = static_cast<int>(a.size());
  for (int t = 0; t < m; ++t)
    out.middleRows(2 * t, 2) = a[t] * cols.middleRows(2 * t, 2).cast<Complex>();
  return out;
}

Vec MultiplicationOperator::apply(const Vec& field) const {
  Vec out(field.size());
  const int m = static_cast<int>(a.size());
  for (int t = 0; t < m; ++t) out.segment<2>(2 * t) = a[t] * field.segment<2>(2 * t);
  return out;
}

MultiplicationOperator MultiplicationOperator::pointwise_inverse() const {
  MultiplicationOperator inv;
  inv.a.reserve(a.size());
  for (const auto& t : a) inv.a.push_back(t.inverse());
  return inv;
}

MultiplicationOperator MultiplicationOperator::adjoint() const {
  MultiplicationOperator adj;
  adj.a.reserve(a.size());
  for (const auto& t : a) adj.a.push_back(t.adjoint());
  return adj;
}

MultiplicationOperator MultiplicationOperator::scaled_by(Complex lambda) const {
  MultiplicationOperator s;
  s.a.reserve(a.size());
  for (const auto& t : a) s.a.push_back(lambda * t);
  return s;
}

MultiplicationOperator MultiplicationOperator::rotated_imag_part(double gamma) const {
  const Complex rot = std::polar(1.0, gamma);
  MultiplicationOperator s;
  s.a.reserve(a.size());
  for (const auto& t : a) s.a.push_back(imag_part(rot * t));
  return s;
}

bool MultiplicationOperator::is_hermitian(double tol) const {
  for (const auto& t : a)
    if ((t - t.adjoint()).norm() > tol * std::max(1.0, t.norm())) return false;
  return true;
}

double MultiplicationOperator::max_spectral_norm() const {
  double m = 0.0;
  for (const auto& t : a) m = std::max(m, t.operatorNorm());
  return m;
}

MultiplicationOperator constant_operator(const Mesh& mesh, const Tensor2& value) {
  MultiplicationOperator op;
  op.a.assign(mesh.num_triangles(), value);
  return op;
}

ZBlocks make_blocks(const HodgeBasis& basis, const MultiplicationOperator& a,
                    bool with_j) {
  ZBlocks b;
  const Mat au = a.apply_scaled_real(basis.U());
  const Mat ae = a.apply_scaled_real(basis.E());
  b.a00 = basis.U().transpose() * au;
  b.a10 = basis.E().transpose() * au;
  b.a01 = basis.U().transpose() * ae;
  b.a11 = basis.E().transpose() * ae;
  if (with_j) {
    b.a20 = basis.J().transpose() * au;
    b.a21 = basis.J().transpose() * ae;
  }
  return b;
}

ZProblemSolution solve_zproblem(const HodgeBasis& basis, const MultiplicationOperator& a,
                                const Vec& e0_field) {
  const Vec e0c = basis.coefficients(HodgeSubspace::U, e0_field);
  const ZBlocks b = make_blocks(basis, a, /*with_j=*/true);
  Eigen::PartialPivLU<Mat> lu(b.a11);
  const Vec ec = -lu.solve(b.a10 * e0c);
  ZProblemSolution sol;
  sol.e_coeff = ec;
  sol.j0_coeff = b.a00 * e0c + b.a01 * ec;
  sol.j_coeff = b.a20 * e0c + b.a21 * ec;
  // constitutive residual J0 + J = a(E0 + E) is a test-side invariant
  return sol;
}

Mat effective_operator(const HodgeBasis& basis, const MultiplicationOperator& a) {
  const ZBlocks b = make_blocks(basis, a);
  Eigen::PartialPivLU<Mat> lu(b.a11);
  const Mat x = lu.solve(b.a10);
  if ((b.a11 * x - b.a10).norm() > 1e-6 * std::max(1.0, b.a10.norm()))
    throw NumericalError("effective_operator: a_11 block is numerically singular");
  return b.a00 - b.a01 * x;
}

Mat effective_operator_via_inverse(const HodgeBasis& basis,
                                   const MultiplicationOperator& a) {
  const ZBlocks b = make_blocks(basis, a);
  const int nu = basis.dim_u(), ne = basis.dim_e();
  Mat k(nu + ne, nu + ne);
  k.topLeftCorner(nu, nu) = b.a00;
  k.topRightCorner(nu, ne) = b.a01;
  k.bottomLeftCorner(ne, nu) = b.a10;
  k.bottomRightCorner(ne, ne) = b.a11;
  Eigen::PartialPivLU<Mat> lu(k);
  const Mat kinv = lu.inverse();
  if (!kinv.allFinite())
    throw NumericalError("effective_operator_via_inverse: (U+E) block is singular");
  Eigen::PartialPivLU<Mat> lu00(kinv.topLeftCorner(nu, nu));
  return lu00.inverse();
}

DtnOperator dtn_via_effective(const HodgeBasis& basis, const Mat& a_star) {
  // U-coefficients of the lift of each boundary unit vector.
  const Eigen::MatrixXd p = basis.U().transpose() * basis.lift_all_scaled();
  DtnOperator dtn;
  dtn.matrix = p.transpose().cast<Complex>() * a_star * p.cast<Complex>();
  dtn.provenance = DtnOperator::Provenance::EffectiveLift;
  return dtn;
}

DtnOperator dtn_via_effective(const HodgeBasis& basis, const MultiplicationOperator& a) {
  return dtn_via_effective(basis, effective_operator(basis, a));
}

Eigen::Matrix2cd effective_affine(const HodgeBasis& basis, const Mat& a_star) {
  // U-coefficients of the two unit constant fields.
  Mat c(basis.dim_u(), 2);
  c.col(0) = basis.coefficients(HodgeSubspace::U,
                                basis.constant_field(Eigen::Vector2cd(1.0, 0.0)));
  c.col(1) = basis.coefficients(HodgeSubspace::U,
                                basis.constant_field(Eigen::Vector2cd(0.0, 1.0)));
  Eigen::Matrix2cd ad;
  const Mat ac = a_star * c;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) ad(k, l) = c.col(k).dot(ac.col(l));
  return ad / basis.space().total_area;
}

Eigen::Matrix2cd effective_affine(const HodgeBasis& basis,
                                  const MultiplicationOperator& a) {
  return effective_affine(basis, effective_operator(basis, a));
}

Eigen::Matrix2cd effective_affine_via_modified(const HodgeBasis& basis,
                                               const MultiplicationOperator& a) {
  // Modified Z-problem: U^D = constants, E^D = E, J^D absorbs the rest of U.
  const double root_area = std::sqrt(basis.space().total_area);
  Eigen::MatrixXd ud(basis.space().dim(), 2);
  ud.col(0) = basis.space()
                  .to_scaled(basis.constant_field(Eigen::Vector2cd(1.0, 0.0)))
                  .real() /
              root_area;
  ud.col(1) = basis.space()
                  .to_scaled(basis.constant_field(Eigen::Vector2cd(0.0, 1.0)))
                  .real() /
              root_area;
  const Mat aud = a.apply_scaled_real(ud);
  const Mat ae = a.apply_scaled_real(basis.E());
  const Mat a00 = ud.transpose() * aud;
  const Mat a01 = ud.transpose() * ae;
  const Mat a10 = basis.E().transpose() * aud;
  const Mat a11 = basis.E().transpose() * ae;
  Eigen::PartialPivLU<Mat> lu(a11);
  const Mat star = a00 - a01 * lu.solve(a10);
  return Eigen::Matrix2cd(star);
}

double sandwich_margin(const Mat& lower, const Mat& upper) {
  const Mat diff = upper - lower;
  const Mat herm = (diff + diff.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

VariationalBounds variational_bounds(const HodgeBasis& basis,
                                     const MultiplicationOperator& a) {
  if (!a.is_hermitian())
    throw ConfigError("variational_bounds: field must be Hermitian positive-definite");
  const Mat a_star = effective_operator(basis, a);
  const ZBlocks b = make_blocks(basis, a);
  const MultiplicationOperator ainv = a.pointwise_inverse();
  const Mat ainv00 =
      basis.U().transpose() * ainv.apply_scaled_real(basis.U());
  Eigen::PartialPivLU<Mat> lu(ainv00);
  VariationalBounds out;
  out.lower = lu.inverse();
  out.upper = b.a00;
  out.margin_lower = sandwich_margin(out.lower, a_star);
  out.margin_upper = sandwich_margin(a_star, out.upper);
  return out;
}

WienerBounds wiener_bounds(const Mesh& mesh, const std::vector<Tensor2>& field) {
  if (static_cast<int>(field.size()) != mesh.num_triangles())
    throw ConfigError("wiener_bounds: field size mismatch");
  Eigen::Matrix2cd arith = Eigen::Matrix2cd::Zero();
  Eigen::Matrix2cd harm = Eigen::Matrix2cd::Zero();
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if ((field[t] - field[t].adjoint()).norm() > 1e-12 * std::max(1.0, field[t].norm()))
      throw ConfigError("wiener_bounds: field must be Hermitian");
    const double w = mesh.triangle_area[t];
    arith += w * field[t];
    harm += w * field[t].inverse();
    total += w;
  }
  WienerBounds out;
  out.arithmetic = arith / total;
  out.harmonic = (harm / total).inverse();
  return out;
}

CoerciveImagBounds coercive_imaginary_bound(const HodgeBasis& basis,
                                            const MultiplicationOperator& a,
                                            double gamma) {
  CoerciveImagBounds out;
  const MultiplicationOperator im_a = a.rotated_imag_part(gamma);
  double c = std::numeric_limits<double>::infinity();
  for (const auto& t : im_a.a) c = std::min(c, min_eigenvalue(t));
  if (!(c > 0.0)) {
    out.applicable = false;
    return out;
  }
  out.applicable = true;
  out.c = c;
  const Mat im_a_star = effective_operator(basis, im_a);
  const Complex rot = std::polar(1.0, gamma);
  const Mat a_star_rot = rot * effective_operator(basis, a);
  const Mat imag_of_star = (a_star_rot - a_star_rot.adjoint()) / Complex(0.0, 2.0);
  const Mat c_id = c * Mat::Identity(basis.dim_u(), basis.dim_u());
  out.margin_lower = sandwich_margin(c_id, im_a_star);
  out.margin_upper = sandwich_margin(im_a_star, imag_of_star);
  return out;
}

}  // namespace cloakbound
