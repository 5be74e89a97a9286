#include <doctest.h>

#include "cloakbound/composites.hpp"
#include "cloakbound/errors.hpp"
#include "cloakbound/hodge.hpp"
#include "cloakbound/rng.hpp"

using namespace cloakbound;

namespace {

Vec random_field(const FieldSpace& space, Rng& rng) {
  Vec f(space.dim());
  for (int k = 0; k < space.dim(); ++k) f[k] = rng.complex_normal();
  return f;
}

Vec random_boundary(const Mesh& mesh, Rng& rng) {
  Vec v0(mesh.num_boundary());
  for (int b = 0; b < mesh.num_boundary(); ++b) v0[b] = rng.complex_normal();
  return v0;
}

}  // namespace

TEST_CASE("triple decomposition dimensions: 16x16 and 2x2") {
  const Mesh big = build_mesh(16, 16, 1.0, 1.0);
  const HodgeBasis hb(big);
  CHECK(hb.dim_u() == 63);
  CHECK(hb.dim_e() == 225);
  CHECK(hb.dim_j() == 736);
  CHECK(hb.dim_u() + hb.dim_e() + hb.dim_j() == 2 * big.num_triangles());

  const Mesh small = build_mesh(2, 2, 1.0, 1.0);
  const HodgeBasis hs(small);
  CHECK(hs.dim_u() == 7);
  CHECK(hs.dim_e() == 1);
  CHECK(hs.dim_j() == 8);
}

TEST_CASE("bases are orthonormal with tiny cross-Gram blocks") {
  for (int n : {2, 16}) {
    const Mesh mesh = build_mesh(n, n, 1.0, 1.0);
    const HodgeBasis hb(mesh);
    const auto gram_err = [](const Eigen::MatrixXd& b) {
      return (b.transpose() * b -
              Eigen::MatrixXd::Identity(b.cols(), b.cols()))
          .cwiseAbs()
          .maxCoeff();
    };
    CHECK(gram_err(hb.U()) <= 1e-13);
    CHECK(gram_err(hb.E()) <= 1e-13);
    CHECK(gram_err(hb.J()) <= 1e-13);
    CHECK((hb.U().transpose() * hb.E()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((hb.U().transpose() * hb.J()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((hb.E().transpose() * hb.J()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("constant fields lie in U") {
  const Mesh mesh = build_mesh(8, 8, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  const Vec c = hb.constant_field(Eigen::Vector2cd(1.0, -0.5));
  const Vec resid = c - hb.project(HodgeSubspace::U, c);
  CHECK(hb.space().norm(resid) <= 1e-12);
}

TEST_CASE("lift: kernel, affine action, orthogonality to E and J") {
  const Mesh mesh = build_mesh(8, 8, 1.0, 1.0);
  const HodgeBasis hb(mesh);

  // constants lift to zero
  const Vec zero_lift = hb.lift(constant_potential(mesh, Complex(3.0, -1.0)));
  CHECK(hb.space().norm(zero_lift) <= 1e-12);

  // affine potentials lift to the constant field -e0
  const Eigen::Vector2cd e0(1.0, 0.0);
  const Vec lifted = hb.lift(affine_potential(mesh, e0));
  const Vec want = hb.constant_field(-e0);
  CHECK(hb.space().norm(lifted - want) <= 1e-12);

  // any lift is orthogonal to E and J
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec v0 = random_boundary(mesh, rng);
    const Vec f = hb.lift(v0);
    CHECK(hb.space().norm(hb.project(HodgeSubspace::E, f)) <=
          1e-12 * hb.space().norm(f));
    CHECK(hb.space().norm(hb.project(HodgeSubspace::J, f)) <=
          1e-12 * hb.space().norm(f));
  }
}

TEST_CASE("lift adjoint satisfies the duality identity") {
  const Mesh mesh = build_mesh(8, 8, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const Vec v0 = random_boundary(mesh, rng);
    const Vec field = hb.lift(random_boundary(mesh, rng));
    const Vec w = hb.lift_adjoint(field);
    const Complex lhs = v0.dot(w);                      // w . conj(v0)
    const Complex rhs = hb.space().inner(field, hb.lift(v0));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(rhs) + 1.0));
  }

  // Gram positivity and zero input
  const Vec v0 = random_boundary(mesh, rng);
  const Vec pv = hb.lift(v0);
  const Complex norm2 = v0.dot(hb.lift_adjoint(pv));
  CHECK(norm2.real() >= 0.0);
  CHECK(std::abs(norm2.imag()) <= 1e-12 * norm2.real());
  CHECK(hb.lift_adjoint(Vec(Vec::Zero(hb.space().dim()))).norm() <= 1e-14);

  // fields materially outside U are rejected
  const Vec j_field = hb.from_coefficients(
      HodgeSubspace::J, Vec(Vec::Ones(hb.dim_j())));
  CHECK_THROWS_AS(hb.lift_adjoint(j_field), NumericalError);
}

TEST_CASE("projections are idempotent, complete, and the average is a projection") {
  const Mesh mesh = build_mesh(8, 8, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  Rng rng(6);
  const Vec f = random_field(hb.space(), rng);
  const double scale = hb.space().norm(f);

  Vec sum = Vec::Zero(hb.space().dim());
  for (auto which : {HodgeSubspace::U, HodgeSubspace::E, HodgeSubspace::J}) {
    const Vec once = hb.project(which, f);
    const Vec twice = hb.project(which, once);
    CHECK(hb.space().norm(twice - once) <= 1e-12 * scale);
    sum += once;
  }
  CHECK(hb.space().norm(sum - f) <= 1e-12 * scale);

  const Vec avg_once = hb.project(HodgeSubspace::Avg, f);
  const Vec avg_twice = hb.project(HodgeSubspace::Avg, avg_once);
  CHECK(hb.space().norm(avg_twice - avg_once) <= 1e-12 * scale);
}

TEST_CASE("average of the layered-profile gradient is the mean slope") {
  const Mesh mesh = build_mesh(8, 8, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  // gradient field with slopes -1.5 / -0.5 split at x = 1/2, equal areas
  Vec f(hb.space().dim());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double slope = mesh.centroid(t).x() < 0.5 ? -1.5 : -0.5;
    f[2 * t] = slope;
    f[2 * t + 1] = 0.0;
  }
  const Eigen::Vector2cd avg = hb.average(f);
  CHECK(std::abs(avg.x() - Complex(-1.0)) <= 1e-14);
  CHECK(std::abs(avg.y()) <= 1e-14);
}

TEST_CASE("FEM solutions decompose as the theory prescribes") {
  // grad u = Pi v0 + E with E in E-space; a grad u = J0 + J with J0 in U, J in J.
  const Mesh mesh = build_mesh(8, 8, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  Rng rng(8);
  std::vector<Tensor2> field(mesh.num_triangles());
  for (auto& t : field) {
    Eigen::Matrix2cd g;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = 0.4 * rng.complex_normal();
    t = (g + g.adjoint()) / 2.0 +
        Complex(0.0, 1.0) * (Tensor2::Identity() + g.adjoint() * g);
  }
  StiffnessSystem sys(mesh, field);
  const Vec v0 = random_boundary(mesh, rng);
  const Vec u = sys.solve_dirichlet(v0);

  Vec grad_u(hb.space().dim());
  const Eigen::Matrix2Xcd g = sys.gradient(u);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    grad_u[2 * t] = g(0, t);
    grad_u[2 * t + 1] = g(1, t);
  }
  const double scale = hb.space().norm(grad_u);

  // grad u - Pi v0 lies in E
  const Vec e_part = grad_u - hb.lift(v0);
  CHECK(hb.space().norm(e_part - hb.project(HodgeSubspace::E, e_part)) <= 1e-10 * scale);

  // a grad u has no E component
  MultiplicationOperator op{field};
  const Vec flux = op.apply(grad_u);
  CHECK(hb.space().norm(hb.project(HodgeSubspace::E, flux)) <=
        1e-10 * hb.space().norm(flux));
}

TEST_CASE("gradients with a fixed trace are exactly the lifted coset") {
  // two-sided inclusion of {grad v : v in P1, v|bnd = v0} and Pi v0 + E
  const Mesh mesh = build_mesh(6, 6, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  StiffnessSystem laplace(
      mesh, std::vector<Tensor2>(mesh.num_triangles(), Tensor2::Identity()));
  Rng rng(9);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec v0 = random_boundary(mesh, rng);

    // forward: grad of any extension of v0 lands in Pi v0 + E
    Vec nodal = Vec::Zero(mesh.num_nodes());
    for (size_t k = 0; k < mesh.boundary_nodes.size(); ++k)
      nodal[mesh.boundary_nodes[k]] = v0[static_cast<Eigen::Index>(k)];
    for (int i : mesh.interior_nodes) nodal[i] = rng.complex_normal();
    const Eigen::Matrix2Xcd g = laplace.gradient(nodal);
    Vec grad(hb.space().dim());
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      grad[2 * t] = g(0, t);
      grad[2 * t + 1] = g(1, t);
    }
    const Vec resid = grad - hb.lift(v0);
    CHECK(hb.space().norm(resid - hb.project(HodgeSubspace::E, resid)) <=
          1e-11 * std::max(1.0, hb.space().norm(grad)));

    // reverse: Pi v0 + e is the gradient of an admissible P1 function
    Vec ec(hb.dim_e());
    for (int k = 0; k < hb.dim_e(); ++k) ec[k] = rng.complex_normal();
    const Vec member = hb.lift(v0) + hb.from_coefficients(HodgeSubspace::E, ec);
    // split off the J and U components: a genuine gradient has none beyond them
    const Vec back = hb.project(HodgeSubspace::U, member) +
                     hb.project(HodgeSubspace::E, member);
    CHECK(hb.space().norm(member - back) <= 1e-11 * hb.space().norm(member));
  }
}

TEST_CASE("rank detection rejects nothing on healthy meshes") {
  for (int n : {2, 4, 12}) {
    CHECK_NOTHROW(HodgeBasis(build_mesh(n, n, 1.0, 1.0)));
  }
}
