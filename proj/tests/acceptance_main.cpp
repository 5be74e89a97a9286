// Acceptance suite: every criterion prints one [PASS]/[FAIL] line and the
// binary exits nonzero if any criterion fails. Tolerances are pinned here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cloakbound/cloaking.hpp"
#include "cloakbound/composites.hpp"
#include "cloakbound/config.hpp"
#include "cloakbound/runner.hpp"

using namespace cloakbound;

namespace {

int g_total = 0;
int g_failed = 0;

void criterion(int id, const std::string& name, bool pass, const std::string& detail) {
  ++g_total;
  if (!pass) ++g_failed;
  std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Tensor2 random_hermitian(Rng& rng) {
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = rng.complex_normal();
  return (g + g.adjoint()) / 2.0;
}

Tensor2 random_hermitian_positive(Rng& rng, double floor = 0.5) {
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = 0.5 * rng.complex_normal();
  return floor * Tensor2::Identity() + g.adjoint() * g;
}

MultiplicationOperator random_coercive(const Mesh& mesh, Rng& rng) {
  MultiplicationOperator op;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    op.a.push_back(random_hermitian(rng) +
                   Complex(0.0, 1.0) * random_hermitian_positive(rng));
  return op;
}

MultiplicationOperator random_positive(const Mesh& mesh, Rng& rng) {
  MultiplicationOperator op;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    op.a.push_back(random_hermitian_positive(rng));
  return op;
}

Vec random_boundary(const Mesh& mesh, Rng& rng) {
  Vec v0(mesh.num_boundary());
  for (int b = 0; b < mesh.num_boundary(); ++b) v0[b] = rng.complex_normal();
  return v0;
}

CloakProblem standard_problem(int n, const MaterialLaw& cloak, double wm, double wp,
                              bool dispersive_obstacle = false,
                              MaterialLaw obstacle = constant_law(
                                  2.0 * Eigen::Matrix2d::Identity())) {
  Mesh mesh = build_mesh(n, n, 1.0, 1.0);
  ObstacleMask mask = mark_obstacle(mesh, {{0.25, 0.25, 0.75, 0.75}});
  PermittivityModel model =
      make_cloak_model(mesh, mask, obstacle, cloak, 1.0, dispersive_obstacle);
  return CloakProblem(std::move(mesh), std::move(mask), std::move(model), wm, wp);
}

void c1_central_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(1001);
  const Mesh mesh = build_mesh(12, 12, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const MultiplicationOperator a = random_coercive(mesh, rng);
    StiffnessSystem sys(mesh, a.a);
    const DtnOperator fem_dtn = dtn_matrix(sys);
    const DtnOperator eff_dtn = dtn_via_effective(hb, a);
    for (int pv = 0; pv < 5; ++pv) {
      const Vec v0 = random_boundary(mesh, rng);
      const Complex qa = quadratic_form(fem_dtn, v0);
      const Complex qb = quadratic_form(eff_dtn, v0);
      worst = std::max(worst, std::abs(qa - qb) / (std::abs(qa) + std::abs(qb)));
    }
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "worst rel diff " << worst << ", " << elapsed << " s";
  criterion(1, "central identity FEM-Schur vs (a* Pi v0, Pi v0), 12x12, rel 1e-9",
            worst <= 1e-9 && elapsed < 10.0, os.str());
}

void c2_hodge() {
  const Mesh mesh = build_mesh(16, 16, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  const bool dims = hb.dim_u() == 63 && hb.dim_e() == 225 && hb.dim_j() == 736 &&
                    hb.dim_u() + hb.dim_e() + hb.dim_j() == 1024;
  const double cross =
      std::max({(hb.U().transpose() * hb.E()).cwiseAbs().maxCoeff(),
                (hb.U().transpose() * hb.J()).cwiseAbs().maxCoeff(),
                (hb.E().transpose() * hb.J()).cwiseAbs().maxCoeff()});
  const Vec c = hb.constant_field(Eigen::Vector2cd(1.0, 1.0));
  const double resid = hb.space().norm(c - hb.project(HodgeSubspace::U, c));
  std::ostringstream os;
  os << "dims (" << hb.dim_u() << ", " << hb.dim_e() << ", " << hb.dim_j()
     << "), cross-Gram " << cross << ", const residual " << resid;
  criterion(2, "Hodge completeness and orthogonality on 16x16",
            dims && cross <= 1e-12 && resid <= 1e-12, os.str());
}

void c3_dual_route() {
  Rng rng(1003);
  const Mesh mesh = build_mesh(12, 12, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  double worst_route = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const MultiplicationOperator a = random_coercive(mesh, rng);
    const Mat s1 = effective_operator(hb, a);
    const Mat s2 = effective_operator_via_inverse(hb, a);
    worst_route = std::max(worst_route, (s1 - s2).norm() / (s1.norm() + s2.norm()));
  }
  const Complex cval(3.0, 0.5);
  const Mat cid_star =
      effective_operator(hb, constant_operator(mesh, cval * Tensor2::Identity()));
  const double d_const =
      (cid_star - cval * Mat::Identity(hb.dim_u(), hb.dim_u())).norm() /
      cid_star.norm();
  const MultiplicationOperator a = random_coercive(mesh, rng);
  const Mat star = effective_operator(hb, a);
  const Complex lambda(2.0, 1.0);
  const Mat sl = effective_operator(hb, a.scaled_by(lambda));
  const double d_scale = (sl - lambda * star).norm() / sl.norm();
  const Mat sa = effective_operator(hb, a.adjoint());
  const double d_adj = (sa - star.adjoint()).norm() / sa.norm();
  std::ostringstream os;
  os << "route diff " << worst_route << ", (cI)* " << d_const << ", scaling " << d_scale
     << ", adjoint " << d_adj;
  criterion(3, "dual-route effective operator, 10 random coercive fields",
            worst_route <= 1e-10 && d_const <= 1e-12 && d_scale <= 1e-12 &&
                d_adj <= 1e-12,
            os.str());
}

void c4_variational() {
  Rng rng(1004);
  const Mesh mesh = build_mesh(12, 12, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 10; ++trial) {
    const MultiplicationOperator a = random_positive(mesh, rng);
    const VariationalBounds vb = variational_bounds(hb, a);
    const WienerBounds wb = wiener_bounds(mesh, a.a);
    const Eigen::Matrix2cd ad = effective_affine(hb, a);
    worst = std::min({worst, vb.margin_lower, vb.margin_upper,
                      sandwich_margin(Mat(wb.harmonic), Mat(ad)),
                      sandwich_margin(Mat(ad), Mat(wb.arithmetic))});
  }
  std::ostringstream os;
  os << "worst eigen margin " << worst;
  criterion(4, "variational sandwiches on 10 random Hermitian-positive fields",
            worst >= -1e-10, os.str());
}

void c5_laminate() {
  const Mesh mesh = build_mesh(16, 16, 1.0, 1.0);
  const HodgeBasis hb(mesh);
  MultiplicationOperator op;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    op.a.push_back((mesh.centroid(t).x() < 0.5 ? 1.0 : 3.0) * Tensor2::Identity());
  const Eigen::Matrix2cd ad = effective_affine(hb, op);
  Eigen::Matrix2cd want;
  want << 1.5, 0.0, 0.0, 2.0;
  const double err = (ad - want).cwiseAbs().maxCoeff();
  std::ostringstream os;
  os << "a^D = [[" << ad(0, 0).real() << ", " << ad(0, 1).real() << "], ["
     << ad(1, 0).real() << ", " << ad(1, 1).real() << "]], max entry error " << err
     << " (expected diag(1.5, 2.0))";
  criterion(5, "laminate oracle a^D = diag(1.5, 2.0) to 1e-10", err <= 1e-10, os.str());
}

void c6_f_infinity_bound() {
  CloakProblem p =
      standard_problem(16, constant_law(Eigen::Matrix2d::Identity()), 0.5, 1.0);
  const Vec v0 = affine_potential(p.mesh(), Eigen::Vector2cd(1.0, 0.0));
  const double f_inf = F_infinity(p, v0);
  const double bound = F_infinity_lower_bound(0.25, 0.75, 2.0, 1.0, 1.0, 1.0);
  const Complex f_iy = evaluate_F(p, v0, Complex(0.0, 1e3));
  const double rel = std::abs(f_iy - f_inf) / std::abs(f_inf);
  std::ostringstream os;
  os << "F_inf " << f_inf << " >= " << bound << ", F(i 1e3) rel diff " << rel;
  criterion(6, "F_inf lower bound 1/7 and the high-frequency limit",
            bound == 1.0 / 7.0 ? (f_inf >= bound - 1e-10 && rel <= 1e-3)
                               : false,
            os.str());
}

void c7_herglotz() {
  const auto t0 = std::chrono::steady_clock::now();
  CloakProblem p = standard_problem(32, lorentz_law({{1.0, 2.0, 0.1}}), 0.5, 1.0);
  Rng rng(1007);
  p.build_potentials(2, rng);
  std::vector<Complex> grid;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      grid.emplace_back(0.1 * std::pow(50.0, i / 9.0), 0.1 * std::pow(50.0, j / 9.0));
  const MarginTable t = check_herglotz_structure(p, p.potentials(), grid);
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << "min margin " << t.min_margin << ", " << elapsed << " s at 32x32";
  criterion(7, "Herglotz structure Im[w F] >= -1e-10 on a 10x10 C+ grid",
            t.min_margin >= -1e-10 && elapsed < 60.0, os.str());
}

void c8_lossless_monotonicity() {
  CloakProblem p = standard_problem(16, lorentz_law({{1.0, 2.0, 0.0}}), 0.5, 1.0);
  Rng rng(1008);
  p.build_potentials(0, rng);
  const SweepResult sweep = run_sweep(p, 100);
  double max_im = 0.0;
  for (int k = 0; k < 100; ++k) max_im = std::max(max_im, std::abs(sweep.F(0, k).imag()));
  const MarginTable t = check_lossless_monotonicity(sweep, 0, p.tolerances());
  std::ostringstream os;
  os << "min pair margin " << t.min_margin << ", max |Im F| " << max_im;
  criterion(8, "lossless monotonicity on a 100-point undamped-Lorentz sweep",
            t.status == MarginTable::Status::Pass && max_im <= 1e-12, os.str());
}

void c9_drude_sharpness() {
  const SweepResult drude = drude_reference_sweep(0.5, 1.0, 100, 1.0, 0.75, 0.4);
  const MarginTable t = check_lossless_monotonicity(drude, 0, Tolerances{});
  double max_abs = 0.0;
  for (const auto& e : t.entries) max_abs = std::max(max_abs, std::abs(e.margin));
  std::ostringstream os;
  os << "max |pair margin| " << max_abs;
  criterion(9, "Drude sharpness: monotonicity bound is an equality to 1e-12",
            max_abs <= 1e-12, os.str());
}

void c10_lossy_bound() {
  CloakProblem p = standard_problem(32, lorentz_law({{1.0, 2.0, 0.1}}), 0.5, 1.0);
  Rng rng(1010);
  p.build_potentials(0, rng);
  const SweepResult sweep = run_sweep(p, 100);
  const MarginTable t = check_lossy_bound(sweep, 0, p.tolerances());

  // analytic Drude benchmark F = 1 - 2/w^2 on [1, 2]: lhs 0.75, max 2
  double max_h = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double w = 1.0 + k / 200.0;
    max_h = std::max(max_h, std::abs(w * w * (1.0 - 2.0 / (w * w))));
  }
  const double lhs = 0.25 * (4.0 - 1.0) * 1.0;
  std::ostringstream os;
  os << "sweep margin " << t.min_margin << "; benchmark lhs " << lhs << " max " << max_h;
  criterion(10, "lossy bound (1/4)(w+^2 - w-^2) F_inf <= max |w^2 F| at 32x32",
            t.status == MarginTable::Status::Pass && t.min_margin >= -1e-9 &&
                std::abs(lhs - 0.75) <= 1e-15 && std::abs(max_h - 2.0) <= 1e-12,
            os.str());
}

void c11_sumrule() {
  // affine-H Heaviside ratio
  std::vector<double> xs, ah;
  for (int k = 0; k <= 8192; ++k) {
    const double x = 0.25 + (4.0 - 0.25) * k / 8192.0;
    xs.push_back(x);
    ah.push_back(std::abs(x - 2.0));
  }
  const double delta = 0.4;
  const double ratio = heaviside_length(xs, ah, delta) / (4.0 * delta / 1.0);
  // Poisson atom
  SampledFunction atom;
  atom.eval = [](Complex z) { return 1.0 / (1.0 - z); };
  const IntegralResult mass =
      sumrule_integral(atom, 0.25, 4.0, geometric_sequence(1e-2, 0.5, 8));
  // uniform composition at H = i delta
  const Complex got = compose_uniform_value(Complex(0.0, delta), delta);
  const double comp_err = std::abs(got - Complex(0.0, M_PI / (4.0 * delta)));
  std::ostringstream os;
  os << "heaviside ratio " << ratio << ", atom mass " << mass.value
     << ", composition error " << comp_err;
  criterion(11, "sum-rule numerics: affine ratio 0.5, unit atom mass, i pi/(4D)",
            std::abs(ratio - 0.5) <= 1e-6 && std::abs(mass.value - 1.0) <= 1e-4 &&
                comp_err <= 1e-12,
            os.str());
}

void c12_dispersive_obstacle() {
  CloakProblem p = standard_problem(12, constant_law(Eigen::Matrix2d::Identity()), 0.5,
                                    1.0, /*dispersive_obstacle=*/true,
                                    lorentz_law({{3.0, 2.0, 0.0}}));
  Rng rng(1012);
  p.build_potentials(0, rng);
  const double omega0 = 0.75;
  const auto cert = approx_cloaking_certificate(p, omega0);
  const auto r = dispersive_obstacle_check(p, omega0, 40, 0, cert.eta_star);
  std::ostringstream os;
  os << "tensor margin " << r.tensor_monotonicity.min_margin << ", ordering margin "
     << r.form_ordering.min_margin;
  criterion(12, "dispersive obstacle: tensor monotonicity and F vs F_ref ordering",
            r.tensor_monotonicity.status == MarginTable::Status::Pass &&
                r.tensor_monotonicity.min_margin >= -1e-12 &&
                r.form_ordering.status == MarginTable::Status::Pass &&
                r.form_ordering.min_margin >= -1e-9,
            os.str());
}

void c13_impossibility() {
  CloakProblem p =
      standard_problem(12, constant_law(Eigen::Matrix2d::Identity()), 0.5, 1.0);
  const auto cert = impossibility_certificate(p, Eigen::Vector2cd(1.0, 0.0));

  Mesh mesh = build_mesh(12, 12, 1.0, 1.0);
  ObstacleMask mask;
  mask.member.assign(mesh.num_triangles(), 0);
  mask.volume_cloak = mesh.total_area();
  PermittivityModel vac_model =
      make_uniform_model(mesh, constant_law(Eigen::Matrix2d::Identity()));
  CloakProblem vac(std::move(mesh), std::move(mask), std::move(vac_model), 0.5, 1.0);
  const auto vac_cert = impossibility_certificate(vac, Eigen::Vector2cd(1.0, 0.0));
  const Vec v0 = affine_potential(vac.mesh(), Eigen::Vector2cd(1.0, 0.0));
  const double vac_f = std::abs(evaluate_F(vac, v0, 0.75));
  std::ostringstream os;
  os << "F_inf " << cert.f_inf << " >= " << cert.lower_bound << "; vacuum F "
     << vac_f << " with no certificate";
  criterion(13, "impossibility certificate: F_inf > 0 vs consistent vacuum",
            cert.available && cert.f_inf >= cert.lower_bound - 1e-10 &&
                cert.lower_bound > 0.0 && !vac_cert.available && vac_f <= 1e-12,
            os.str());
}

void c14_determinism() {
  const char* config_text = R"json({
    "mesh": {"nx": 8, "ny": 8},
    "obstacle": {"rects": [{"x0": 0.25, "y0": 0.25, "x1": 0.75, "y1": 0.75}]},
    "materials": {
      "obstacle": {"type": "constant", "tensor": [[2.0, 0.0], [0.0, 2.0]]},
      "cloak": {"type": "lorentz", "poles": [{"wp2": 1.0, "w0": 2.0, "gamma": 0.0}]}
    },
    "frequency": {"omega_min": 0.5, "omega_max": 1.0, "num_points": 16},
    "seed": 4242
  })json";
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "cloakbound_acceptance";
  fs::create_directories(base);
  const RunConfig cfg = parse_config(config_text);
  const RunOutcome r1 =
      run_batch(cfg, RunKind::VerifyIdentities, (base / "a").string());
  const RunOutcome r2 =
      run_batch(cfg, RunKind::VerifyIdentities, (base / "b").string());
  auto stripped = [](const std::string& path) {
    std::ifstream in(path);
    nlohmann::json j = nlohmann::json::parse(in);
    j.erase("timing");
    return j.dump();
  };
  const bool identical = stripped(r1.report_path) == stripped(r2.report_path);
  std::ostringstream os;
  os << "exit codes " << r1.exit_code << "/" << r2.exit_code << ", ledgers "
     << (identical ? "identical" : "differ");
  criterion(14, "determinism: fixed-seed verify-identities ledgers are byte-identical",
            identical && r1.exit_code == 0 && r2.exit_code == 0, os.str());
}

}  // namespace

int main() {
  c1_central_identity();
  c2_hodge();
  c3_dual_route();
  c4_variational();
  c5_laminate();
  c6_f_infinity_bound();
  c7_herglotz();
  c8_lossless_monotonicity();
  c9_drude_sharpness();
  c10_lossy_bound();
  c11_sumrule();
  c12_dispersive_obstacle();
  c13_impossibility();
  c14_determinism();

  std::printf("%d/%d criteria passed\n", g_total - g_failed, g_total);
  return g_failed == 0 ? 0 : 1;
}
