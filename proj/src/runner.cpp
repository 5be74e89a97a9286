#include "cloakbound/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloakbound/errors.hpp"
#include "cloakbound/herglotz.hpp"

namespace cloakbound {

using nlohmann::json;

namespace {

std::vector<Complex> make_cplus_grid(const CplusGridSpec& g) {
  std::vector<Complex> grid;
  grid.reserve(static_cast<size_t>(g.n_re) * g.n_im);
  for (int i = 0; i < g.n_re; ++i) {
    const double re =
        g.n_re == 1 ? g.re_min
                    : g.re_min * std::pow(g.re_max / g.re_min, double(i) / (g.n_re - 1));
    for (int j = 0; j < g.n_im; ++j) {
      const double im =
          g.n_im == 1 ? g.im_min
                      : g.im_min * std::pow(g.im_max / g.im_min, double(j) / (g.n_im - 1));
      grid.emplace_back(re, im);
    }
  }
  return grid;
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

MultiplicationOperator random_coercive_field(const Mesh& mesh, Rng& rng) {
  MultiplicationOperator op;
  op.a.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Tensor2 x = random_hermitian(rng);
    const Tensor2 y = random_hermitian_positive(rng);
    op.a.push_back(x + Complex(0.0, 1.0) * y);
  }
  return op;
}

MultiplicationOperator random_positive_field(const Mesh& mesh, Rng& rng) {
  MultiplicationOperator op;
  op.a.reserve(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t)
    op.a.push_back(random_hermitian_positive(rng));
  return op;
}

Vec random_boundary_potential(const Mesh& mesh, Rng& rng) {
  Vec v0(mesh.num_boundary());
  for (int b = 0; b < mesh.num_boundary(); ++b) v0[b] = rng.complex_normal();
  return v0;
}

double rel_diff(Complex a, Complex b) {
  return std::abs(a - b) / (std::abs(a) + std::abs(b) + 1e-300);
}

double rel_diff_mat(const Mat& a, const Mat& b) {
  return (a - b).norm() / (a.norm() + b.norm() + 1e-300);
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep,
                     const std::vector<std::string>& names,
                     std::optional<double> omega0, std::optional<double> eta) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out.precision(17);
  out << "omega,x";
  for (const auto& n : names) out << ",re_F_" << n << ",im_F_" << n << ",H_" << n;
  const bool envelopes = sweep.lossless && omega0 && eta && !sweep.F_inf.empty();
  if (envelopes) out << ",envelope_lo,envelope_hi";
  out << "\n";
  const int npot = static_cast<int>(sweep.F.rows());
  for (size_t k = 0; k < sweep.omegas.size(); ++k) {
    const int kk = static_cast<int>(k);
    out << sweep.omegas[k] << "," << sweep.x[k];
    for (int p = 0; p < npot; ++p)
      out << "," << sweep.F(p, kk).real() << "," << sweep.F(p, kk).imag() << ","
          << sweep.H(p, kk).real();
    if (envelopes) {
      const double w = sweep.omegas[k];
      const double f_inf = sweep.F_inf[0];
      const double eg = *eta * sweep.G_vac[0];
      const double w0 = *omega0;
      const double hi = (-f_inf + eg) * (w0 * w0 - w * w) / (w * w) + eg;
      const double lo = (f_inf + eg) * (w * w - w0 * w0) / (w * w) - eg;
      // envelope_hi applies below omega0, envelope_lo above
      out << "," << lo << "," << hi;
    }
    out << "\n";
  }
}

json tolerances_json(const Tolerances& t) {
  return {{"identity_rel", t.identity_rel},
          {"eigen_margin", t.eigen_margin},
          {"bound_rel", t.bound_rel},
          {"lossless_imag", t.lossless_imag},
          {"herglotz_margin", t.herglotz_margin},
          {"derivative_premise", t.derivative_premise}};
}

CheckResult make_check(const std::string& name, bool pass, double margin,
                       const json& details = json::object()) {
  CheckResult r;
  r.name = name;
  r.status = pass ? "pass" : "fail";
  r.margin = margin;
  r.details = details;
  return r;
}

void run_hypothesis_checks(const CloakProblem& problem, const RunConfig& cfg,
                           Report& report) {
  if (cfg.wants("passivity")) {
    const double violation = check_passivity(problem.model(), make_cplus_grid(cfg.cplus));
    report.add(make_check("passivity_H1", violation >= -1e-12, violation));
  }
  if (cfg.wants("high_frequency")) {
    const auto hf = check_high_frequency_limit(problem.model(),
                                               geometric_sequence(1.0, 4.0, 8));
    report.add(make_check("high_frequency_H3", hf.pass,
                          hf.deviation.empty() ? 0.0 : -hf.deviation.back(),
                          {{"deviations", hf.deviation}}));
  }
  if (cfg.wants("coercivity")) {
    double worst = std::numeric_limits<double>::infinity();
    double worst_angle = 0.0;
    bool all_certified = true;
    for (double w :
         {problem.omega_minus(), 0.5 * (problem.omega_minus() + problem.omega_plus()),
          problem.omega_plus()}) {
      const CoercivityMargin cm = coercivity_margin(problem.model(), w);
      all_certified = all_certified && cm.certified;
      if (cm.margin < worst) {
        worst = cm.margin;
        worst_angle = cm.angle;
      }
    }
    report.add(make_check("coercivity_H6", all_certified, worst,
                          {{"angle", worst_angle}, {"c", worst}}));
  }
  if (cfg.wants("lossless")) {
    const LosslessReport lr =
        check_lossless(problem.model(), problem.omega_minus(), problem.omega_plus(), 64);
    CheckResult r;
    r.name = "lossless_H8";
    r.status = "pass";  // informational: records which regime applies
    r.margin = lr.max_imag;
    r.details = {{"lossless", lr.lossless}, {"max_imag", lr.max_imag}};
    report.add(r);
  }
}

void run_full(const CloakProblem& problem, const RunConfig& cfg, Report& report,
              int jobs, SweepResult& sweep) {
  run_hypothesis_checks(problem, cfg, report);

  sweep = run_sweep(problem, cfg.num_points, jobs, cfg.route);
  const auto& pots = problem.potentials();
  const Tolerances& tol = problem.tolerances();

  // F_inf must be nonnegative for every probing potential.
  if (sweep.f_inf_valid) {
    const double worst = *std::min_element(sweep.F_inf.begin(), sweep.F_inf.end());
    report.add(make_check("f_infinity_nonnegative", worst >= -1e-12, worst));
  }

  const bool has_obstacle = problem.mask().volume_obstacle > 0.0;
  const double eps_lb = cfg.eps_lb.value_or(cfg.eps0);
  const bool dispersive = problem.model().dispersive_obstacle;

  if (cfg.wants("impossibility") && dispersive) {
    CheckResult r;
    r.name = "impossibility_certificate";
    r.status = "skipped-premise";
    r.details = {{"reason",
                  "dispersive-obstacle regime: the certificate runs on the frozen "
                  "reference inside the dispersive_obstacle check"}};
    report.add(r);
  }
  if (cfg.wants("impossibility") && !dispersive) {
    const auto cert = impossibility_certificate(problem, Eigen::Vector2cd(1.0, 0.0));
    CheckResult r;
    r.name = "impossibility_certificate";
    r.margin = cert.f_inf - cert.lower_bound;
    r.details = {{"available", cert.available},
                 {"f_inf", cert.f_inf},
                 {"lower_bound", cert.lower_bound},
                 {"statement", cert.statement}};
    r.status = cert.available ? (cert.f_inf >= cert.lower_bound - 1e-10 ? "pass" : "fail")
                              : "skipped-premise";
    if (!has_obstacle) {
      // vacuum: F identically zero, no contradiction claimed
      r.status = std::abs(cert.f_inf) <= 1e-10 ? "pass" : "fail";
      r.details["statement"] = "F == 0 and F_inf == 0: consistent, no contradiction claimed";
    }
    report.add(r);
  }

  // High-frequency limit cross-checks: F(iy) at y = 1e3 and the extracted
  // leading coefficient of w F(w) both reproduce F_inf.
  if (cfg.wants("f_infinity_limit") && !dispersive) {
    const Vec& v0 = pots[0];
    const double f_inf = sweep.F_inf[0];
    const Complex f_iy = evaluate_F(problem, v0, Complex(0.0, 1e3));
    const double rd = std::abs(f_iy - f_inf) / (std::abs(f_inf) + 1e-12);
    report.add(make_check("f_infinity_limit", rd <= 1e-3, 1e-3 - rd,
                          {{"f_inf", f_inf}, {"F_at_i1e3", f_iy.real()}}));

    SampledFunction wf;
    wf.eval = [&problem, &v0](Complex w) { return w * evaluate_F(problem, v0, w); };
    const auto& q = cfg.quadrature;
    const LimitResult alpha = extract_alpha(
        wf, geometric_sequence(q.alpha_y0, q.alpha_ratio, q.alpha_terms));
    const double rd2 = std::abs(alpha.value - f_inf) / (std::abs(f_inf) + 1e-12);
    report.add(make_check("f_infinity_alpha_extraction", rd2 <= 1e-4, 1e-4 - rd2,
                          {{"alpha", alpha.value},
                           {"f_inf", f_inf},
                           {"extrapolation_table", alpha.table}}));
  }

  const double omega0 =
      cfg.omega0.value_or(0.5 * (problem.omega_minus() + problem.omega_plus()));

  double eta = 0.0;
  if (cfg.wants("approximate_cloaking") || cfg.wants("dispersive_obstacle")) {
    const auto cert = approx_cloaking_certificate(problem, omega0);
    eta = cfg.eta.value_or(cert.eta_star);
    CheckResult r;
    r.name = "approx_cloaking_certificate";
    r.status = "pass";
    r.margin = cert.eta_star;
    r.details = {{"eta_star", cert.eta_star},
                 {"worst_potential", cert.worst_potential},
                 {"surrogate_norm_ratio", cert.surrogate_norm_ratio},
                 {"norm_caveat", cert.norm_caveat}};
    report.add(r);
  }

  if (cfg.wants("herglotz_structure")) {
    std::vector<Vec> test_pots(pots.begin(),
                               pots.begin() + std::min<size_t>(pots.size(), 3));
    report.add(check_herglotz_structure(problem, test_pots, make_cplus_grid(cfg.cplus)));
  }

  if (!problem.model().dispersive_obstacle) {
    for (size_t p = 0; p < pots.size(); ++p) {
      if (cfg.wants("monotonicity")) {
        MarginTable t = check_lossless_monotonicity(sweep, static_cast<int>(p), tol);
        t.name += ":" + problem.potential_names()[p];
        report.add(t);
      }
    }
    if (cfg.wants("approximate_cloaking")) {
      const double el = has_obstacle
                            ? eta_limit(problem.mask().volume_obstacle,
                                        problem.mask().volume_cloak, eps_lb, cfg.eps0)
                            : 0.0;
      // widen the certified eta to the sweep grid so the premise holds at the
      // grid point nearest omega0 (unless the config pinned eta explicitly)
      double eta_used = eta;
      if (!cfg.eta) {
        int k0 = 0;
        for (size_t k = 1; k < sweep.omegas.size(); ++k)
          if (std::abs(sweep.omegas[k] - omega0) < std::abs(sweep.omegas[k0] - omega0))
            k0 = static_cast<int>(k);
        for (int p = 0; p < static_cast<int>(sweep.F.rows()); ++p)
          if (sweep.G_vac[p] > 0.0)
            eta_used = std::max(eta_used, std::abs(sweep.F(p, k0)) / sweep.G_vac[p]);
      }
      const auto ac =
          check_approximate_cloaking_bounds(sweep, 0, omega0, eta_used, el, tol);
      report.add(ac.bounds);
      report.add(ac.window_signs);
      CheckResult r;
      r.name = "eta_limit";
      r.status = "pass";
      r.margin = el;
      r.details = {{"eta_lim", el},
                   {"eta", eta_used},
                   {"lower_window_vacuous", ac.lower_window_vacuous},
                   {"upper_window_vacuous", ac.upper_window_vacuous}};
      report.add(r);
    }
    if (cfg.wants("lossy_bound")) report.add(check_lossy_bound(sweep, 0, tol));
    if (cfg.wants("derivative_bound"))
      report.add(check_derivative_bound(sweep, 0, omega0, sweep.G_vac[0], tol));
    if (cfg.wants("sumrule")) {
      double max_h = 0.0;
      for (size_t k = 0; k < sweep.omegas.size(); ++k)
        max_h = std::max(max_h, std::abs(sweep.H(0, static_cast<int>(k))));
      const double delta = cfg.delta.value_or(max_h);
      if (delta > 0.0) {
        const auto ledger = build_H_and_sumrule(sweep, 0, delta, tol);
        report.add(ledger.table);
      } else {
        CheckResult r;
        r.name = "sumrule";
        r.status = "skipped-premise";
        r.details = {{"reason", "H vanishes identically on the window"}};
        report.add(r);
      }
    }
  } else if (cfg.wants("dispersive_obstacle")) {
    const auto d =
        dispersive_obstacle_check(problem, omega0, cfg.num_points, 0, eta);
    report.add(d.tensor_monotonicity);
    report.add(d.form_ordering);
    report.add(d.reference_bounds.bounds);
    report.add(d.reference_bounds.window_signs);
  }
}

void run_verify_identities(const RunConfig& cfg, Report& report, Rng& rng) {
  const Mesh mesh = build_mesh(cfg.nx, cfg.ny, cfg.width, cfg.height);
  const HodgeBasis basis(mesh);
  const Tolerances& tol = cfg.tolerances;

  // Hodge structure: dimensions, orthogonality, constants in U.
  {
    const int expect_u = mesh.num_boundary() - 1;
    const int expect_e = mesh.num_interior();
    const int expect_j = 2 * mesh.num_triangles() - expect_u - expect_e;
    const bool dims_ok = basis.dim_u() == expect_u && basis.dim_e() == expect_e &&
                         basis.dim_j() == expect_j;
    report.add(make_check("hodge_dimensions", dims_ok, 0.0,
                          {{"dim_u", basis.dim_u()},
                           {"dim_e", basis.dim_e()},
                           {"dim_j", basis.dim_j()}}));

    const double cross = std::max(
        {(basis.U().transpose() * basis.E()).cwiseAbs().maxCoeff(),
         (basis.U().transpose() * basis.J()).cwiseAbs().maxCoeff(),
         (basis.E().transpose() * basis.J()).cwiseAbs().maxCoeff()});
    report.add(make_check("hodge_orthogonality", cross <= 1e-12, 1e-12 - cross,
                          {{"max_cross_gram", cross}}));

    const Vec c = basis.constant_field(Eigen::Vector2cd(0.7, -0.3));
    const Vec resid = c - basis.project(HodgeSubspace::U, c);
    const double r = basis.space().norm(resid);
    report.add(make_check("hodge_constants_in_U", r <= 1e-12, 1e-12 - r));
  }

  // Central identity: FEM Schur form vs (a* Pi v0, Pi v0).
  {
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const MultiplicationOperator a = random_coercive_field(mesh, rng);
      StiffnessSystem sys(mesh, a.a);
      const DtnOperator fem_dtn = dtn_matrix(sys);
      const DtnOperator eff_dtn = dtn_via_effective(basis, a);
      for (int pv = 0; pv < 5; ++pv) {
        const Vec v0 = random_boundary_potential(mesh, rng);
        worst = std::max(worst, rel_diff(quadratic_form(fem_dtn, v0),
                                         quadratic_form(eff_dtn, v0)));
      }
    }
    report.add(make_check("central_identity", worst <= tol.identity_rel,
                          tol.identity_rel - worst, {{"worst_rel_diff", worst}}));
  }

  // Dual-route effective operator and its algebraic properties.
  {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const MultiplicationOperator a = random_coercive_field(mesh, rng);
      worst = std::max(worst, rel_diff_mat(effective_operator(basis, a),
                                           effective_operator_via_inverse(basis, a)));
    }
    report.add(make_check("dual_route_effective", worst <= 1e-10, 1e-10 - worst,
                          {{"worst_rel_diff", worst}}));

    const Complex c(2.0, 0.5);
    const MultiplicationOperator cid = constant_operator(mesh, c * Tensor2::Identity());
    const Mat cid_star = effective_operator(basis, cid);
    const double d_const =
        (cid_star - c * Mat::Identity(basis.dim_u(), basis.dim_u())).norm();
    report.add(make_check("constant_effective_identity", d_const <= 1e-12 * std::abs(c),
                          1e-12 - d_const));

    const MultiplicationOperator a = random_coercive_field(mesh, rng);
    const Complex lambda(2.0, 1.0);
    const Mat a_star = effective_operator(basis, a);
    const double d_scale =
        rel_diff_mat(effective_operator(basis, a.scaled_by(lambda)), lambda * a_star);
    report.add(make_check("scaling_effective_identity", d_scale <= 1e-12,
                          1e-12 - d_scale));
    const double d_adj =
        rel_diff_mat(effective_operator(basis, a.adjoint()), a_star.adjoint());
    report.add(make_check("adjoint_effective_identity", d_adj <= 1e-12, 1e-12 - d_adj));
  }

  // Variational sandwiches and Wiener bounds on Hermitian positive fields.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 10; ++trial) {
      const MultiplicationOperator a = random_positive_field(mesh, rng);
      const VariationalBounds vb = variational_bounds(basis, a);
      worst = std::min({worst, vb.margin_lower, vb.margin_upper});

      const WienerBounds wb = wiener_bounds(mesh, a.a);
      const Eigen::Matrix2cd ad = effective_affine(basis, a);
      worst = std::min({worst, sandwich_margin(Mat(wb.harmonic), Mat(ad)),
                        sandwich_margin(Mat(ad), Mat(wb.arithmetic))});
    }
    report.add(make_check("variational_sandwiches", worst >= -tol.eigen_margin, worst));
  }

  // Affine reduction: Gamma_avg route vs modified Z-problem route.
  {
    const MultiplicationOperator a = random_coercive_field(mesh, rng);
    const Eigen::Matrix2cd d1 = effective_affine(basis, a);
    const Eigen::Matrix2cd d2 = effective_affine_via_modified(basis, a);
    const double rd = (d1 - d2).norm() / (d1.norm() + d2.norm() + 1e-300);
    report.add(make_check("affine_reduction_routes", rd <= 1e-10, 1e-10 - rd));
  }

  // Green identity on a random coercive solve.
  {
    const MultiplicationOperator a = random_coercive_field(mesh, rng);
    StiffnessSystem sys(mesh, a.a);
    const DtnOperator dtn = dtn_matrix(sys);
    const Vec v0 = random_boundary_potential(mesh, rng);
    const Vec u = sys.solve_dirichlet(v0);
    const Complex lhs = quadratic_form(dtn, v0);
    const Complex rhs = sys.energy(u);
    const double err = std::abs(lhs - rhs);
    const double budget = 1e-12 * std::abs(lhs) + 1e-14;
    report.add(make_check("green_identity", err <= budget, budget - err));
  }
}

void run_sumrule_kind(const RunConfig& cfg, Report& report, Rng& rng, int jobs) {
  const Tolerances& tol = cfg.tolerances;
  const std::vector<double> ys = geometric_sequence(
      cfg.quadrature.sumrule_y0, cfg.quadrature.sumrule_ratio,
      cfg.quadrature.sumrule_terms);
  const double quad_tol = cfg.quadrature.quad_tol;

  // Analytic benchmark 1: affine H(z) = z - x0, F_inf = 1. The set |H| <= D
  // is an interval of length 2D, half the 4D/F_inf budget.
  {
    const double x_minus = 0.25, x_plus = 4.0, x0 = 2.0, f_inf = 1.0;
    const double delta = cfg.delta.value_or((x_plus - x_minus) / 8.0);
    std::vector<double> xs, ah;
    for (int k = 0; k < 4097; ++k) {
      const double x = x_minus + (x_plus - x_minus) * k / 4096.0;
      xs.push_back(x);
      ah.push_back(std::abs(x - x0));
    }
    const double len = heaviside_length(xs, ah, delta);
    const double ratio = len / (4.0 * delta / f_inf);
    report.add(make_check("sumrule_affine_heaviside", std::abs(ratio - 0.5) <= 1e-6,
                          1e-6 - std::abs(ratio - 0.5),
                          {{"length", len}, {"ratio", ratio}}));

    SampledFunction h;
    h.eval = [x0](Complex z) { return z - x0; };
    SampledFunction hmu;
    hmu.eval = [h, delta](Complex z) { return compose_uniform(h, delta, z); };
    const IntegralResult integral = sumrule_integral(hmu, x_minus, x_plus, ys, quad_tol);
    const double margin = 1.0 / f_inf - integral.value;
    report.add(make_check("sumrule_affine_integral", margin >= -1e-6, margin,
                          {{"integral", integral.value},
                           {"budget", 1.0 / f_inf},
                           {"error_estimate", integral.error_estimate},
                           {"extrapolation_table", integral.table}}));
  }

  // Analytic benchmark 2: Poisson-kernel atom recovery.
  {
    const double xi0 = 1.0;
    SampledFunction hmu;
    hmu.eval = [xi0](Complex z) { return 1.0 / (xi0 - z); };
    const IntegralResult mass = sumrule_integral(hmu, 0.25, 4.0, ys, quad_tol);
    report.add(make_check("sumrule_poisson_atom", std::abs(mass.value - 1.0) <= 1e-4,
                          1e-4 - std::abs(mass.value - 1.0),
                          {{"mass", mass.value},
                           {"extrapolation_table", mass.table}}));
  }

  // Analytic benchmark 3: uniform composition at H = i*delta equals i*pi/(4 delta).
  {
    const double delta = cfg.delta.value_or(0.5);
    const Complex got = compose_uniform_value(Complex(0.0, delta), delta);
    const Complex want(0.0, M_PI / (4.0 * delta));
    report.add(make_check("sumrule_uniform_at_idelta", std::abs(got - want) <= 1e-12,
                          1e-12 - std::abs(got - want)));
  }

  // Analytic benchmark 4: Drude family makes the monotonicity bound an equality.
  {
    const SweepResult drude = drude_reference_sweep(0.5, 1.0, 64, 1.0, 0.75, 0.25);
    MarginTable mt = check_lossless_monotonicity(drude, 0, tol);
    double max_abs = 0.0;
    for (const auto& e : mt.entries) max_abs = std::max(max_abs, std::abs(e.margin));
    report.add(make_check("sumrule_drude_equality", max_abs <= 1e-12, 1e-12 - max_abs,
                          {{"max_abs_margin", max_abs}}));
  }

  // Analytic benchmark 5: rational Lorentz-type H obeys the sum-rule bound.
  {
    const double f_inf = 1.0, k = 0.5, xr = 9.0;
    SampledFunction hmu;
    const double delta = 1.0;
    hmu.eval = [=](Complex z) {
      const Complex h = f_inf * z + k * z / (xr - z);
      return compose_uniform_value(h, delta);
    };
    const IntegralResult integral = sumrule_integral(hmu, 0.25, 4.0, ys, quad_tol);
    const double margin = 1.0 / f_inf - integral.value;
    report.add(make_check("sumrule_lorentz_integral", margin >= -1e-6, margin,
                          {{"integral", integral.value},
                           {"extrapolation_table", integral.table}}));
  }

  // Model ledger: the swept device, when an obstacle is present.
  if (!cfg.obstacle_rects.empty()) {
    CloakProblem problem = build_problem(cfg, rng);
    const SweepResult sweep = run_sweep(problem, cfg.num_points, jobs);
    double max_h = 0.0;
    for (size_t kk = 0; kk < sweep.omegas.size(); ++kk)
      max_h = std::max(max_h, std::abs(sweep.H(0, static_cast<int>(kk))));
    const double delta = cfg.delta.value_or(max_h);
    const auto ledger = build_H_and_sumrule(sweep, 0, delta, cfg.tolerances);
    report.add(ledger.table);
  } else {
    CheckResult r;
    r.name = "sumrule_model_ledger";
    r.status = "skipped-premise";
    r.details = {{"reason", "vacuum model: H vanishes identically"}};
    report.add(r);
  }
}

}  // namespace

RunOutcome run_batch(const RunConfig& cfg_in, RunKind kind, const std::string& out_dir,
                     int jobs_override, std::int64_t seed_override) {
  RunOutcome outcome;
  RunConfig cfg = cfg_in;
  if (jobs_override > 0) cfg.jobs = jobs_override;
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);

  namespace fs = std::filesystem;
  fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  outcome.report_path = (dir / cfg.report_path).string();
  outcome.sweep_path = (dir / cfg.sweep_path).string();

  Report report;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Rng rng(cfg.seed);
    json prov = {{"mesh", {{"nx", cfg.nx}, {"ny", cfg.ny}}},
                 {"seed", cfg.seed},
                 {"jobs", cfg.jobs},
                 {"route", cfg.route == Route::Fem ? "fem" : "effective"},
                 {"tolerances", tolerances_json(cfg.tolerances)},
                 {"kind", kind == RunKind::Run              ? "run"
                          : kind == RunKind::VerifyIdentities ? "verify-identities"
                          : kind == RunKind::Sumrule          ? "sumrule"
                                                              : "sweep"}};
    report.set_provenance(prov);

    if (kind == RunKind::VerifyIdentities) {
      run_verify_identities(cfg, report, rng);
    } else if (kind == RunKind::Sumrule) {
      run_sumrule_kind(cfg, report, rng, cfg.jobs);
    } else {
      CloakProblem problem = build_problem(cfg, rng);
      SweepResult sweep;
      if (kind == RunKind::Run) {
        run_full(problem, cfg, report, cfg.jobs, sweep);
      } else {
        sweep = run_sweep(problem, cfg.num_points, cfg.jobs, cfg.route);
      }
      if (!sweep.omegas.empty()) {
        const double omega0 =
            cfg.omega0.value_or(0.5 * (cfg.omega_minus + cfg.omega_plus));
        write_sweep_csv(outcome.sweep_path, sweep, problem.potential_names(),
                        omega0, cfg.eta.value_or(0.0));
        if (cfg.dump_matrices) {
          std::ofstream eps(dir / "dtn_eps.mtx"), vac(dir / "dtn_vac.mtx");
          write_matrix_market(eps, problem.dtn_at(omega0).matrix);
          write_matrix_market(vac, problem.dtn_vacuum().matrix);
        }
      }
    }
  } catch (const ConfigError& e) {
    outcome.exit_code = 2;
    outcome.message = e.what();
    return outcome;
  } catch (const Error& e) {
    outcome.exit_code = 1;
    outcome.message = e.what();
    return outcome;
  }

  const auto t1 = std::chrono::steady_clock::now();
  report.set_timing_seconds(std::chrono::duration<double>(t1 - t0).count());

  std::ofstream out(outcome.report_path);
  if (!out) {
    outcome.exit_code = 2;
    outcome.message = "cannot write " + outcome.report_path;
    return outcome;
  }
  out << report.to_json().dump(2) << "\n";

  outcome.checks_run = report.num_checks();
  outcome.checks_failed = report.num_failed();
  outcome.exit_code = report.any_failed() ? 1 : 0;
  std::ostringstream os;
  os << outcome.checks_run << " checks, " << outcome.checks_failed << " failed";
  outcome.message = os.str();
  return outcome;
}

}  // namespace cloakbound
