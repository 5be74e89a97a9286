#include "cloakbound/cloaking.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "cloakbound/errors.hpp"

namespace cloakbound {

const char* kNormCaveat =
    "operator-norm figures use the Euclidean boundary-node surrogate norm, not the "
    "H^{1/2}/H^{-1/2} duality norm";

namespace {

std::string omega_string(Complex w) {
  std::ostringstream os;
  os << w.real();
  if (w.imag() != 0.0) os << (w.imag() > 0 ? "+" : "") << w.imag() << "i";
  return os.str();
}

void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (int k = 0; k < n; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) body(k);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

CloakProblem::CloakProblem(Mesh mesh, ObstacleMask mask, PermittivityModel model,
                           double omega_minus, double omega_plus)
    : mesh_(std::make_shared<const Mesh>(std::move(mesh))),
      mask_(std::move(mask)),
      model_(std::move(model)),
      omega_minus_(omega_minus),
      omega_plus_(omega_plus) {
  if (!(0.0 < omega_minus_ && omega_minus_ < omega_plus_))
    throw ConfigError("CloakProblem: need 0 < omega- < omega+");
  validate_for_interval(model_, omega_minus_, omega_plus_);
}

void CloakProblem::add_potential(const Vec& v0, const std::string& name) {
  if (v0.size() != mesh_->num_boundary())
    throw ConfigError("add_potential: wrong boundary dimension");
  potentials_.push_back(v0);
  potential_names_.push_back(name);
}

void CloakProblem::build_potentials(int num_random, Rng& rng) {
  potentials_.clear();
  potential_names_.clear();
  add_potential(affine_potential(*mesh_, Eigen::Vector2cd(1.0, 0.0)), "affine_e1");
  add_potential(affine_potential(*mesh_, Eigen::Vector2cd(0.0, 1.0)), "affine_e2");

  // Smooth traces from a few boundary Fourier modes. Non-reciprocal models
  // only admit real-valued potentials.
  const std::vector<int> cycle = mesh_->boundary_cycle();
  const int nb = static_cast<int>(cycle.size());
  std::vector<int> position(mesh_->num_boundary(), 0);
  for (int p = 0; p < nb; ++p) {
    const int node = cycle[p];
    const auto it = std::lower_bound(mesh_->boundary_nodes.begin(),
                                     mesh_->boundary_nodes.end(), node);
    position[static_cast<int>(it - mesh_->boundary_nodes.begin())] = p;
  }
  for (int r = 0; r < num_random; ++r) {
    Vec v0(mesh_->num_boundary());
    const bool complex_trace = reciprocity_ && (r % 2 == 1);
    std::vector<Complex> coef_cos(3), coef_sin(3);
    for (int k = 0; k < 3; ++k) {
      coef_cos[k] = complex_trace ? Complex(rng.normal(), rng.normal())
                                  : Complex(rng.normal(), 0.0);
      coef_sin[k] = complex_trace ? Complex(rng.normal(), rng.normal())
                                  : Complex(rng.normal(), 0.0);
    }
    for (int b = 0; b < mesh_->num_boundary(); ++b) {
      const double t = 2.0 * M_PI * position[b] / nb;
      Complex val = 0.0;
      for (int k = 0; k < 3; ++k)
        val += coef_cos[k] * std::cos((k + 1) * t) + coef_sin[k] * std::sin((k + 1) * t);
      v0[b] = val;
    }
    potentials_.push_back(v0);
    potential_names_.push_back("random_" + std::to_string(r));
  }
}

std::vector<Tensor2> CloakProblem::field_at(Complex omega) const {
  std::vector<Tensor2> field(mesh_->num_triangles());
  // one evaluation per region, broadcast to triangles
  std::vector<Tensor2> by_region(model_.num_regions());
  for (int r = 0; r < model_.num_regions(); ++r)
    by_region[r] = eval_law(model_.region_laws[r], model_.eps0, omega);
  for (int t = 0; t < mesh_->num_triangles(); ++t)
    field[t] = by_region[model_.assignment[t]];
  return field;
}

const DtnOperator& CloakProblem::dtn_vacuum() const {
  std::call_once(caches_->dtn_vac_once, [this] {
    const std::vector<Tensor2> vac(mesh_->num_triangles(),
                                   model_.eps0 * Tensor2::Identity());
    StiffnessSystem sys(*mesh_, vac);
    caches_->dtn_vac = std::make_unique<DtnOperator>(dtn_matrix(sys));
  });
  return *caches_->dtn_vac;
}

DtnOperator CloakProblem::dtn_at(Complex omega, Route route) const {
  try {
    const std::vector<Tensor2> field = field_at(omega);
    if (route == Route::Fem) {
      StiffnessSystem sys(*mesh_, field);
      return dtn_matrix(sys);
    }
    MultiplicationOperator op{field};
    return dtn_via_effective(hodge(), op);
  } catch (const Error& e) {
    throw NumericalError(std::string(e.what()) + " at omega = " + omega_string(omega));
  }
}

const HodgeBasis& CloakProblem::hodge() const {
  std::call_once(caches_->hodge_once,
                 [this] { caches_->hodge = std::make_unique<HodgeBasis>(*mesh_); });
  return *caches_->hodge;
}

Complex CloakProblem::g_vac(const Vec& v0) const {
  return quadratic_form(dtn_vacuum(), v0);
}

Complex evaluate_F(const CloakProblem& problem, const Vec& v0, Complex omega,
                   Route route) {
  const DtnOperator dtn = problem.dtn_at(omega, route);
  return quadratic_form(dtn, v0) - quadratic_form(problem.dtn_vacuum(), v0);
}

double F_infinity(const CloakProblem& problem, const Vec& v0) {
  const std::vector<Tensor2> field = epsilon_infinity(problem.model());
  StiffnessSystem sys(problem.mesh(), field);
  const DtnOperator dtn = dtn_matrix(sys);
  const Complex f =
      quadratic_form(dtn, v0) - quadratic_form(problem.dtn_vacuum(), v0);
  return f.real();
}

double F_infinity_lower_bound(double vol_obstacle, double vol_cloak, double eps_lb,
                              double eps0, double vol_total, double e0_norm_sq) {
  if (!(eps_lb > eps0) || !(eps0 > 0.0)) return 0.0;
  if (!(vol_obstacle > 0.0) || !(vol_cloak > 0.0))
    throw ConfigError("F_infinity_lower_bound: volumes must be positive");
  const double ratio = eps0 / eps_lb;
  return vol_obstacle * (1.0 - ratio) * eps0 * vol_total * e0_norm_sq /
         (vol_obstacle * ratio + vol_cloak);
}

SweepResult run_sweep(const CloakProblem& problem, int num_points, int jobs,
                      Route route) {
  if (num_points < 2) throw ConfigError("run_sweep: need at least 2 points");
  SweepResult sweep;
  sweep.omegas.resize(num_points);
  const double wm = problem.omega_minus(), wp = problem.omega_plus();
  for (int k = 0; k < num_points; ++k)
    sweep.omegas[k] = wm + (wp - wm) * k / (num_points - 1);

  const int npot = static_cast<int>(problem.potentials().size());
  sweep.F.resize(npot, num_points);
  sweep.H.resize(npot, num_points);
  sweep.x.resize(num_points);

  std::vector<Complex> q_vac(npot);
  for (int p = 0; p < npot; ++p)
    q_vac[p] = quadratic_form(problem.dtn_vacuum(), problem.potentials()[p]);

  parallel_for(num_points, jobs, [&](int k) {
    const double w = sweep.omegas[k];
    const DtnOperator dtn = problem.dtn_at(w, route);
    for (int p = 0; p < npot; ++p) {
      const Complex f = quadratic_form(dtn, problem.potentials()[p]) - q_vac[p];
      sweep.F(p, k) = f;
      sweep.H(p, k) = w * w * f;
    }
  });
  for (int k = 0; k < num_points; ++k) sweep.x[k] = sweep.omegas[k] * sweep.omegas[k];

  sweep.F_inf.assign(npot, 0.0);
  sweep.G_vac.resize(npot);
  for (int p = 0; p < npot; ++p) sweep.G_vac[p] = q_vac[p].real();
  if (!problem.model().dispersive_obstacle) {
    const std::vector<Tensor2> field = epsilon_infinity(problem.model());
    StiffnessSystem sys(problem.mesh(), field);
    const DtnOperator dtn_inf = dtn_matrix(sys);
    for (int p = 0; p < npot; ++p)
      sweep.F_inf[p] =
          (quadratic_form(dtn_inf, problem.potentials()[p]) - q_vac[p]).real();
    sweep.f_inf_valid = true;
  }
  sweep.lossless = check_lossless(problem.model(), wm, wp, 64).lossless;
  return sweep;
}

SweepResult drude_reference_sweep(double omega_minus, double omega_plus, int num_points,
                                  double f_inf, double omega0, double f0) {
  SweepResult sweep;
  sweep.omegas.resize(num_points);
  sweep.F.resize(1, num_points);
  sweep.H.resize(1, num_points);
  sweep.x.resize(num_points);
  for (int k = 0; k < num_points; ++k) {
    const double w =
        omega_minus + (omega_plus - omega_minus) * k / (num_points - 1);
    sweep.omegas[k] = w;
    const double f = f_inf - omega0 * omega0 * (f_inf - f0) / (w * w);
    sweep.F(0, k) = f;
    sweep.x[k] = w * w;
    sweep.H(0, k) = w * w * f;
  }
  sweep.F_inf = {f_inf};
  sweep.G_vac = {1.0};
  sweep.lossless = true;
  sweep.f_inf_valid = true;
  return sweep;
}

MarginTable check_herglotz_structure(const CloakProblem& problem,
                                     const std::vector<Vec>& potentials,
                                     const std::vector<Complex>& cplus_grid) {
  MarginTable table;
  table.name = "herglotz_structure";
  double min_margin = std::numeric_limits<double>::infinity();
  std::vector<Complex> q_vac(potentials.size());
  for (size_t p = 0; p < potentials.size(); ++p)
    q_vac[p] = quadratic_form(problem.dtn_vacuum(), potentials[p]);
  for (const Complex w : cplus_grid) {
    if (!(w.imag() > 0.0))
      throw ConfigError("check_herglotz_structure: grid point not in C+");
    const DtnOperator dtn = problem.dtn_at(w);
    for (size_t p = 0; p < potentials.size(); ++p) {
      const Complex q = quadratic_form(dtn, potentials[p]);
      // <L_{w eps} v0, conj v0> = w q and w F both must have Im >= 0
      const double m = std::min((w * q).imag(), (w * (q - q_vac[p])).imag());
      table.entries.push_back({std::abs(w), m});
      if (m < min_margin) {
        min_margin = m;
        table.at = std::abs(w);
        table.potential = static_cast<int>(p);
      }
    }
  }
  table.min_margin = min_margin;
  table.status = min_margin >= -problem.tolerances().herglotz_margin
                     ? MarginTable::Status::Pass
                     : MarginTable::Status::Fail;
  return table;
}

MarginTable check_herglotz_structure(const CloakProblem& problem, const Vec& v0,
                                     const std::vector<Complex>& cplus_grid) {
  return check_herglotz_structure(problem, std::vector<Vec>{v0}, cplus_grid);
}

MarginTable check_lossless_monotonicity(const SweepResult& sweep, int potential,
                                        const Tolerances& tol) {
  MarginTable table;
  table.name = "lossless_monotonicity";
  table.potential = potential;
  if (!sweep.lossless) {
    table.status = MarginTable::Status::SkippedPremise;
    table.detail = "cloak is not lossless on the interval";
    return table;
  }
  const int n = static_cast<int>(sweep.omegas.size());
  const double f_inf = sweep.F_inf[potential];
  double max_abs_f = 0.0, max_im = 0.0;
  for (int k = 0; k < n; ++k) {
    max_abs_f = std::max(max_abs_f, std::abs(sweep.F(potential, k)));
    max_im = std::max(max_im, std::abs(sweep.F(potential, k).imag()));
  }
  if (max_im > tol.lossless_imag * std::max(1.0, max_abs_f)) {
    table.status = MarginTable::Status::Fail;
    table.detail = "Im F does not vanish on the transparency window";
    table.min_margin = -max_im;
    return table;
  }
  const double scale = std::abs(f_inf) + max_abs_f;
  double min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k + 1 < n; ++k) {
    const double g0 =
        sweep.x[k] * (sweep.F(potential, k).real() - f_inf);
    const double g1 =
        sweep.x[k + 1] * (sweep.F(potential, k + 1).real() - f_inf);
    const double margin = g1 - g0;
    table.entries.push_back({sweep.omegas[k], margin});
    if (margin < min_margin) {
      min_margin = margin;
      table.at = sweep.omegas[k];
    }
  }
  table.min_margin = min_margin;
  table.status = min_margin >= -tol.bound_rel * std::max(1.0, scale)
                     ? MarginTable::Status::Pass
                     : MarginTable::Status::Fail;
  return table;
}

double eta_limit(double vol_obstacle, double vol_cloak, double eps_lb, double eps0) {
  if (!(eps_lb > eps0)) return 0.0;
  const double ratio = eps0 / eps_lb;
  return (1.0 - ratio) * vol_obstacle / (vol_obstacle * ratio + vol_cloak);
}

ApproxCloakingResult check_approximate_cloaking_bounds(const SweepResult& sweep,
                                                       int potential, double omega0,
                                                       double eta, double eta_lim,
                                                       const Tolerances& tol) {
  ApproxCloakingResult out;
  out.eta = eta;
  out.eta_lim = eta_lim;
  out.bounds.name = "approximate_cloaking_bounds";
  out.bounds.potential = potential;
  out.window_signs.name = "exclusion_window_signs";
  out.window_signs.potential = potential;

  if (!sweep.lossless) {
    out.bounds.status = MarginTable::Status::SkippedPremise;
    out.bounds.detail = "cloak is not lossless on the interval";
    out.window_signs.status = MarginTable::Status::SkippedPremise;
    return out;
  }

  const int n = static_cast<int>(sweep.omegas.size());

  // approximate-cloaking premise at omega0 over the whole potential test set,
  // with slack for the distance between omega0 and the nearest grid point
  {
    int k0 = 0;
    for (int k = 1; k < n; ++k)
      if (std::abs(sweep.omegas[k] - omega0) < std::abs(sweep.omegas[k0] - omega0))
        k0 = k;
    for (int p = 0; p < static_cast<int>(sweep.F.rows()); ++p) {
      const double f0 = std::abs(sweep.F(p, k0));
      double grid_slack = 0.0;
      if (k0 > 0)
        grid_slack = std::abs(sweep.F(p, k0) - sweep.F(p, k0 - 1));
      if (k0 + 1 < n)
        grid_slack = std::max(grid_slack, std::abs(sweep.F(p, k0 + 1) - sweep.F(p, k0)));
      const double budget =
          eta * sweep.G_vac[p] + grid_slack + tol.bound_rel * (1.0 + f0);
      if (f0 > budget) {
        out.bounds.status = MarginTable::Status::SkippedPremise;
        std::ostringstream os;
        os << "premise |F(omega0)| <= eta G_vac fails for potential " << p << ": "
           << f0 << " > " << eta * sweep.G_vac[p];
        out.bounds.detail = os.str();
        out.window_signs.status = MarginTable::Status::SkippedPremise;
        out.window_signs.detail = out.bounds.detail;
        return out;
      }
    }
  }
  const double f_inf = sweep.F_inf[potential];
  const double g_vac = sweep.G_vac[potential];
  const double eg = eta * g_vac;
  double max_abs_f = 0.0;
  for (int k = 0; k < n; ++k)
    max_abs_f = std::max(max_abs_f, std::abs(sweep.F(potential, k)));
  const double tol_abs = tol.bound_rel * std::max(1.0, std::abs(f_inf) + max_abs_f);

  double min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double w = sweep.omegas[k];
    const double f = sweep.F(potential, k).real();
    double margin;
    if (w <= omega0) {
      const double envelope =
          (-f_inf + eg) * (omega0 * omega0 - w * w) / (w * w) + eg;
      margin = envelope - f;
    } else {
      const double envelope =
          (f_inf + eg) * (w * w - omega0 * omega0) / (w * w) - eg;
      margin = f - envelope;
    }
    out.bounds.entries.push_back({w, margin});
    if (margin < min_margin) {
      min_margin = margin;
      out.bounds.at = w;
    }
  }
  out.bounds.min_margin = min_margin;
  out.bounds.status = min_margin >= -tol_abs ? MarginTable::Status::Pass
                                             : MarginTable::Status::Fail;

  // Exclusion windows where the sign of F is forced.
  const double wm = sweep.omegas.front(), wp = sweep.omegas.back();
  if (eta_lim > 0.0 && eta < eta_lim) {
    out.lower_window_end = std::sqrt(1.0 - eta / eta_lim) * omega0;
    out.lower_window_vacuous = out.lower_window_end <= wm;
  }
  if (eta_lim > 0.0) {
    out.upper_window_start = std::sqrt(1.0 + eta / eta_lim) * omega0;
    out.upper_window_vacuous = out.upper_window_start >= wp;
  }
  double min_sign_margin = std::numeric_limits<double>::infinity();
  bool any = false;
  for (int k = 0; k < n; ++k) {
    const double w = sweep.omegas[k];
    const double f = sweep.F(potential, k).real();
    if (!out.lower_window_vacuous && w < out.lower_window_end) {
      any = true;
      out.window_signs.entries.push_back({w, -f});
      if (-f < min_sign_margin) {
        min_sign_margin = -f;
        out.window_signs.at = w;
      }
    }
    if (!out.upper_window_vacuous && w > out.upper_window_start) {
      any = true;
      out.window_signs.entries.push_back({w, f});
      if (f < min_sign_margin) {
        min_sign_margin = f;
        out.window_signs.at = w;
      }
    }
  }
  if (!any) {
    out.window_signs.status = MarginTable::Status::SkippedPremise;
    out.window_signs.detail = "exclusion windows vacuous";
  } else {
    out.window_signs.min_margin = min_sign_margin;
    out.window_signs.status = min_sign_margin >= -tol_abs
                                  ? MarginTable::Status::Pass
                                  : MarginTable::Status::Fail;
  }
  return out;
}

MarginTable check_lossy_bound(const SweepResult& sweep, int potential,
                              const Tolerances& tol,
                              std::optional<std::pair<double, double>> subinterval) {
  MarginTable table;
  table.name = "lossy_bound";
  table.potential = potential;
  const double f_inf = sweep.F_inf[potential];
  if (!(f_inf > 0.0)) {
    table.status = MarginTable::Status::SkippedPremise;
    table.detail = "F_inf is not positive";
    return table;
  }
  double wm = sweep.omegas.front(), wp = sweep.omegas.back();
  if (subinterval) {
    wm = std::max(wm, subinterval->first);
    wp = std::min(wp, subinterval->second);
  }
  double max_h = 0.0;
  for (size_t k = 0; k < sweep.omegas.size(); ++k) {
    const double w = sweep.omegas[k];
    if (w < wm || w > wp) continue;
    max_h = std::max(max_h, std::abs(sweep.H(potential, static_cast<int>(k))));
  }
  const double lhs = 0.25 * (wp * wp - wm * wm) * f_inf;
  table.min_margin = max_h - lhs;
  table.at = wp;
  std::ostringstream os;
  os << "lhs=" << lhs << " max|w^2 F|=" << max_h;
  table.detail = os.str();
  table.status =
      table.min_margin >= -tol.bound_rel * std::max(1.0, lhs + max_h)
          ? MarginTable::Status::Pass
          : MarginTable::Status::Fail;
  return table;
}

MarginTable check_derivative_bound(const SweepResult& sweep, int potential,
                                   double omega0, double g_vac, const Tolerances& tol) {
  MarginTable table;
  table.name = "derivative_bound";
  table.potential = potential;
  const int n = static_cast<int>(sweep.omegas.size());
  if (n < 5) {
    table.status = MarginTable::Status::SkippedPremise;
    table.detail = "grid too coarse for centered differences";
    return table;
  }
  // locate omega0 on the grid
  int k0 = 0;
  for (int k = 1; k < n; ++k)
    if (std::abs(sweep.omegas[k] - omega0) < std::abs(sweep.omegas[k0] - omega0)) k0 = k;
  const double f_at = std::abs(sweep.F(potential, k0));
  if (f_at > tol.derivative_premise * std::max(1e-300, g_vac)) {
    table.status = MarginTable::Status::SkippedPremise;
    std::ostringstream os;
    os << "|F(omega0)| = " << f_at << " not within " << tol.derivative_premise
       << " * G_vac = " << tol.derivative_premise * g_vac;
    table.detail = os.str();
    return table;
  }
  const double f_inf = sweep.F_inf[potential];
  const double wm = sweep.omegas.front(), wp = sweep.omegas.back();
  const double dw = sweep.omegas[1] - sweep.omegas[0];
  double max_deriv = 0.0;
  for (int k = 1; k + 1 < n; ++k) {
    const double d =
        std::abs(sweep.H(potential, k + 1) - sweep.H(potential, k - 1)) / (2.0 * dw);
    max_deriv = std::max(max_deriv, d);
  }
  const double lhs1 = 0.25 * (wp + wm) * f_inf;
  const double margin1 = max_deriv - lhs1;

  int kc = std::min(std::max(k0, 1), n - 2);
  const double fprime =
      std::abs(sweep.F(potential, kc + 1) - sweep.F(potential, kc - 1)) / (2.0 * dw);
  const double margin2 = 2.0 * omega0 * fprime - f_inf;

  table.entries.push_back({wp, margin1});
  table.entries.push_back({omega0, margin2});
  table.min_margin = std::min(margin1, margin2);
  table.at = margin1 < margin2 ? wp : omega0;
  std::ostringstream os;
  os << "max|d/dw(w^2 F)|=" << max_deriv << " vs " << lhs1 << "; 2 w0 |F'|="
     << 2.0 * omega0 * fprime << " vs F_inf=" << f_inf
     << "; fd step=" << dw << " (error O(step^2))";
  table.detail = os.str();
  table.status =
      table.min_margin >= -tol.bound_rel * std::max(1.0, std::abs(f_inf) + max_deriv)
          ? MarginTable::Status::Pass
          : MarginTable::Status::Fail;
  return table;
}

SumruleLedger build_H_and_sumrule(const SweepResult& sweep, int potential, double delta,
                                  const Tolerances& tol) {
  if (!(delta > 0.0)) throw ConfigError("build_H_and_sumrule: delta must be positive");
  SumruleLedger ledger;
  ledger.delta = delta;
  ledger.f_inf = sweep.F_inf[potential];
  ledger.table.name = "sumrule";
  ledger.table.potential = potential;
  if (!(ledger.f_inf > 0.0)) {
    ledger.table.status = MarginTable::Status::SkippedPremise;
    ledger.table.detail = "F_inf is not positive";
    return ledger;
  }
  const int n = static_cast<int>(sweep.omegas.size());
  std::vector<double> abs_h(n);
  double max_h = 0.0;
  for (int k = 0; k < n; ++k) {
    abs_h[k] = std::abs(sweep.H(potential, k));
    max_h = std::max(max_h, abs_h[k]);
  }
  ledger.heaviside_len = heaviside_length(sweep.x, abs_h, delta);
  ledger.heaviside_budget = 4.0 * delta / ledger.f_inf;
  ledger.vacuous = ledger.heaviside_budget >= sweep.x.back() - sweep.x.front() &&
                   delta >= max_h;

  // (1/pi) int Im H_mu dx evaluated at y = 0: H is continuous on the window.
  // Points landing exactly on |H| = delta get the principal value via a tiny
  // upward shift; they carry no measure.
  double integral = 0.0;
  std::vector<double> im_hmu(n);
  for (int k = 0; k < n; ++k) {
    Complex h = sweep.H(potential, k);
    if (h + delta == Complex(0.0, 0.0) || h - delta == Complex(0.0, 0.0))
      h += Complex(0.0, 1e-12 * delta);
    im_hmu[k] = compose_uniform_value(h, delta).imag();
  }
  for (int k = 0; k + 1 < n; ++k)
    integral += 0.5 * (im_hmu[k] + im_hmu[k + 1]) * (sweep.x[k + 1] - sweep.x[k]);
  ledger.integral = integral / M_PI;
  ledger.integral_budget = 1.0 / ledger.f_inf;

  const double m1 = ledger.heaviside_budget - ledger.heaviside_len;
  const double m2 = ledger.integral_budget - ledger.integral;
  ledger.table.entries.push_back({delta, m1});
  ledger.table.entries.push_back({delta, m2});
  ledger.table.min_margin = std::min(m1, m2);
  std::ostringstream os;
  os << "heaviside length " << ledger.heaviside_len << " <= " << ledger.heaviside_budget
     << "; sum-rule integral " << ledger.integral << " <= " << ledger.integral_budget;
  if (ledger.vacuous) os << " (vacuous: delta covers the whole window)";
  ledger.table.detail = os.str();
  const double scale = std::max(1.0, ledger.heaviside_budget + ledger.integral_budget);
  ledger.table.status = ledger.table.min_margin >= -tol.bound_rel * scale
                            ? MarginTable::Status::Pass
                            : MarginTable::Status::Fail;
  return ledger;
}

DispersiveObstacleResult dispersive_obstacle_check(const CloakProblem& problem,
                                                   double omega0, int num_points,
                                                   int potential, double eta) {
  DispersiveObstacleResult out;
  out.tensor_monotonicity.name = "dispersive_tensor_monotonicity";
  out.form_ordering.name = "dispersive_form_ordering";
  out.form_ordering.potential = potential;

  const PermittivityModel& model = problem.model();
  if (!model.dispersive_obstacle || model.obstacle_region < 0) {
    out.tensor_monotonicity.status = MarginTable::Status::SkippedPremise;
    out.tensor_monotonicity.detail = "model is not in the dispersive-obstacle regime";
    out.form_ordering.status = MarginTable::Status::SkippedPremise;
    return out;
  }
  const double wm = problem.omega_minus(), wp = problem.omega_plus();

  // obstacle law must be real symmetric, >= eps*I with eps > eps0, on the interval
  const auto& ob_law = model.region_laws[model.obstacle_region];
  for (int k = 0; k < 32; ++k) {
    const double w = wm + (wp - wm) * k / 31.0;
    const Tensor2 eps = eval_law(ob_law, model.eps0, w);
    if (imag_part(eps).norm() > 1e-12 ||
        (eps - eps.transpose()).norm() > 1e-12 ||
        min_eigenvalue(real_part(eps)) <= model.eps0) {
      out.tensor_monotonicity.status = MarginTable::Status::SkippedPremise;
      out.tensor_monotonicity.detail =
          "obstacle law violates the lossless dispersive hypothesis on the interval";
      out.form_ordering.status = MarginTable::Status::SkippedPremise;
      return out;
    }
  }
  if (!check_lossless(model, wm, wp, 64).lossless) {
    out.tensor_monotonicity.status = MarginTable::Status::SkippedPremise;
    out.tensor_monotonicity.detail = "cloak is not lossless on the interval";
    out.form_ordering.status = MarginTable::Status::SkippedPremise;
    return out;
  }

  // Frozen reference: same cloak, obstacle tensor frozen at omega0.
  const PermittivityModel ref_model = frozen_reference(model, omega0);
  const Tensor2 eps_at0 = eval_law(ob_law, model.eps0, omega0);

  // Pointwise tensor monotonicity across omega0.
  double min_mono = std::numeric_limits<double>::infinity();
  for (int k = 0; k < num_points; ++k) {
    const double w = wm + (wp - wm) * k / (num_points - 1);
    const Tensor2 eps = eval_law(ob_law, model.eps0, w);
    const Eigen::Matrix2cd diff =
        w >= omega0 ? real_part(eps - eps_at0) : real_part(eps_at0 - eps);
    const double m = min_eigenvalue(diff);
    out.tensor_monotonicity.entries.push_back({w, m});
    if (m < min_mono) {
      min_mono = m;
      out.tensor_monotonicity.at = w;
    }
  }
  out.tensor_monotonicity.min_margin = min_mono;
  out.tensor_monotonicity.status =
      min_mono >= -1e-12 ? MarginTable::Status::Pass : MarginTable::Status::Fail;
  if (out.tensor_monotonicity.status == MarginTable::Status::Fail) {
    out.form_ordering.status = MarginTable::Status::SkippedPremise;
    out.form_ordering.detail = "tensor monotonicity failed numerically; bounds skipped";
    return out;
  }

  // Quadratic-form ordering F <= F_ref below omega0, F >= F_ref above.
  CloakProblem ref_problem(problem.mesh(), problem.mask(), ref_model, wm, wp);
  for (size_t p = 0; p < problem.potentials().size(); ++p)
    ref_problem.add_potential(problem.potentials()[p], problem.potential_names()[p]);
  ref_problem.tolerances() = problem.tolerances();

  const SweepResult sweep = run_sweep(problem, num_points);
  const SweepResult ref_sweep = run_sweep(ref_problem, num_points);
  out.f_ref_inf = ref_sweep.F_inf[potential];

  double min_ord = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (int k = 0; k < num_points; ++k) {
    const double w = sweep.omegas[k];
    const double f = sweep.F(potential, k).real();
    const double fr = ref_sweep.F(potential, k).real();
    scale = std::max(scale, std::abs(f) + std::abs(fr));
    const double m = w <= omega0 ? fr - f : f - fr;
    out.form_ordering.entries.push_back({w, m});
    if (m < min_ord) {
      min_ord = m;
      out.form_ordering.at = w;
    }
  }
  out.form_ordering.min_margin = min_ord;
  out.form_ordering.status =
      min_ord >= -problem.tolerances().bound_rel * scale ? MarginTable::Status::Pass
                                                         : MarginTable::Status::Fail;

  const double eta_lim = eta_limit(problem.mask().volume_obstacle,
                                   problem.mask().volume_cloak,
                                   min_eigenvalue(real_part(eps_at0)), model.eps0);
  out.reference_bounds = check_approximate_cloaking_bounds(
      ref_sweep, potential, omega0, eta, eta_lim, problem.tolerances());
  return out;
}

ImpossibilityCertificate impossibility_certificate(const CloakProblem& problem,
                                                   const Eigen::Vector2cd& e0) {
  ImpossibilityCertificate cert;
  const Vec v0 = affine_potential(problem.mesh(), e0);
  cert.f_inf = F_infinity(problem, v0);

  double eps_lb = problem.model().eps0;
  if (problem.model().obstacle_region >= 0 &&
      !problem.model().region_laws[problem.model().obstacle_region].dispersive())
    eps_lb = obstacle_lower_eigenvalue(problem.model());

  if (eps_lb > problem.model().eps0) {
    cert.lower_bound = F_infinity_lower_bound(
        problem.mask().volume_obstacle, problem.mask().volume_cloak, eps_lb,
        problem.model().eps0, problem.mesh().total_area(), e0.squaredNorm());
    cert.available = cert.lower_bound > 0.0;
  }
  if (cert.available) {
    std::ostringstream os;
    os << "identically-zero F would force F_inf = 0, contradicting the certified bound "
       << "F_inf >= " << cert.lower_bound << " > 0 (computed F_inf = " << cert.f_inf
       << ")";
    cert.statement = os.str();
  } else {
    std::ostringstream os;
    os << "certificate unavailable: obstacle contrast eps_lb <= eps0, the bound "
       << "degenerates to 0 (computed F_inf = " << cert.f_inf << ")";
    cert.statement = os.str();
  }
  return cert;
}

ApproxCloakingCertificate approx_cloaking_certificate(const CloakProblem& problem,
                                                      double omega0) {
  ApproxCloakingCertificate cert;
  cert.norm_caveat = kNormCaveat;
  if (problem.potentials().empty())
    throw ConfigError("approx_cloaking_certificate: empty potential test set");

  const DtnOperator dtn = problem.dtn_at(omega0);
  const DtnOperator& vac = problem.dtn_vacuum();
  bool any = false;
  for (size_t p = 0; p < problem.potentials().size(); ++p) {
    const Vec& v0 = problem.potentials()[p];
    const double g = (quadratic_form(vac, v0)).real();
    // constant potentials carry no information: G_vac is roundoff-level
    if (g <= 1e-12 * vac.matrix.norm() * v0.squaredNorm()) continue;
    any = true;
    const double ratio =
        std::abs(quadratic_form(dtn, v0) - quadratic_form(vac, v0)) / g;
    if (ratio > cert.eta_star) {
      cert.eta_star = ratio;
      cert.worst_potential = static_cast<int>(p);
    }
  }
  if (!any)
    throw ConfigError(
        "approx_cloaking_certificate: all test potentials have G_vac = 0");

  const Mat diff = dtn.matrix - vac.matrix;
  cert.surrogate_norm_ratio = diff.operatorNorm() / (2.0 * vac.matrix.operatorNorm());
  return cert;
}

}  // namespace cloakbound
