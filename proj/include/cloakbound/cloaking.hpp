#ifndef CLOAKBOUND_CLOAKING_HPP
#define CLOAKBOUND_CLOAKING_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cloakbound/composites.hpp"
#include "cloakbound/fem.hpp"
#include "cloakbound/geometry.hpp"
#include "cloakbound/herglotz.hpp"
#include "cloakbound/hodge.hpp"
#include "cloakbound/materials.hpp"
#include "cloakbound/rng.hpp"

namespace cloakbound {

/// Caveat attached to every operator-norm figure: the discrete norm is the
/// Euclidean norm on boundary nodes, not the H^{1/2}/H^{-1/2} duality norm.
extern const char* kNormCaveat;

enum class Route { Fem, Effective };

struct Tolerances {
  double identity_rel = 1e-9;       // FEM vs effective-route agreement
  double eigen_margin = 1e-10;      // semidefiniteness certificates
  double bound_rel = 1e-9;          // inequality checks, x natural scale
  double lossless_imag = 1e-12;     // |Im F| on a transparency window
  double herglotz_margin = 1e-10;   // Im[w F] >= -margin on C+
  double derivative_premise = 1e-3; // |F(w0)| <= premise * G_vac gate
};

/// The cloaking problem on a meshed rectangle: material model, probing
/// potentials, frequency interval. Heavy caches (vacuum factorization, Hodge
/// basis) are built lazily and shared.
class CloakProblem {
 public:
  CloakProblem(Mesh mesh, ObstacleMask mask, PermittivityModel model,
               double omega_minus, double omega_plus);

  const Mesh& mesh() const { return *mesh_; }
  const ObstacleMask& mask() const { return mask_; }
  const PermittivityModel& model() const { return model_; }
  double omega_minus() const { return omega_minus_; }
  double omega_plus() const { return omega_plus_; }
  Tolerances& tolerances() { return tol_; }
  const Tolerances& tolerances() const { return tol_; }

  bool reciprocity() const { return reciprocity_; }
  void set_reciprocity(bool flag) { reciprocity_ = flag; }

  /// Default potential set: affine e1, e2 plus `num_random` smooth traces.
  /// Non-reciprocal models restrict the set to real-valued traces.
  void build_potentials(int num_random, Rng& rng);
  void add_potential(const Vec& v0, const std::string& name);
  const std::vector<Vec>& potentials() const { return potentials_; }
  const std::vector<std::string>& potential_names() const { return potential_names_; }

  /// Vacuum DtN operator (frequency independent).
  const DtnOperator& dtn_vacuum() const;

  /// DtN operator of eps(., omega) via FEM Schur complement or the
  /// effective-operator lift. Errors name the frequency.
  DtnOperator dtn_at(Complex omega, Route route = Route::Fem) const;

  const HodgeBasis& hodge() const;

  std::vector<Tensor2> field_at(Complex omega) const;

  Complex g_vac(const Vec& v0) const;

 private:
  // shared_ptr keeps the mesh address stable across moves of the problem;
  // caches reference it
  std::shared_ptr<const Mesh> mesh_;
  ObstacleMask mask_;
  PermittivityModel model_;
  double omega_minus_, omega_plus_;
  bool reciprocity_ = true;
  Tolerances tol_;
  std::vector<Vec> potentials_;
  std::vector<std::string> potential_names_;

  // lazily built, thread-safe, shared caches behind a movable holder
  struct Caches {
    std::once_flag dtn_vac_once, hodge_once;
    std::unique_ptr<DtnOperator> dtn_vac;
    std::unique_ptr<HodgeBasis> hodge;
  };
  std::unique_ptr<Caches> caches_ = std::make_unique<Caches>();
};

/// F_{V0}(omega) = <(L_eps(omega) - L_eps0) v0, conj(v0)>.
Complex evaluate_F(const CloakProblem& problem, const Vec& v0, Complex omega,
                   Route route = Route::Fem);

/// High-frequency limit F_inf = <(L_eps_inf - L_eps0) v0, conj(v0)>, computed
/// directly from eps_inf. Nonnegative up to roundoff.
double F_infinity(const CloakProblem& problem, const Vec& v0);

/// Positive lower bound |O| (1 - eps0/eps) eps0 |Omega| |e0|^2 /
/// (|O| eps0/eps + |Omega \ O|)  for affine potentials.
double F_infinity_lower_bound(double vol_obstacle, double vol_cloak, double eps_lb,
                              double eps0, double vol_total, double e0_norm_sq);

/// Frequency sweep over [omega-, omega+] plus the derived window data.
struct SweepResult {
  std::vector<double> omegas;
  // F values: one row per potential, one column per frequency.
  Mat F;
  std::vector<double> F_inf;
  std::vector<double> G_vac;
  // H(x) = x F(sqrt x) sampled at x_i = omega_i^2.
  std::vector<double> x;
  Mat H;
  bool lossless = false;
  // false in the dispersive-obstacle regime, where eps_inf is undefined and
  // the frozen reference carries the limit instead
  bool f_inf_valid = false;
};

SweepResult run_sweep(const CloakProblem& problem, int num_points, int jobs = 1,
                      Route route = Route::Fem);

/// Analytic Drude reference F = F_inf - w0^2 (F_inf - F0)/w^2: the dispersion
/// law that makes the lossless monotonicity bound an equality.
SweepResult drude_reference_sweep(double omega_minus, double omega_plus, int num_points,
                                  double f_inf, double omega0, double f0);

struct MarginEntry {
  double at = 0.0;       // frequency (or pair midpoint) the margin refers to
  double margin = 0.0;   // >= 0 means the inequality holds there
};

struct MarginTable {
  std::string name;
  enum class Status { Pass, Fail, SkippedPremise } status = Status::Pass;
  std::string detail;
  double min_margin = 0.0;
  double at = 0.0;           // location of the worst margin
  int potential = -1;        // violating / tested potential index
  std::vector<MarginEntry> entries;
};

/// Herglotz structure on a C+ grid: min over grid of Im<L_{w eps} v0, conj v0>
/// and of Im[w F(w)], both >= -tol.
MarginTable check_herglotz_structure(const CloakProblem& problem, const Vec& v0,
                                     const std::vector<Complex>& cplus_grid);

/// Same check over several potentials with one solve per grid point.
MarginTable check_herglotz_structure(const CloakProblem& problem,
                                     const std::vector<Vec>& potentials,
                                     const std::vector<Complex>& cplus_grid);

/// Lossless monotonicity: x -> H(x) - F_inf x nondecreasing, realized as
/// consecutive-pair margins of w^2 (F(w) - F_inf).
MarginTable check_lossless_monotonicity(const SweepResult& sweep, int potential,
                                        const Tolerances& tol);

struct ApproxCloakingResult {
  MarginTable bounds;        // the two-sided envelope margins
  double eta_lim = 0.0;
  double eta = 0.0;
  // Exclusion windows where the sign of F is forced; empty when vacuous.
  bool lower_window_vacuous = true;
  bool upper_window_vacuous = true;
  double lower_window_end = 0.0;    // [omega-, end)
  double upper_window_start = 0.0;  // (start, omega+]
  MarginTable window_signs;
};

ApproxCloakingResult check_approximate_cloaking_bounds(
    const SweepResult& sweep, int potential, double omega0, double eta,
    double eta_lim, const Tolerances& tol);

/// Lossy bound (1/4)(w+^2 - w-^2) F_inf <= max |w^2 F| over the grid,
/// optionally restricted to a subinterval.
MarginTable check_lossy_bound(const SweepResult& sweep, int potential,
                              const Tolerances& tol,
                              std::optional<std::pair<double, double>> subinterval = {});

/// Derivative bounds at a near-zero of F: (1/4)(w+ + w-) F_inf <= max |d/dw (w^2 F)|
/// and F_inf <= 2 w0 |F'(w0)|, with centered finite differences.
MarginTable check_derivative_bound(const SweepResult& sweep, int potential,
                                   double omega0, double g_vac, const Tolerances& tol);

struct SumruleLedger {
  double delta = 0.0;
  double f_inf = 0.0;
  double heaviside_len = 0.0;
  double heaviside_budget = 0.0;  // 4 delta / F_inf
  double integral = 0.0;          // (1/pi) int Im H_mu
  double integral_budget = 0.0;   // 1 / F_inf
  bool vacuous = false;
  MarginTable table;
};

/// H(x) = x F(sqrt x) on [w-^2, w+^2]; Heaviside-length and uniform-measure
/// sum-rule checks against 4D/F_inf and 1/F_inf. H_mu is evaluated directly
/// at y = 0 (H is continuous on the window).
SumruleLedger build_H_and_sumrule(const SweepResult& sweep, int potential, double delta,
                                  const Tolerances& tol);

struct DispersiveObstacleResult {
  MarginTable tensor_monotonicity;
  MarginTable form_ordering;
  ApproxCloakingResult reference_bounds;
  double f_ref_inf = 0.0;
};

/// Dispersive-obstacle extension: frozen reference at omega0, pointwise
/// tensor monotonicity, quadratic-form ordering across omega0, and the
/// approximate-cloaking bounds applied to the reference sweep.
DispersiveObstacleResult dispersive_obstacle_check(const CloakProblem& problem,
                                                   double omega0, int num_points,
                                                   int potential, double eta);

struct ImpossibilityCertificate {
  bool available = false;
  double f_inf = 0.0;
  double lower_bound = 0.0;
  std::string statement;
};

/// F_inf > 0 certificate: an identically-zero F would force F_inf = 0,
/// contradicting the certified positive bound.
ImpossibilityCertificate impossibility_certificate(const CloakProblem& problem,
                                                   const Eigen::Vector2cd& e0);

struct ApproxCloakingCertificate {
  double eta_star = 0.0;          // max |F(w0)| / G_vac over the test set
  int worst_potential = -1;
  double surrogate_norm_ratio = 0.0;  // ||L_eps - L_eps0|| / (2 ||L_eps0||)
  std::string norm_caveat;
};

/// Minimal eta at omega0 over the potential test set, with the surrogate
/// operator-norm figure reported side by side (never asserted against eta*).
ApproxCloakingCertificate approx_cloaking_certificate(const CloakProblem& problem,
                                                      double omega0);

/// eta_lim = (1 - eps0/eps) |O| / (|O| eps0/eps + |Omega \ O|).
double eta_limit(double vol_obstacle, double vol_cloak, double eps_lb, double eps0);

}  // namespace cloakbound

#endif
