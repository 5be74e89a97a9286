#ifndef CLOAKBOUND_CONFIG_HPP
#define CLOAKBOUND_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloakbound/cloaking.hpp"
#include "cloakbound/geometry.hpp"
#include "cloakbound/materials.hpp"

namespace cloakbound {

/// Grid of complex frequencies in the open upper half-plane, log-spaced.
struct CplusGridSpec {
  double re_min = 0.1, re_max = 5.0;
  double im_min = 0.1, im_max = 5.0;
  int n_re = 10, n_im = 10;
};

/// Limit and quadrature parameters: geometric y sequences (ratio 2, 12 terms
/// by default) with Richardson extrapolation, and the trapezoid tolerance.
struct QuadratureSpec {
  double alpha_y0 = 64.0;
  double alpha_ratio = 2.0;
  int alpha_terms = 12;
  double sumrule_y0 = 1e-2;
  double sumrule_ratio = 0.5;
  int sumrule_terms = 12;
  double quad_tol = 1e-9;
};

/// Parsed and validated run configuration. Physics lives in the file; flags
/// only carry paths, seed and parallelism.
struct RunConfig {
  int nx = 16, ny = 16;
  double width = 1.0, height = 1.0;

  std::vector<RectRegion> obstacle_rects;  // empty means no obstacle (vacuum runs)
  double eps0 = 1.0;
  MaterialLaw obstacle_law = constant_law(Eigen::Matrix2d::Identity());
  MaterialLaw cloak_law = constant_law(Eigen::Matrix2d::Identity());
  bool dispersive_obstacle = false;
  std::optional<double> eps_lb;  // defaults to the obstacle tensor's smallest eigenvalue

  double omega_minus = 0.5, omega_plus = 1.0;
  int num_points = 100;
  CplusGridSpec cplus;
  QuadratureSpec quadrature;

  bool include_affine = true;
  int num_random_potentials = 4;
  bool reciprocity = true;

  std::optional<double> omega0;  // defaults to the interval midpoint
  std::optional<double> eta;     // defaults to the computed eta* certificate
  std::optional<double> delta;   // defaults to max |H| on the window

  Route route = Route::Fem;  // sweep evaluation route

  std::vector<std::string> checks;  // empty or {"all"} selects every check
  Tolerances tolerances;

  std::uint64_t seed = 12345;
  int jobs = 1;
  std::string report_path = "report.json";
  std::string sweep_path = "sweep.csv";
  bool dump_matrices = false;

  bool wants(const std::string& check) const;
};

/// Parses and validates a JSON config; throws ConfigError with diagnostics.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

/// Builds the problem a config describes (mesh, mask, model, potentials).
CloakProblem build_problem(const RunConfig& cfg, Rng& rng);

}  // namespace cloakbound

#endif
