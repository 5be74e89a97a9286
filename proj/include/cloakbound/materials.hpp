#ifndef CLOAKBOUND_MATERIALS_HPP
#define CLOAKBOUND_MATERIALS_HPP

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "cloakbound/geometry.hpp"

namespace cloakbound {

using Complex = std::complex<double>;
using Tensor2 = Eigen::Matrix2cd;

/// One Lorentz pole: contribution wp2 / (w0^2 - w^2 - i*gamma*w).
struct LorentzPole {
  double wp2 = 0.0;    // plasma strength, > 0
  double w0 = 0.0;     // resonance frequency, >= 0
  double gamma = 0.0;  // damping, >= 0
};

/// Spatially constant material law for one region.
struct MaterialLaw {
  enum class Kind { ConstantTensor, LorentzSum, AnisotropicLorentz };
  Kind kind = Kind::ConstantTensor;

  Eigen::Matrix2d tensor = Eigen::Matrix2d::Identity();  // ConstantTensor
  std::vector<LorentzPole> poles;                        // LorentzSum (isotropic)
  std::array<std::vector<LorentzPole>, 2> axis_poles;    // AnisotropicLorentz

  bool dispersive() const { return kind != Kind::ConstantTensor; }
};

MaterialLaw constant_law(const Eigen::Matrix2d& tensor);
MaterialLaw lorentz_law(std::vector<LorentzPole> poles);
MaterialLaw anisotropic_lorentz_law(std::vector<LorentzPole> x_poles,
                                    std::vector<LorentzPole> y_poles);

/// Scalar Lorentz sum 1 + sum_j wp2_j / (w0_j^2 - w^2 - i*gamma_j*w),
/// without the eps0 factor. Throws PoleError at an undamped real resonance.
Complex lorentz_scalar(const std::vector<LorentzPole>& poles, Complex omega);

/// Piecewise dispersive permittivity eps(x, omega) over a mesh partitioned
/// into named regions. Immutable; evaluation is pure and reentrant.
struct PermittivityModel {
  double eps0 = 1.0;
  std::vector<std::string> region_labels;
  std::vector<MaterialLaw> region_laws;
  std::vector<int> assignment;         // per-triangle region index
  int obstacle_region = -1;            // -1 when no obstacle region exists
  bool dispersive_obstacle = false;    // dispersive-obstacle regime flag

  int num_regions() const { return static_cast<int>(region_laws.size()); }
  bool is_obstacle(int tri) const {
    return obstacle_region >= 0 && assignment[tri] == obstacle_region;
  }
};

/// Two-region model: `obstacle_law` on masked triangles, `cloak_law` elsewhere.
PermittivityModel make_cloak_model(const Mesh& mesh, const ObstacleMask& mask,
                                   const MaterialLaw& obstacle_law,
                                   const MaterialLaw& cloak_law, double eps0 = 1.0,
                                   bool dispersive_obstacle = false);

/// Uniform model (single region covering the mesh).
PermittivityModel make_uniform_model(const Mesh& mesh, const MaterialLaw& law,
                                     double eps0 = 1.0);

Tensor2 eval_law(const MaterialLaw& law, double eps0, Complex omega);

/// eps(x_T, omega) for the triangle's region.
Tensor2 eval_permittivity(const PermittivityModel& model, int triangle, Complex omega);

/// Hermitian imaginary part (M - M^dagger) / 2i.
Eigen::Matrix2cd imag_part(const Tensor2& m);
Eigen::Matrix2cd real_part(const Tensor2& m);

/// Smallest eigenvalue of the Hermitian part of a 2x2 matrix.
double min_eigenvalue(const Eigen::Matrix2cd& hermitian);

/// Worst-case violation of Im[w*eps(x,w)] >= Im(w)*eps0*I over the grid:
/// min over grid points and regions of the smallest eigenvalue of
/// Im[w*eps] - Im(w)*eps0*I. Nonnegative certifies passivity on the grid.
double check_passivity(const PermittivityModel& model, const std::vector<Complex>& grid);

struct LosslessReport {
  bool lossless = false;
  double max_imag = 0.0;  // max spectral norm of Im[eps] over cloak samples
};

/// Samples the cloak law on [omega_minus, omega_plus]; lossless when the
/// imaginary part stays below 1e-14 in spectral norm.
LosslessReport check_lossless(const PermittivityModel& model, double omega_minus,
                              double omega_plus, int samples);

/// eps_inf: obstacle tensor on obstacle triangles, eps0*I on the rest.
/// Errors in the dispersive-obstacle regime (use the frozen reference instead).
std::vector<Tensor2> epsilon_infinity(const PermittivityModel& model);

struct HighFrequencyReport {
  std::vector<double> y;
  std::vector<double> deviation;  // max over triangles of ||eps(x,iy) - eps_inf(x)||
  bool pass = false;              // monotone decreasing and < 1e-6 at the largest y
};

HighFrequencyReport check_high_frequency_limit(const PermittivityModel& model,
                                               const std::vector<double>& y_sequence);

struct CoercivityMargin {
  double angle = 0.0;   // rotation gamma in [0, 2pi)
  double margin = 0.0;  // best certified c
  bool certified = false;
};

/// Largest c >= 0 such that some angle on a 1024-point grid gives
/// Im[e^{i gamma} * omega * eps(x,omega)] >= c*I on every region.
CoercivityMargin coercivity_margin(const PermittivityModel& model, Complex omega,
                                   int angle_grid = 1024);

/// Rejects cloak laws with an undamped resonance inside [omega_minus, omega_plus]
/// (frequency continuity on the interval would fail there).
void validate_for_interval(const PermittivityModel& model, double omega_minus,
                           double omega_plus);

/// Smallest eigenvalue of the (real symmetric) obstacle tensor; the contrast
/// hypothesis asks for this to exceed eps0.
double obstacle_lower_eigenvalue(const PermittivityModel& model);

/// Freezes a dispersive obstacle at omega0: same cloak law, constant obstacle
/// tensor eps_ob(omega0).
PermittivityModel frozen_reference(const PermittivityModel& model, double omega0);

}  // namespace cloakbound

#endif
