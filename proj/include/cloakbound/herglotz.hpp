#ifndef CLOAKBOUND_HERGLOTZ_HPP
#define CLOAKBOUND_HERGLOTZ_HPP

#include <complex>
#include <functional>
#include <vector>

namespace cloakbound {

using Complex = std::complex<double>;

/// Point mass of a Borel measure.
struct MeasureAtom {
  double xi = 0.0;
  double weight = 0.0;  // >= 0
};

/// Sampled absolutely-continuous density on an interval (trapezoid rule).
struct SampledDensity {
  std::vector<double> x;        // increasing
  std::vector<double> density;  // >= 0
};

/// h(z) = alpha*z + beta + int (1/(xi - z) - xi/(1+xi^2)) dm(xi)
/// with m a finite list of atoms plus an optional sampled density.
struct HerglotzRepresentation {
  double alpha = 0.0;  // >= 0
  double beta = 0.0;
  std::vector<MeasureAtom> atoms;
  SampledDensity density;
};

Complex eval_herglotz(const HerglotzRepresentation& rep, Complex z);

enum class FunctionDomain { UpperHalfPlane, CutPlane, Interval };

/// Evaluator handle for functions passed between modules (F, S, H carriers).
struct SampledFunction {
  std::function<Complex(Complex)> eval;
  FunctionDomain domain = FunctionDomain::UpperHalfPlane;
};

/// Geometric sequence y0 * ratio^k, k = 0..terms-1.
std::vector<double> geometric_sequence(double y0, double ratio, int terms);

struct LimitResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  std::vector<double> table;  // raw sequence before extrapolation
};

/// Leading coefficient alpha = lim h(iy)/(iy) by Richardson extrapolation
/// along an increasing y sequence.
LimitResult extract_alpha(const SampledFunction& f, const std::vector<double>& y_sequence);

/// Point mass m({a}) = lim y * Im h(a + iy) along a decreasing y sequence.
LimitResult atom_mass(const SampledFunction& f, double a,
                      const std::vector<double>& y_sequence);

/// H(z) = z s(-z): Herglotz on C \ R+ when s is Stieltjes.
SampledFunction stieltjes_to_herglotz(const SampledFunction& s);

/// sqrt with branch cut on R+: |z|^{1/2} e^{i arg(z)/2}, arg in (0, 2pi),
/// extended to the cut by the limit from above (nonnegative root on R+).
Complex sqrt_cut_positive(Complex z);

/// log with the same R+ branch cut convention.
Complex log_cut_positive(Complex z);

/// Uniform-measure composition  (1/2D) log((H(z)-D)/(H(z)+D)).
Complex compose_uniform(const SampledFunction& h, double delta, Complex z);
Complex compose_uniform_value(Complex h_value, double delta);

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  std::vector<double> table;  // per-y integrals before extrapolation
};

/// (1/pi) int_{x-}^{x+} Im h(x + iy) dx by adaptive trapezoid at each y of a
/// decreasing sequence, extrapolated to y -> 0.
IntegralResult sumrule_integral(const SampledFunction& h, double x_minus, double x_plus,
                                const std::vector<double>& y_sequence,
                                double quad_tol = 1e-9);

/// Total length of {x : |H(x)| <= delta} from grid samples, with linear
/// interpolation at the |H| = delta crossings.
double heaviside_length(const std::vector<double>& x, const std::vector<double>& abs_h,
                        double delta);

struct DiracScanResult {
  double xi = 0.0;
  double value = 0.0;
};

/// Maximizes the sum-rule integral of z -> 1/(xi - H(z)) over a xi grid.
DiracScanResult dirac_scan(const SampledFunction& h, const std::vector<double>& xi_grid,
                           double x_minus, double x_plus,
                           const std::vector<double>& y_sequence);

}  // namespace cloakbound

#endif
