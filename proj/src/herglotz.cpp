#include "cloakbound/herglotz.hpp"

#include <algorithm>
#include <cmath>

#include "cloakbound/errors.hpp"

namespace cloakbound {

Complex eval_herglotz(const HerglotzRepresentation& rep, Complex z) {
  if (!(z.imag() > 0.0)) {
    // permit real z only away from atoms
    for (const auto& atom : rep.atoms)
      if (z.imag() == 0.0 && z.real() == atom.xi)
        throw PoleError("eval_herglotz: z lies on an atom of the measure");
  }
  Complex acc = rep.alpha * z + rep.beta;
  for (const auto& atom : rep.atoms)
    acc += atom.weight * (1.0 / (atom.xi - z) - atom.xi / (1.0 + atom.xi * atom.xi));
  const auto& d = rep.density;
  if (d.x.size() >= 2) {
    for (size_t k = 0; k + 1 < d.x.size(); ++k) {
      const double h = d.x[k + 1] - d.x[k];
      auto integrand = [&](double xi, double rho) {
        return rho * (1.0 / (xi - z) - xi / (1.0 + xi * xi));
      };
      acc += 0.5 * h * (integrand(d.x[k], d.density[k]) +
                        integrand(d.x[k + 1], d.density[k + 1]));
    }
  }
  return acc;
}

std::vector<double> geometric_sequence(double y0, double ratio, int terms) {
  std::vector<double> ys;
  ys.reserve(terms);
  double y = y0;
  for (int k = 0; k < terms; ++k) {
    ys.push_back(y);
    y *= ratio;
  }
  return ys;
}

namespace {

// One Richardson sweep assuming error ~ step^order with the given step ratio.
std::vector<double> richardson_sweep(const std::vector<double>& seq, double ratio,
                                     int order) {
  const double w = std::pow(ratio, order);
  std::vector<double> out;
  for (size_t k = 0; k + 1 < seq.size(); ++k)
    out.push_back((w * seq[k + 1] - seq[k]) / (w - 1.0));
  return out;
}

LimitResult extrapolate(const std::vector<double>& seq, double ratio, int first_order,
                        int order_step) {
  LimitResult res;
  if (seq.empty()) return res;
  std::vector<double> cur = seq;
  double prev_last = cur.back();
  int order = first_order;
  for (int level = 0; level < 3 && cur.size() >= 2; ++level) {
    cur = richardson_sweep(cur, ratio, order);
    order += order_step;
  }
  res.value = cur.back();
  res.error_estimate = std::abs(res.value - prev_last);
  if (cur.size() >= 2)
    res.error_estimate = std::max(std::abs(cur.back() - cur[cur.size() - 2]),
                                  1e-15 * std::abs(res.value));
  res.converged = res.error_estimate <=
                  1e-4 * std::max(1.0, std::abs(res.value)) + 1e-12;
  return res;
}

}  // namespace

LimitResult extract_alpha(const SampledFunction& f, const std::vector<double>& ys) {
  if (ys.size() < 3) throw ConfigError("extract_alpha: need at least 3 sample points");
  std::vector<double> seq;
  seq.reserve(ys.size());
  for (double y : ys) {
    const Complex z(0.0, y);
    // Re[h(iy)/(iy)] = alpha + O(1/y^2); the O(1/y) parts are imaginary.
    seq.push_back((f.eval(z) / z).real());
  }
  // increasing y with ratio r: error ~ y^{-2} shrinks by r^2 per step
  const double ratio = ys[1] / ys[0];
  LimitResult res = extrapolate(seq, ratio * ratio, 1, 1);
  res.table = std::move(seq);
  return res;
}

LimitResult atom_mass(const SampledFunction& f, double a, const std::vector<double>& ys) {
  if (ys.size() < 3) throw ConfigError("atom_mass: need at least 3 sample points");
  std::vector<double> seq;
  seq.reserve(ys.size());
  for (double y : ys) seq.push_back(y * f.eval(Complex(a, y)).imag());
  // decreasing y with ratio 1/r: errors ~ y, y^2, ...
  const double ratio = ys[0] / ys[1];
  LimitResult res = extrapolate(seq, ratio, 1, 1);
  res.table = std::move(seq);
  return res;
}

SampledFunction stieltjes_to_herglotz(const SampledFunction& s) {
  SampledFunction h;
  h.domain = FunctionDomain::CutPlane;
  auto eval = s.eval;
  h.eval = [eval](Complex z) { return z * eval(-z); };
  return h;
}

Complex sqrt_cut_positive(Complex z) {
  if (z == Complex(0.0, 0.0)) return 0.0;
  double arg = std::atan2(z.imag(), z.real());
  // branch cut on R+; values on the cut from the limit above (arg -> 0+)
  if (arg < 0.0) arg += 2.0 * M_PI;
  return std::polar(std::sqrt(std::abs(z)), 0.5 * arg);
}

Complex log_cut_positive(Complex z) {
  if (z == Complex(0.0, 0.0))
    throw PoleError("log_cut_positive: log(0)");
  double arg = std::atan2(z.imag(), z.real());
  if (arg < 0.0) arg += 2.0 * M_PI;
  return Complex(std::log(std::abs(z)), arg);
}

Complex compose_uniform_value(Complex h_value, double delta) {
  if (!(delta > 0.0)) throw ConfigError("compose_uniform: delta must be positive");
  const Complex num = h_value - delta;
  const Complex den = h_value + delta;
  if (den == Complex(0.0, 0.0) || num == Complex(0.0, 0.0))
    throw PoleError("compose_uniform: argument on the logarithmic singularity");
  return log_cut_positive(num / den) / (2.0 * delta);
}

Complex compose_uniform(const SampledFunction& h, double delta, Complex z) {
  return compose_uniform_value(h.eval(z), delta);
}

namespace {

double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b,
                          double fa, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double left = 0.5 * (m - a) * (fa + fm);
  const double right = 0.5 * (b - m) * (fm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 3.0 * tol)
    return left + right + (left + right - whole) / 3.0;
  return adaptive_trapezoid(f, a, m, fa, fm, left, tol / 2.0, depth - 1) +
         adaptive_trapezoid(f, m, b, fm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b);
  const double whole = 0.5 * (b - a) * (fa + fb);
  return adaptive_trapezoid(f, a, b, fa, fb, whole,
                            tol * std::max(1.0, std::abs(whole)), 40);
}

}  // namespace

IntegralResult sumrule_integral(const SampledFunction& h, double x_minus, double x_plus,
                                const std::vector<double>& ys, double quad_tol) {
  if (!(x_minus < x_plus)) throw ConfigError("sumrule_integral: empty interval");
  if (ys.size() < 3) throw ConfigError("sumrule_integral: need at least 3 y values");
  std::vector<double> seq;
  seq.reserve(ys.size());
  for (double y : ys) {
    auto integrand = [&](double x) { return h.eval(Complex(x, y)).imag(); };
    seq.push_back(integrate(integrand, x_minus, x_plus, quad_tol) / M_PI);
  }
  const double ratio = ys[0] / ys[1];
  const LimitResult lim = extrapolate(seq, ratio, 1, 1);
  IntegralResult res;
  res.value = lim.value;
  res.error_estimate = lim.error_estimate;
  res.converged = lim.converged;
  res.table = std::move(seq);
  return res;
}

double heaviside_length(const std::vector<double>& x, const std::vector<double>& abs_h,
                        double delta) {
  if (!(delta > 0.0)) throw ConfigError("heaviside_length: delta must be positive");
  if (x.size() != abs_h.size() || x.size() < 2)
    throw ConfigError("heaviside_length: grid and samples must match, size >= 2");
  double length = 0.0;
  for (size_t k = 0; k + 1 < x.size(); ++k) {
    const double g0 = abs_h[k] - delta;
    const double g1 = abs_h[k + 1] - delta;
    const double dx = x[k + 1] - x[k];
    if (g0 <= 0.0 && g1 <= 0.0) {
      length += dx;
    } else if (g0 < 0.0 && g1 > 0.0) {
      length += dx * (g0 / (g0 - g1));  // leading fraction with g <= 0
    } else if (g0 > 0.0 && g1 < 0.0) {
      length += dx * (1.0 - g0 / (g0 - g1));  // trailing fraction
    }
  }
  return length;
}

DiracScanResult dirac_scan(const SampledFunction& h, const std::vector<double>& xi_grid,
                           double x_minus, double x_plus,
                           const std::vector<double>& ys) {
  if (xi_grid.empty()) throw ConfigError("dirac_scan: empty xi grid");
  DiracScanResult best;
  best.value = -std::numeric_limits<double>::infinity();
  auto eval = h.eval;
  for (double xi : xi_grid) {
    SampledFunction composed;
    composed.domain = FunctionDomain::UpperHalfPlane;
    composed.eval = [eval, xi](Complex z) { return 1.0 / (xi - eval(z)); };
    const IntegralResult r = sumrule_integral(composed, x_minus, x_plus, ys);
    if (r.value > best.value) {
      best.value = r.value;
      best.xi = xi;
    }
  }
  return best;
}

}  // namespace cloakbound
