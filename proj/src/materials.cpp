#include "cloakbound/materials.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "cloakbound/errors.hpp"

namespace cloakbound {

MaterialLaw constant_law(const Eigen::Matrix2d& tensor) {
  if (!tensor.allFinite()) throw ConfigError("constant_law: non-finite entries");
  MaterialLaw law;
  law.kind = MaterialLaw::Kind::ConstantTensor;
  law.tensor = tensor;
  return law;
}

static void validate_poles(const std::vector<LorentzPole>& poles) {
  for (const auto& p : poles) {
    if (!(p.wp2 > 0.0)) throw ConfigError("lorentz_law: plasma strength wp2 must be > 0");
    if (p.w0 < 0.0) throw ConfigError("lorentz_law: resonance w0 must be >= 0");
    if (p.gamma < 0.0) throw ConfigError("lorentz_law: damping gamma must be >= 0");
  }
}

MaterialLaw lorentz_law(std::vector<LorentzPole> poles) {
  validate_poles(poles);
  MaterialLaw law;
  law.kind = MaterialLaw::Kind::LorentzSum;
  law.poles = std::move(poles);
  return law;
}

MaterialLaw anisotropic_lorentz_law(std::vector<LorentzPole> x_poles,
                                    std::vector<LorentzPole> y_poles) {
  validate_poles(x_poles);
  validate_poles(y_poles);
  MaterialLaw law;
  law.kind = MaterialLaw::Kind::AnisotropicLorentz;
  law.axis_poles = {std::move(x_poles), std::move(y_poles)};
  return law;
}

Complex lorentz_scalar(const std::vector<LorentzPole>& poles, Complex omega) {
  Complex sum = 1.0;
  for (const auto& p : poles) {
    const Complex den = p.w0 * p.w0 - omega * omega - Complex(0.0, p.gamma) * omega;
    if (den == Complex(0.0, 0.0)) {
      std::ostringstream os;
      os << "lorentz_scalar: pole at omega = " << omega.real();
      if (omega.imag() != 0.0) os << " + " << omega.imag() << "i";
      os << " (undamped resonance w0 = " << p.w0 << ")";
      throw PoleError(os.str());
    }
    sum += p.wp2 / den;
  }
  return sum;
}

Tensor2 eval_law(const MaterialLaw& law, double eps0, Complex omega) {
  switch (law.kind) {
    case MaterialLaw::Kind::ConstantTensor:
      return law.tensor.cast<Complex>();
    case MaterialLaw::Kind::LorentzSum:
      return eps0 * lorentz_scalar(law.poles, omega) * Tensor2::Identity();
    case MaterialLaw::Kind::AnisotropicLorentz: {
      Tensor2 t = Tensor2::Zero();
      t(0, 0) = eps0 * lorentz_scalar(law.axis_poles[0], omega);
      t(1, 1) = eps0 * lorentz_scalar(law.axis_poles[1], omega);
      return t;
    }
  }
  throw Error("eval_law: unreachable");
}

PermittivityModel make_cloak_model(const Mesh& mesh, const ObstacleMask& mask,
                                   const MaterialLaw& obstacle_law,
                                   const MaterialLaw& cloak_law, double eps0,
                                   bool dispersive_obstacle) {
  if (!(eps0 > 0.0)) throw ConfigError("make_cloak_model: eps0 must be positive");
  if (obstacle_law.dispersive() && !dispersive_obstacle)
    throw ConfigError(
        "make_cloak_model: dispersive obstacle law requires the dispersive-obstacle "
        "regime flag");
  PermittivityModel model;
  model.eps0 = eps0;
  model.region_labels = {"obstacle", "cloak"};
  model.region_laws = {obstacle_law, cloak_law};
  model.obstacle_region = 0;
  model.dispersive_obstacle = dispersive_obstacle;
  model.assignment.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) model.assignment[t] = mask.member[t] ? 0 : 1;
  return model;
}

PermittivityModel make_uniform_model(const Mesh& mesh, const MaterialLaw& law, double eps0) {
  if (!(eps0 > 0.0)) throw ConfigError("make_uniform_model: eps0 must be positive");
  PermittivityModel model;
  model.eps0 = eps0;
  model.region_labels = {"bulk"};
  model.region_laws = {law};
  model.obstacle_region = -1;
  model.assignment.assign(mesh.num_triangles(), 0);
  return model;
}

Tensor2 eval_permittivity(const PermittivityModel& model, int triangle, Complex omega) {
  if (triangle < 0 || triangle >= static_cast<int>(model.assignment.size()))
    throw ConfigError("eval_permittivity: triangle index out of range");
  return eval_law(model.region_laws[model.assignment[triangle]], model.eps0, omega);
}

Eigen::Matrix2cd imag_part(const Tensor2& m) {
  return (m - m.adjoint()) / Complex(0.0, 2.0);
}

Eigen::Matrix2cd real_part(const Tensor2& m) { return (m + m.adjoint()) / 2.0; }

double min_eigenvalue(const Eigen::Matrix2cd& hermitian) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double check_passivity(const PermittivityModel& model, const std::vector<Complex>& grid) {
  double worst = std::numeric_limits<double>::infinity();
  for (const Complex w : grid) {
    if (!(w.imag() > 0.0))
      throw ConfigError("check_passivity: grid point not in the open upper half-plane");
    for (const auto& law : model.region_laws) {
      const Tensor2 m = w * eval_law(law, model.eps0, w);
      const Eigen::Matrix2cd gap =
          imag_part(m) - w.imag() * model.eps0 * Eigen::Matrix2cd::Identity();
      worst = std::min(worst, min_eigenvalue(gap));
    }
  }
  return worst;
}

LosslessReport check_lossless(const PermittivityModel& model, double omega_minus,
                              double omega_plus, int samples) {
  if (!(0.0 < omega_minus && omega_minus < omega_plus))
    throw ConfigError("check_lossless: need 0 < omega- < omega+");
  LosslessReport rep;
  rep.max_imag = 0.0;
  for (int r = 0; r < model.num_regions(); ++r) {
    if (r == model.obstacle_region && !model.dispersive_obstacle) continue;
    for (int k = 0; k < samples; ++k) {
      const double w =
          omega_minus + (omega_plus - omega_minus) * (samples == 1 ? 0.5 : double(k) / (samples - 1));
      const Tensor2 eps = eval_law(model.region_laws[r], model.eps0, w);
      const Eigen::Matrix2cd im = imag_part(eps);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(im, Eigen::EigenvaluesOnly);
      rep.max_imag = std::max(rep.max_imag, es.eigenvalues().cwiseAbs().maxCoeff());
    }
  }
  rep.lossless = rep.max_imag <= 1e-14;
  return rep;
}

std::vector<Tensor2> epsilon_infinity(const PermittivityModel& model) {
  if (model.dispersive_obstacle)
    throw ConfigError(
        "epsilon_infinity: dispersive-obstacle regime; use frozen_reference instead");
  if (model.obstacle_region >= 0 &&
      model.region_laws[model.obstacle_region].dispersive())
    throw ConfigError("epsilon_infinity: obstacle law must be non-dispersive");

  std::vector<Tensor2> field(model.assignment.size());
  const Tensor2 vac = model.eps0 * Tensor2::Identity();
  for (size_t t = 0; t < model.assignment.size(); ++t) {
    if (model.is_obstacle(static_cast<int>(t)))
      field[t] = model.region_laws[model.obstacle_region].tensor.cast<Complex>();
    else
      field[t] = vac;
  }
  return field;
}

HighFrequencyReport check_high_frequency_limit(const PermittivityModel& model,
                                               const std::vector<double>& y_sequence) {
  HighFrequencyReport rep;
  rep.y = y_sequence;
  const auto inf_field_of = [&](int region) -> Tensor2 {
    if (region == model.obstacle_region && !model.region_laws[region].dispersive())
      return model.region_laws[region].tensor.cast<Complex>();
    return model.eps0 * Tensor2::Identity();
  };
  for (double y : y_sequence) {
    double dev = 0.0;
    for (int r = 0; r < model.num_regions(); ++r) {
      const Tensor2 diff = eval_law(model.region_laws[r], model.eps0, Complex(0.0, y)) -
                           inf_field_of(r);
      dev = std::max(dev, diff.operatorNorm());
    }
    rep.deviation.push_back(dev);
  }
  rep.pass = !rep.deviation.empty() && rep.deviation.back() < 1e-6;
  for (size_t k = 1; k < rep.deviation.size() && rep.pass; ++k) {
    if (rep.deviation[k] > rep.deviation[k - 1] + 1e-15) rep.pass = false;
  }
  return rep;
}

CoercivityMargin coercivity_margin(const PermittivityModel& model, Complex omega,
                                   int angle_grid) {
  CoercivityMargin best;
  best.margin = -std::numeric_limits<double>::infinity();
  std::vector<Tensor2> weps;
  for (const auto& law : model.region_laws)
    weps.push_back(omega * eval_law(law, model.eps0, omega));
  for (int k = 0; k < angle_grid; ++k) {
    const double gamma = 2.0 * M_PI * k / angle_grid;
    const Complex rot = std::polar(1.0, gamma);
    double c = std::numeric_limits<double>::infinity();
    for (const auto& m : weps) c = std::min(c, min_eigenvalue(imag_part(rot * m)));
    if (c > best.margin) {
      best.margin = c;
      best.angle = gamma;
    }
  }
  best.certified = best.margin > 0.0;
  if (!best.certified) best.margin = 0.0;
  return best;
}

void validate_for_interval(const PermittivityModel& model, double omega_minus,
                           double omega_plus) {
  auto check = [&](const std::vector<LorentzPole>& poles, const std::string& where) {
    for (const auto& p : poles) {
      if (p.gamma == 0.0 && p.w0 >= omega_minus && p.w0 <= omega_plus) {
        std::ostringstream os;
        os << "model: undamped resonance at w0 = " << p.w0 << " inside [" << omega_minus
           << ", " << omega_plus << "] in " << where
           << " (frequency continuity on the interval fails)";
        throw ConfigError(os.str());
      }
    }
  };
  for (int r = 0; r < model.num_regions(); ++r) {
    const auto& law = model.region_laws[r];
    const std::string& label = model.region_labels[r];
    if (law.kind == MaterialLaw::Kind::LorentzSum) check(law.poles, label);
    if (law.kind == MaterialLaw::Kind::AnisotropicLorentz) {
      check(law.axis_poles[0], label);
      check(law.axis_poles[1], label);
    }
  }
}

double obstacle_lower_eigenvalue(const PermittivityModel& model) {
  if (model.obstacle_region < 0)
    throw ConfigError("obstacle_lower_eigenvalue: model has no obstacle region");
  const auto& law = model.region_laws[model.obstacle_region];
  if (law.dispersive())
    throw ConfigError("obstacle_lower_eigenvalue: obstacle law is dispersive");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(law.tensor, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

PermittivityModel frozen_reference(const PermittivityModel& model, double omega0) {
  if (model.obstacle_region < 0)
    throw ConfigError("frozen_reference: model has no obstacle region");
  PermittivityModel ref = model;
  const Tensor2 at0 =
      eval_law(model.region_laws[model.obstacle_region], model.eps0, omega0);
  if (imag_part(at0).norm() > 1e-12)
    throw ConfigError("frozen_reference: obstacle law is not lossless at omega0");
  ref.region_laws[model.obstacle_region] = constant_law(at0.real());
  ref.dispersive_obstacle = false;
  return ref;
}

}  // namespace cloakbound
