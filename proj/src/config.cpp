#include "cloakbound/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cloakbound/errors.hpp"

namespace cloakbound {

using nlohmann::json;

namespace {

MaterialLaw parse_law(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("type"))
    throw ConfigError("config: " + where + " must be an object with a \"type\" field");
  const std::string type = j.at("type").get<std::string>();
  if (type == "constant") {
    if (!j.contains("tensor")) throw ConfigError("config: " + where + ": missing tensor");
    const auto& t = j.at("tensor");
    if (!t.is_array() || t.size() != 2 || !t[0].is_array() || t[0].size() != 2 ||
        t[1].size() != 2)
      throw ConfigError("config: " + where + ": tensor must be a 2x2 array");
    Eigen::Matrix2d m;
    m << t[0][0].get<double>(), t[0][1].get<double>(), t[1][0].get<double>(),
        t[1][1].get<double>();
    return constant_law(m);
  }
  auto parse_poles = [&](const json& arr) {
    std::vector<LorentzPole> poles;
    for (const auto& p : arr) {
      LorentzPole pole;
      pole.wp2 = p.at("wp2").get<double>();
      pole.w0 = p.at("w0").get<double>();
      pole.gamma = p.value("gamma", 0.0);
      poles.push_back(pole);
    }
    return poles;
  };
  if (type == "lorentz") {
    if (!j.contains("poles")) throw ConfigError("config: " + where + ": missing poles");
    return lorentz_law(parse_poles(j.at("poles")));
  }
  if (type == "anisotropic_lorentz") {
    return anisotropic_lorentz_law(parse_poles(j.at("x_poles")),
                                   parse_poles(j.at("y_poles")));
  }
  throw ConfigError("config: " + where + ": unknown law type \"" + type + "\"");
}

}  // namespace

bool RunConfig::wants(const std::string& check) const {
  if (checks.empty()) return true;
  for (const auto& c : checks)
    if (c == "all" || c == check) return true;
  return false;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("mesh")) {
      const auto& m = j.at("mesh");
      cfg.nx = m.value("nx", cfg.nx);
      cfg.ny = m.value("ny", cfg.ny);
      cfg.width = m.value("width", cfg.width);
      cfg.height = m.value("height", cfg.height);
    }
    if (j.contains("obstacle")) {
      for (const auto& r : j.at("obstacle").value("rects", json::array())) {
        cfg.obstacle_rects.push_back({r.at("x0").get<double>(), r.at("y0").get<double>(),
                                      r.at("x1").get<double>(), r.at("y1").get<double>()});
      }
    }
    if (j.contains("materials")) {
      const auto& m = j.at("materials");
      cfg.eps0 = m.value("eps0", 1.0);
      // eps0 may also ride inside a law object; it always means the vacuum level
      for (const char* key : {"obstacle", "cloak"}) {
        if (m.contains(key) && m.at(key).is_object() && m.at(key).contains("eps0"))
          cfg.eps0 = m.at(key).at("eps0").get<double>();
      }
      if (m.contains("obstacle")) cfg.obstacle_law = parse_law(m.at("obstacle"), "materials.obstacle");
      if (m.contains("cloak")) cfg.cloak_law = parse_law(m.at("cloak"), "materials.cloak");
      cfg.dispersive_obstacle = m.value("dispersive_obstacle", false);
      if (m.contains("eps_lb")) cfg.eps_lb = m.at("eps_lb").get<double>();
    }
    if (j.contains("frequency")) {
      const auto& f = j.at("frequency");
      cfg.omega_minus = f.value("omega_min", cfg.omega_minus);
      cfg.omega_plus = f.value("omega_max", cfg.omega_plus);
      cfg.num_points = f.value("num_points", cfg.num_points);
      if (f.contains("cplus_grid")) {
        const auto& g = f.at("cplus_grid");
        cfg.cplus.re_min = g.value("re_min", cfg.cplus.re_min);
        cfg.cplus.re_max = g.value("re_max", cfg.cplus.re_max);
        cfg.cplus.im_min = g.value("im_min", cfg.cplus.im_min);
        cfg.cplus.im_max = g.value("im_max", cfg.cplus.im_max);
        cfg.cplus.n_re = g.value("n_re", cfg.cplus.n_re);
        cfg.cplus.n_im = g.value("n_im", cfg.cplus.n_im);
      }
    }
    if (j.contains("potentials")) {
      const auto& p = j.at("potentials");
      cfg.include_affine = p.value("include_affine", true);
      cfg.num_random_potentials = p.value("num_random", 4);
      cfg.reciprocity = p.value("reciprocity", true);
    }
    if (j.contains("cloaking")) {
      const auto& c = j.at("cloaking");
      if (c.contains("omega0") && !c.at("omega0").is_null())
        cfg.omega0 = c.at("omega0").get<double>();
      if (c.contains("eta") && !c.at("eta").is_null())
        cfg.eta = c.at("eta").get<double>();
      if (c.contains("delta") && !c.at("delta").is_null())
        cfg.delta = c.at("delta").get<double>();
    }
    if (j.contains("checks")) {
      for (const auto& c : j.at("checks")) cfg.checks.push_back(c.get<std::string>());
    }
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      cfg.quadrature.alpha_y0 = q.value("alpha_y0", cfg.quadrature.alpha_y0);
      cfg.quadrature.alpha_ratio = q.value("alpha_ratio", cfg.quadrature.alpha_ratio);
      cfg.quadrature.alpha_terms = q.value("alpha_terms", cfg.quadrature.alpha_terms);
      cfg.quadrature.sumrule_y0 = q.value("sumrule_y0", cfg.quadrature.sumrule_y0);
      cfg.quadrature.sumrule_ratio =
          q.value("sumrule_ratio", cfg.quadrature.sumrule_ratio);
      cfg.quadrature.sumrule_terms =
          q.value("sumrule_terms", cfg.quadrature.sumrule_terms);
      cfg.quadrature.quad_tol = q.value("quad_tol", cfg.quadrature.quad_tol);
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      cfg.tolerances.identity_rel = t.value("identity_rel", cfg.tolerances.identity_rel);
      cfg.tolerances.eigen_margin = t.value("eigen_margin", cfg.tolerances.eigen_margin);
      cfg.tolerances.bound_rel = t.value("bound_rel", cfg.tolerances.bound_rel);
      cfg.tolerances.lossless_imag =
          t.value("lossless_imag", cfg.tolerances.lossless_imag);
      cfg.tolerances.herglotz_margin =
          t.value("herglotz_margin", cfg.tolerances.herglotz_margin);
      cfg.tolerances.derivative_premise =
          t.value("derivative_premise", cfg.tolerances.derivative_premise);
    }
    if (j.contains("route")) {
      const std::string route = j.at("route").get<std::string>();
      if (route == "fem")
        cfg.route = Route::Fem;
      else if (route == "effective")
        cfg.route = Route::Effective;
      else
        throw ConfigError("config: route must be \"fem\" or \"effective\"");
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.jobs = j.value("jobs", cfg.jobs);
    if (j.contains("output")) {
      cfg.report_path = j.at("output").value("report", cfg.report_path);
      cfg.sweep_path = j.at("output").value("sweep", cfg.sweep_path);
      cfg.dump_matrices = j.at("output").value("dump_matrices", false);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: schema violation: ") + e.what());
  }

  // physical constraints enforced at load
  if (cfg.nx < 2 || cfg.ny < 2) throw ConfigError("config: mesh.nx and mesh.ny must be >= 2");
  if (!(cfg.width > 0.0 && cfg.height > 0.0))
    throw ConfigError("config: mesh extents must be positive");
  if (!(0.0 < cfg.omega_minus && cfg.omega_minus < cfg.omega_plus))
    throw ConfigError("config: need 0 < omega_min < omega_max");
  if (cfg.num_points < 2) throw ConfigError("config: frequency.num_points must be >= 2");
  if (!(cfg.eps0 > 0.0)) throw ConfigError("config: eps0 must be positive");
  if (cfg.cplus.n_re < 1 || cfg.cplus.n_im < 1 || !(cfg.cplus.im_min > 0.0))
    throw ConfigError("config: cplus_grid must stay in the open upper half-plane");
  if (cfg.delta && !(*cfg.delta > 0.0)) throw ConfigError("config: delta must be > 0");
  if (cfg.eta && !(*cfg.eta >= 0.0)) throw ConfigError("config: eta must be >= 0");
  if (cfg.omega0 &&
      !(*cfg.omega0 >= cfg.omega_minus && *cfg.omega0 <= cfg.omega_plus))
    throw ConfigError("config: omega0 must lie in [omega_min, omega_max]");
  if (cfg.jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (cfg.quadrature.alpha_terms < 3 || cfg.quadrature.sumrule_terms < 3)
    throw ConfigError("config: quadrature sequences need at least 3 terms");
  if (!(cfg.quadrature.alpha_ratio > 1.0) || !(cfg.quadrature.sumrule_ratio < 1.0) ||
      !(cfg.quadrature.sumrule_ratio > 0.0) || !(cfg.quadrature.alpha_y0 > 0.0) ||
      !(cfg.quadrature.sumrule_y0 > 0.0))
    throw ConfigError(
        "config: quadrature y sequences must increase for alpha and decrease to 0 "
        "for sum rules");

  if (!cfg.obstacle_rects.empty() && !cfg.dispersive_obstacle) {
    if (cfg.obstacle_law.dispersive())
      throw ConfigError(
          "config: dispersive obstacle law requires materials.dispersive_obstacle");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cfg.obstacle_law.tensor,
                                                      Eigen::EigenvaluesOnly);
    const double lb = es.eigenvalues().minCoeff();
    if ((cfg.obstacle_law.tensor - cfg.obstacle_law.tensor.transpose()).norm() > 1e-14)
      throw ConfigError("config: obstacle tensor must be symmetric");
    if (cfg.eps_lb && *cfg.eps_lb > lb + 1e-12)
      throw ConfigError("config: eps_lb exceeds the obstacle tensor's smallest eigenvalue");
    if (!cfg.eps_lb) cfg.eps_lb = lb;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

CloakProblem build_problem(const RunConfig& cfg, Rng& rng) {
  Mesh mesh = build_mesh(cfg.nx, cfg.ny, cfg.width, cfg.height);

  ObstacleMask mask;
  PermittivityModel model;
  if (cfg.obstacle_rects.empty()) {
    // vacuum baseline: no obstacle, uniform cloak law over the domain
    mask.member.assign(mesh.num_triangles(), 0);
    mask.volume_obstacle = 0.0;
    mask.volume_cloak = mesh.total_area();
    model = make_uniform_model(mesh, cfg.cloak_law, cfg.eps0);
  } else {
    mask = mark_obstacle(mesh, cfg.obstacle_rects);
    model = make_cloak_model(mesh, mask, cfg.obstacle_law, cfg.cloak_law, cfg.eps0,
                             cfg.dispersive_obstacle);
  }

  CloakProblem problem(std::move(mesh), std::move(mask), std::move(model),
                       cfg.omega_minus, cfg.omega_plus);
  problem.set_reciprocity(cfg.reciprocity);
  problem.tolerances() = cfg.tolerances;
  if (cfg.include_affine || cfg.num_random_potentials > 0) {
    problem.build_potentials(cfg.num_random_potentials, rng);
  }
  return problem;
}

}  // namespace cloakbound
