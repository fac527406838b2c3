#include "chflow/studies.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "chflow/errors.hpp"
#include "chflow/fem.hpp"
#include "chflow/io.hpp"
#include "chflow/norms.hpp"
#include "chflow/quadrature.hpp"

namespace chflow {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return (fs::path(cfg.out_dir) / name).string();
}

nlohmann::json log_to_json(const IterationLog& log) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : log.steps) {
    nlohmann::json rec{{"step", s.step},
                       {"norm_v_h1", s.norm_v_h1},
                       {"norm_v_w2p", s.norm_v_w2p},
                       {"norm_w_w1p", s.norm_w_w1p},
                       {"delta", s.delta},
                       {"minJ", s.min_jac},
                       {"e_norm", s.e_norm},
                       {"inner_iters", s.inner_iters},
                       {"inner_residual", s.inner_residual}};
    if (std::isnan(s.ratio))
      rec["ratio"] = nullptr;
    else
      rec["ratio"] = s.ratio;
    steps.push_back(rec);
  }
  return nlohmann::json{{"d0", log.d0},
                        {"converged", log.converged},
                        {"error", log.error},
                        {"iterations", steps}};
}

void write_log(const RunConfig& cfg, const nlohmann::json& j) {
  std::ofstream out(out_path(cfg, "log.json"));
  out << j.dump(2) << '\n';
}

void write_combined_fields(const std::string& path, const char* header,
                           const VectorField& vec, const ScalarField& sca) {
  std::ofstream out(path);
  const Grid g = sca.grid;
  out << header << '\n';
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i)
      out << fmt_g17(g.z1(i)) << ',' << fmt_g17(g.z2(j)) << ',' << fmt_g17(vec.c1(i, j)) << ','
          << fmt_g17(vec.c2(i, j)) << ',' << fmt_g17(sca(i, j)) << '\n';
}

void write_flowmap(const std::string& path, const FlowMap& m) {
  std::ofstream out(path);
  const Grid g = m.psi2.grid;
  out << "z1,z2,psi2,E21,E22,J\n";
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i)
      out << fmt_g17(g.z1(i)) << ',' << fmt_g17(g.z2(j)) << ',' << fmt_g17(m.psi2(i, j)) << ','
          << fmt_g17(m.e21(i, j)) << ',' << fmt_g17(m.e22(i, j)) << ',' << fmt_g17(m.jac(i, j))
          << '\n';
}

double final_norm_of(const IterationLog& log) {
  if (log.steps.empty()) return 0.0;
  const StepRecord& s = log.steps.back();
  return s.norm_v_w2p + s.norm_w_w1p;
}

}  // namespace

SolveResult cmd_solve(const RunConfig& cfg) {
  SolveResult res;
  try {
    BoundarySpec spec = make_boundary_spec(cfg.data, cfg.params);
    Solution sol = run_picard(spec, cfg.params, res.log);
    res.d0 = res.log.d0;
    res.residuals = nonlinear_residual(sol, spec, cfg.params);
    res.diffeo = check_diffeo(sol.map, cfg.params);

    XFields xf = reconstruct_x(sol);
    write_combined_fields(out_path(cfg, "fields_z.csv"), "z1,z2,v1,v2,w", sol.v, sol.w);
    write_combined_fields(out_path(cfg, "fields_x.csv"), "x1,x2,u1,u2,rho", xf.u, xf.rho);
    write_flowmap(out_path(cfg, "flowmap.csv"), sol.map);

    nlohmann::json j = log_to_json(res.log);
    j["residuals"] = {{"mass_fixed_point", res.residuals.mass_fixed_point},
                      {"momentum_weak", res.residuals.momentum_weak},
                      {"combined", res.residuals.combined},
                      {"z_mass_lp", res.residuals.z_mass_lp},
                      {"z_momentum_lp", res.residuals.z_momentum_lp},
                      {"x_mass_lp", res.residuals.x_mass_lp},
                      {"x_momentum_lp", res.residuals.x_momentum_lp},
                      {"wall_navier_sup", res.residuals.wall_navier_sup}};
    j["diffeo"] = {{"min_jac", res.diffeo.min_jac},
                   {"e_norm_w1p", res.diffeo.e_norm_w1p},
                   {"max_abs_e21", res.diffeo.max_abs_e21},
                   {"max_abs_e22", res.diffeo.max_abs_e22}};
    write_log(cfg, j);
    res.exit_code = 0;
  } catch (const SolverError& e) {
    res.d0 = res.log.d0;
    res.error = SolverError::name(e.kind());
    res.exit_code = SolverError::exit_code(e.kind());
    nlohmann::json j = log_to_json(res.log);
    j["message"] = e.what();
    write_log(cfg, j);
  }
  return res;
}

MmsErrors mms_single(const Params& params, double eps) {
  const Grid g = params.grid();
  const double mu = params.mu, nu = params.nu, gamma = params.gamma;

  auto vs = [=](double z1, double z2) { return eps * std::sin(kPi * z1) * std::sin(kPi * z2); };
  auto ws = [=](double z1, double z2) { return eps * z1 * std::sin(kPi * z2); };

  LinearData data;
  data.params = params;
  data.map = FlowMap::identity(g);
  data.v_bar = VectorField(g);
  data.w_in = BoundaryProfile(params.n, 0.0);
  data.f = ScalarField::sample(g, [=](double z1, double z2) {
    return (1.0 + z2) * eps * std::sin(kPi * z2) +
           eps * kPi * std::cos(kPi * z1) * std::sin(kPi * z2);
  });
  data.g = VectorField::sample(
      g,
      [=](double z1, double z2) {
        return (1.0 + z2) * eps * kPi * std::cos(kPi * z1) * std::sin(kPi * z2) +
               gamma * eps * std::sin(kPi * z2) +
               (3.0 * mu + nu) * kPi * kPi * eps * std::sin(kPi * z1) * std::sin(kPi * z2);
      },
      [=](double z1, double z2) {
        return gamma * eps * z1 * kPi * std::cos(kPi * z2) -
               (mu + nu) * eps * kPi * kPi * std::cos(kPi * z1) * std::cos(kPi * z2);
      });
  data.b_tilde_bottom = BoundaryProfile::sample(
      params.n, [=](double t) { return -mu * eps * kPi * std::sin(kPi * t); });
  data.b_tilde_top = BoundaryProfile::sample(
      params.n, [=](double t) { return -mu * eps * kPi * std::sin(kPi * t); });

  LinearSolution sol = solve_linear_system(data);

  VectorField v_exact = VectorField::sample(g, vs, [](double, double) { return 0.0; });
  ScalarField w_exact = ScalarField::sample(g, ws);
  MmsErrors err;
  err.v_l2 = norm(sol.v - v_exact, NormKind::Lp, 2.0);
  err.v_h1 = norm(sol.v - v_exact, NormKind::H1);
  err.w_l2 = norm(sol.w - w_exact, NormKind::Lp, 2.0);
  return err;
}

MmsResult cmd_mms(const RunConfig& cfg) {
  const double eps = cfg.data.u0_amplitude > 0 ? cfg.data.u0_amplitude : 1e-3;
  MmsResult res;
  for (int n : {16, 32, 64, 128}) {
    Params p = cfg.params;
    p.n = n;
    MmsRow row;
    row.n = n;
    row.err = mms_single(p, eps);
    if (!res.rows.empty()) {
      const MmsRow& prev = res.rows.back();
      row.order_v_l2 = std::log2(prev.err.v_l2 / row.err.v_l2);
      row.order_v_h1 = std::log2(prev.err.v_h1 / row.err.v_h1);
      row.order_w_l2 = std::log2(prev.err.w_l2 / row.err.w_l2);
    }
    res.rows.push_back(row);
  }
  const MmsRow& last = res.rows.back();
  res.pass = last.order_v_l2 >= 1.8 && last.order_w_l2 >= 1.8;

  Table t;
  t.header = {"n", "err_v_l2", "err_v_h1", "err_w_l2", "order_v_l2", "order_v_h1", "order_w_l2"};
  for (const auto& r : res.rows)
    t.rows.push_back({static_cast<double>(r.n), r.err.v_l2, r.err.v_h1, r.err.w_l2,
                      r.order_v_l2, r.order_v_h1, r.order_w_l2});
  write_csv(out_path(cfg, "mms.csv"), t);
  return res;
}

KornResult cmd_korn(const RunConfig& cfg) {
  const Grid g = cfg.params.grid();
  const double h = g.h;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);

  KornResult res;
  res.min_korn = std::numeric_limits<double>::max();
  res.min_poincare = std::numeric_limits<double>::max();

  Table t;
  t.header = {"sample", "korn_ratio", "poincare_ratio"};
  for (int s = 0; s < 100; ++s) {
    VectorField v(g);
    for (int j = 0; j <= g.n; ++j) {
      for (int i = 0; i <= g.n; ++i) {
        const bool inout = (i == 0 || i == g.n);
        const bool wall = (j == 0 || j == g.n);
        v.c1(i, j) = inout ? 0.0 : uni(rng);
        v.c2(i, j) = (inout || wall) ? 0.0 : uni(rng);
      }
    }
    fem::EnergyReport e = fem::energy_quadrature(v);
    const double korn = (e.two_int_D2 + e.int_div2) / e.int_grad2;
    const double poin = e.int_grad2 / e.int_v2;
    res.min_korn = std::min(res.min_korn, korn);
    res.min_poincare = std::min(res.min_poincare, poin);
    t.rows.push_back({static_cast<double>(s), korn, poin});
  }
  write_csv(out_path(cfg, "korn.csv"), t);

  // Analytic sine-field row: v = (sin(pi z1) sin(pi z2), 0), gradients sampled
  // in closed form so the trapezoid quadrature is exact by orthogonality.
  {
    auto d1 = [](double z1, double z2) {
      return kPi * std::cos(kPi * z1) * std::sin(kPi * z2);
    };
    auto d2 = [](double z1, double z2) {
      return kPi * std::sin(kPi * z1) * std::cos(kPi * z2);
    };
    ScalarField two_d2 = ScalarField::sample(g, [&](double a, double b) {
      const double g11 = d1(a, b), g12 = d2(a, b);
      return 2.0 * g11 * g11 + g12 * g12;  // 2(d11^2 + 2*(g12/2)^2)
    });
    ScalarField grad2 = ScalarField::sample(g, [&](double a, double b) {
      const double g11 = d1(a, b), g12 = d2(a, b);
      return g11 * g11 + g12 * g12;
    });
    ScalarField div2 = ScalarField::sample(g, [&](double a, double b) {
      const double g11 = d1(a, b);
      return g11 * g11;
    });
    res.sine_two_D2 = integrate(two_d2);
    res.sine_grad2 = integrate(grad2);
    res.sine_div2 = integrate(div2);

    VectorField sine = VectorField::sample(
        g,
        [](double a, double b) { return std::sin(kPi * a) * std::sin(kPi * b); },
        [](double, double) { return 0.0; });
    fem::EnergyReport e = fem::energy_quadrature(sine);
    res.sine_korn_fe = (e.two_int_D2 + e.int_div2) / e.int_grad2;

    VectorField purex = VectorField::sample(
        g, [](double a, double) { return std::sin(kPi * a); },
        [](double, double) { return 0.0; });
    fem::EnergyReport ex = fem::energy_quadrature(purex);
    res.poincare_pure_x1_fe = ex.int_grad2 / ex.int_v2;
  }

  const double pi2 = kPi * kPi;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
  res.pass = res.min_korn >= 1.0 - 10.0 * h && res.min_poincare >= pi2 * (1.0 - 5.0 * h * h) &&
             rel(res.sine_two_D2, 3.0 * pi2 / 4.0) <= 1e-6 &&
             rel(res.sine_grad2, pi2 / 2.0) <= 1e-6 && rel(res.sine_div2, pi2 / 4.0) <= 1e-6;

  Table s;
  s.header = {"min_korn", "min_poincare", "sine_two_D2", "sine_grad2", "sine_div2",
              "sine_korn_fe", "poincare_pure_x1_fe"};
  s.rows.push_back({res.min_korn, res.min_poincare, res.sine_two_D2, res.sine_grad2,
                    res.sine_div2, res.sine_korn_fe, res.poincare_pure_x1_fe});
  write_csv(out_path(cfg, "korn_summary.csv"), s);
  return res;
}

ThresholdResult cmd_threshold(const RunConfig& cfg) {
  std::vector<double> mus = cfg.sweep.mu;
  if (mus.empty())
    mus = {1.0, 0.5, 0.2, 0.1, 1.0 / (2.0 * kPi * kPi), 0.02, 0.01};

  ThresholdResult res;
  res.pass = true;
  for (double mu : mus) {
    RunConfig c = cfg;
    c.params.mu = mu;
    ThresholdRow row;
    row.mu = mu;
    IterationLog log;
    try {
      BoundarySpec spec = make_boundary_spec(c.data, c.params);
      run_picard(spec, c.params, log);
      row.converged = log.converged;
    } catch (const SolverError& e) {
      row.error = SolverError::name(e.kind());
    }
    row.steps = static_cast<int>(log.steps.size());
    if (!log.steps.empty()) {
      row.final_ratio = log.steps.back().ratio;
      row.final_norm = final_norm_of(log);
    }
    if (mu >= 0.1 && !row.converged) res.pass = false;
    res.rows.push_back(row);
  }

  Table t;
  t.header = {"mu", "converged", "steps", "final_ratio", "final_norm"};
  for (const auto& r : res.rows)
    t.rows.push_back({r.mu, r.converged ? 1.0 : 0.0, static_cast<double>(r.steps),
                      r.final_ratio, r.final_norm});
  write_csv(out_path(cfg, "threshold.csv"), t);
  return res;
}

ScalingResult cmd_scaling(const RunConfig& cfg) {
  std::vector<double> amps = cfg.sweep.amplitude;
  if (amps.empty()) amps = {4e-2, 2e-2, 1e-2, 5e-3, 2.5e-3};

  ScalingResult res;
  for (double a : amps) {
    RunConfig c = cfg;
    c.data.u0_amplitude = a;
    c.data.rho_amplitude = a;
    c.data.b_amplitude = a;
    ScalingRow row;
    row.amplitude = a;
    IterationLog log;
    try {
      BoundarySpec spec = make_boundary_spec(c.data, c.params);
      Solution sol = run_picard(spec, c.params, log);
      row.converged = true;
      DiffeoReport dr = check_diffeo(sol.map, c.params);
      row.e_norm = dr.e_norm_w1p;
      row.min_jac = dr.min_jac;
    } catch (const SolverError&) {
      row.converged = false;
    }
    row.d0 = log.d0;
    row.final_norm = final_norm_of(log);
    res.rows.push_back(row);
  }

  for (size_t k = 1; k < res.rows.size(); ++k)
    res.norm_ratios.push_back(res.rows[k].final_norm / res.rows[k - 1].final_norm);

  res.pass = res.rows.size() >= 3;
  const size_t m = res.norm_ratios.size();
  for (size_t k = m >= 2 ? m - 2 : 0; k < m; ++k)
    res.pass = res.pass && res.norm_ratios[k] >= 0.425 && res.norm_ratios[k] <= 0.575;
  for (const auto& r : res.rows) res.pass = res.pass && r.converged;

  Table t;
  t.header = {"amplitude", "d0", "final_norm", "ratio", "e_norm_w1p", "min_jac"};
  for (size_t k = 0; k < res.rows.size(); ++k) {
    const auto& r = res.rows[k];
    t.rows.push_back({r.amplitude, r.d0, r.final_norm,
                      k == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : res.norm_ratios[k - 1],
                      r.e_norm, r.min_jac});
  }
  write_csv(out_path(cfg, "scaling.csv"), t);
  return res;
}

}  // namespace chflow
