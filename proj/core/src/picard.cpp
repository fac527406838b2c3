#include "chflow/picard.hpp"

#include <cmath>

#include "chflow/errors.hpp"
#include "chflow/fd.hpp"
#include "chflow/norms.hpp"
#include "chflow/quadrature.hpp"

namespace chflow {

namespace {

ScalarField shear_first_component(Grid g) {
  return ScalarField::sample(g, [](double, double z2) { return 1.0 + z2; });
}

// (c . grad) f with differenced gradients, componentwise.
VectorField convect(const VectorField& c, const VectorField& f) {
  ScalarField f1_1 = d1_fd(f.c1), f1_2 = d2_fd(f.c1);
  ScalarField f2_1 = d1_fd(f.c2), f2_2 = d2_fd(f.c2);
  VectorField out(f.grid());
  for (size_t k = 0; k < out.c1.data.size(); ++k) {
    out.c1.data[k] = c.c1.data[k] * f1_1.data[k] + c.c2.data[k] * f1_2.data[k];
    out.c2.data[k] = c.c1.data[k] * f2_1.data[k] + c.c2.data[k] * f2_2.data[k];
  }
  return out;
}

VectorField laplacian_fd(const VectorField& f) {
  VectorField out(f.grid());
  out.c1 = d1_fd(d1_fd(f.c1)) + d2_fd(d2_fd(f.c1));
  out.c2 = d1_fd(d1_fd(f.c2)) + d2_fd(d2_fd(f.c2));
  return out;
}

double interior_lp(const ScalarField& f, double p) {
  const Grid g = f.grid;
  double sum = 0.0;
  for (int j = 1; j < g.n; ++j)
    for (int i = 1; i < g.n; ++i) sum += std::pow(std::abs(f(i, j)), p);
  return std::pow(sum * g.h * g.h, 1.0 / p);
}

double interior_lp(const VectorField& f, double p) {
  const Grid g = f.grid();
  double sum = 0.0;
  for (int j = 1; j < g.n; ++j)
    for (int i = 1; i < g.n; ++i)
      sum += std::pow(std::hypot(f.c1(i, j), f.c2(i, j)), p);
  return std::pow(sum * g.h * g.h, 1.0 / p);
}

BoundaryProfile w_in_of(const BoundarySpec& spec) {
  BoundaryProfile w_in = spec.rho_in;
  for (double& x : w_in.v) x -= 1.0;
  return w_in;
}

LinearData make_linear_data(const IterationState& state, const BoundarySpec& spec,
                            const LiftResult& lift, const Params& params) {
  auto [f_t, g_t] = compute_sources(state, lift, params);
  auto [bb, bt] = compute_Btilde(state, spec, params);
  LinearData data;
  data.f = std::move(f_t);
  data.g = std::move(g_t);
  data.b_tilde_bottom = std::move(bb);
  data.b_tilde_top = std::move(bt);
  data.w_in = w_in_of(spec);
  data.map = state.map;
  data.v_bar = state.v + lift.u_tilde;
  data.params = params;
  return data;
}

}  // namespace

std::pair<ScalarField, VectorField> compute_sources(const IterationState& state,
                                                    const LiftResult& lift,
                                                    const Params& params) {
  const Grid g = params.grid();
  const VectorField& ut = lift.u_tilde;
  const VectorField vpu = state.v + ut;
  const ScalarField ubar_z = shear_first_component(g);

  // F = -div u~ - w div(v + u~)
  ScalarField div_ut = div_fd(ut);
  ScalarField div_vpu = div_fd(vpu);
  ScalarField f_src(g);
  for (size_t k = 0; k < f_src.data.size(); ++k)
    f_src.data[k] = -div_ut.data[k] - state.w.data[k] * div_vpu.data[k];

  ScalarField f_tilde = f_src - r_div(state.v, state.map);

  // G, term by term.
  VectorField carrier = vpu;  // v + u~ + U0
  carrier.c1 += ubar_z;
  VectorField conv_ut = convect(carrier, ut);
  VectorField conv_v = convect(vpu, state.v);
  ScalarField d1v1 = d1_fd(state.v.c1), d1v2 = d1_fd(state.v.c2);
  VectorField lap_ut = laplacian_fd(ut);
  VectorField graddiv_ut = grad_fd(div_ut);
  ScalarField d2w = d2_fd(state.w);

  const double gamma = params.gamma;
  VectorField g_src(g);
  for (size_t k = 0; k < g_src.c1.data.size(); ++k) {
    const double w = state.w.data[k];
    if (w + 1.0 <= 0.0)
      throw SolverError(ErrorKind::PressureDomain, "density iterate left the physical regime");
    const double wp1 = w + 1.0;
    const double ub = ubar_z.data[k];
    const double pressure_coef = gamma * (std::pow(wp1, gamma - 1.0) - 1.0);

    g_src.c1.data[k] = -wp1 * conv_ut.c1.data[k] - wp1 * conv_v.c1.data[k] -
                       w * ub * d1v1.data[k] - ut.c2.data[k] - w * vpu.c2.data[k] +
                       params.mu * lap_ut.c1.data[k] +
                       (params.mu + params.nu) * graddiv_ut.c1.data[k] +
                       pressure_coef * state.dz1_w.data[k];
    g_src.c2.data[k] = -wp1 * conv_ut.c2.data[k] - wp1 * conv_v.c2.data[k] -
                       w * ub * d1v2.data[k] + params.mu * lap_ut.c2.data[k] +
                       (params.mu + params.nu) * graddiv_ut.c2.data[k] +
                       pressure_coef * d2w.data[k];
  }

  // Corrections between x- and z-coordinate operators.
  const FlowMap& map = state.map;
  ScalarField ubar_psi = ubar_composed(map);
  VectorField rd1_v{r_d1(state.v.c1, map), r_d1(state.v.c2, map)};
  VectorField shear_nodal{ubar_z, ScalarField(g)};
  VectorField r_u0_1 = r_grad(shear_nodal.c1, map);  // row of R(U0, grad) for component 1
  VectorField r_w = r_grad(state.w, map);
  VectorField r_lap = r_laplacian(state.v, map);
  VectorField r_gd = r_grad_div(state.v, map);

  VectorField g_tilde = g_src;
  for (size_t k = 0; k < g_tilde.c1.data.size(); ++k) {
    const double ub = ubar_psi.data[k];
    const double v_dot_ru0 =
        state.v.c1.data[k] * r_u0_1.c1.data[k] + state.v.c2.data[k] * r_u0_1.c2.data[k];
    g_tilde.c1.data[k] += -ub * rd1_v.c1.data[k] - v_dot_ru0 - gamma * r_w.c1.data[k] +
                          params.mu * r_lap.c1.data[k] +
                          (params.mu + params.nu) * r_gd.c1.data[k];
    g_tilde.c2.data[k] += -ub * rd1_v.c2.data[k] - gamma * r_w.c2.data[k] +
                          params.mu * r_lap.c2.data[k] +
                          (params.mu + params.nu) * r_gd.c2.data[k];
  }

  return {std::move(f_tilde), std::move(g_tilde)};
}

std::pair<BoundaryProfile, BoundaryProfile> compute_Btilde(const IterationState& state,
                                                           const BoundarySpec& spec,
                                                           const Params& params) {
  const int n = params.n;
  auto [btb, btt] = compute_btilde(params);
  SymTensorField rsym = r_sym_grad(state.v, state.map);

  BoundaryProfile bottom(n), top(n);
  for (int i = 0; i <= n; ++i) {
    // bottom n = (0,-1): n.R.tau = -R12; top n = (0,1): n.R.tau = R12
    bottom[i] = (spec.b_bottom[i] - btb[i]) + 2.0 * params.mu * rsym.t12(i, 0);
    top[i] = (spec.b_top[i] - btt[i]) - 2.0 * params.mu * rsym.t12(i, n);
  }
  return {std::move(bottom), std::move(top)};
}

IterationState initial_state(const LiftResult& lift, const Params& params) {
  const Grid g = params.grid();
  IterationState st;
  st.v = VectorField(g);
  st.w = ScalarField(g);
  st.dz1_w = ScalarField(g);
  st.map = build_flowmap(tilde_v(lift.u_tilde, params), params);
  return st;
}

IterationState picard_step(const IterationState& state, const BoundarySpec& spec,
                           const LiftResult& lift, const Params& params, StepStats* stats) {
  LinearData data = make_linear_data(state, spec, lift, params);
  LinearSolution sol = solve_linear_system(data);
  if (stats) {
    stats->inner_iters = sol.inner_iterations;
    stats->inner_residual = sol.inner_residual;
  }

  TransportCoeff a = coeff_a(state.map, data.v_bar, params);
  ScalarField dz1_w = data.f - div_fd(sol.v);
  for (size_t k = 0; k < dz1_w.data.size(); ++k) dz1_w.data[k] /= a.a.data[k];

  IterationState next;
  next.v = std::move(sol.v);
  next.w = std::move(sol.w);
  next.dz1_w = std::move(dz1_w);
  next.map = build_flowmap(tilde_v(next.v + lift.u_tilde, params), params);
  return next;
}

Solution run_picard(const BoundarySpec& spec, const Params& params, IterationLog& log) {
  params.validate();
  spec.validate(params);
  log = IterationLog{};
  log.d0 = compute_D0(spec, params);

  try {
    LiftResult lift = solve_lame_lift(spec, params);
    IterationState state = initial_state(lift, params);

    double prev_delta = std::numeric_limits<double>::quiet_NaN();
    int ratio_streak = 0;

    for (int step = 1; step <= params.max_outer; ++step) {
      StepStats stats;
      IterationState next = picard_step(state, spec, lift, params, &stats);

      const double delta = norm(next.v - state.v, NormKind::W2pDiscrete, params.p_norm) +
                           norm(next.w - state.w, NormKind::W1p, params.p_norm);
      StepRecord rec;
      rec.step = step;
      rec.norm_v_h1 = norm(next.v, NormKind::H1);
      rec.norm_v_w2p = norm(next.v, NormKind::W2pDiscrete, params.p_norm);
      rec.norm_w_w1p = norm(next.w, NormKind::W1p, params.p_norm);
      rec.delta = delta;
      if (step >= 2) rec.ratio = delta / prev_delta;
      DiffeoReport dr = check_diffeo(next.map, params);
      rec.min_jac = dr.min_jac;
      rec.e_norm = dr.e_norm_w1p;
      rec.inner_iters = stats.inner_iters;
      rec.inner_residual = stats.inner_residual;
      log.steps.push_back(rec);

      state = std::move(next);

      if (delta < params.tol_outer) {
        log.converged = true;
        Solution out;
        out.v = std::move(state.v);
        out.w = std::move(state.w);
        out.dz1_w = std::move(state.dz1_w);
        out.map = std::move(state.map);
        out.lift = std::move(lift);
        out.params = params;
        return out;
      }

      if (step >= 2 && rec.ratio > 1.0) {
        if (++ratio_streak >= 3)
          throw SolverError(ErrorKind::OuterDivergence,
                            "increment ratios exceeded 1 for 3 consecutive steps");
      } else {
        ratio_streak = 0;
      }
      prev_delta = delta;
    }
    throw SolverError(ErrorKind::OuterDivergence, "outer iteration cap reached");
  } catch (const SolverError& e) {
    log.error = SolverError::name(e.kind());
    throw;
  }
}

XFields reconstruct_x(const Solution& sol) {
  const Grid g = sol.params.grid();
  const double tol = g.h * g.h * g.h;
  VectorField vpu = sol.v + sol.lift.u_tilde;

  XFields out{VectorField(g), ScalarField(g, 1.0)};
  for (int i = 0; i <= g.n; ++i) {
    const double x1 = g.z1(i);
    for (int j = 0; j <= g.n; ++j) {
      const double x2 = g.z2(j);
      const double z2s = invert_psi2_column(sol.map, i, x2, tol);
      out.u.c1(i, j) = vpu.c1.eval(x1, z2s) + 1.0 + x2;
      out.u.c2(i, j) = vpu.c2.eval(x1, z2s);
      out.rho(i, j) = 1.0 + sol.w.eval(x1, z2s);
    }
  }
  return out;
}

ResidualReport nonlinear_residual(const Solution& sol, const BoundarySpec& spec,
                                  const Params& params) {
  const Grid g = params.grid();
  const double p = params.p_norm;
  ResidualReport rep;

  IterationState state{sol.v, sol.w, sol.dz1_w, sol.map};
  LinearData data = make_linear_data(state, spec, sol.lift, params);
  TransportCoeff a = coeff_a(sol.map, data.v_bar, params);

  // Fixed-point re-evaluation residuals.
  ScalarField w_re = transport_S(data.f - div_fd(sol.v), data.w_in, a);
  rep.mass_fixed_point = (sol.w - w_re).max_abs();

  MomentumSystem sys(data);
  Eigen::VectorXd rhs = sys.rhs(sol.w);
  Eigen::VectorXd vfree = sys.fem_solver().dofs().restrict_free(sol.v);
  Eigen::VectorXd alg = sys.fem_solver().matrix() * vfree - rhs;
  rep.momentum_weak = alg.cwiseAbs().maxCoeff() / (1.0 + rhs.cwiseAbs().maxCoeff());
  rep.combined = rep.mass_fixed_point + rep.momentum_weak;

  // Strong-form residuals in z (differencing floor O(h^2)).
  {
    ScalarField mass = div_fd(sol.v) - data.f;
    ScalarField d1w = d1_fd(sol.w);
    for (size_t k = 0; k < mass.data.size(); ++k) mass.data[k] += a.a.data[k] * d1w.data[k];
    rep.z_mass_lp = interior_lp(mass, p);

    ScalarField ubar_psi = ubar_composed(sol.map);
    VectorField lap = laplacian_fd(sol.v);
    VectorField gd = grad_fd(div_fd(sol.v));
    ScalarField d1v1 = d1_fd(sol.v.c1), d1v2 = d1_fd(sol.v.c2);
    VectorField gw = grad_fd(sol.w);
    VectorField mom(g);
    for (size_t k = 0; k < mom.c1.data.size(); ++k) {
      mom.c1.data[k] = ubar_psi.data[k] * d1v1.data[k] + sol.v.c2.data[k] +
                       params.gamma * gw.c1.data[k] - params.mu * lap.c1.data[k] -
                       (params.mu + params.nu) * gd.c1.data[k] - data.g.c1.data[k];
      mom.c2.data[k] = ubar_psi.data[k] * d1v2.data[k] + params.gamma * gw.c2.data[k] -
                       params.mu * lap.c2.data[k] -
                       (params.mu + params.nu) * gd.c2.data[k] - data.g.c2.data[k];
    }
    rep.z_momentum_lp = interior_lp(mom, p);
  }

  // Strong-form residuals of the original system after reconstruction.
  {
    XFields xf = reconstruct_x(sol);
    ScalarField m1(g), m2(g);
    for (size_t k = 0; k < m1.data.size(); ++k) {
      m1.data[k] = xf.rho.data[k] * xf.u.c1.data[k];
      m2.data[k] = xf.rho.data[k] * xf.u.c2.data[k];
    }
    ScalarField mass = d1_fd(m1) + d2_fd(m2);
    rep.x_mass_lp = interior_lp(mass, p);

    VectorField lap = laplacian_fd(xf.u);
    ScalarField divu = div_fd(xf.u);
    VectorField gdiv = grad_fd(divu);
    ScalarField pressure(g);
    for (size_t k = 0; k < pressure.data.size(); ++k)
      pressure.data[k] = std::pow(xf.rho.data[k], params.gamma);
    VectorField gp = grad_fd(pressure);

    VectorField mom(g);
    for (int comp = 0; comp < 2; ++comp) {
      ScalarField& uc = comp == 0 ? xf.u.c1 : xf.u.c2;
      ScalarField flux1(g), flux2(g);
      for (size_t k = 0; k < flux1.data.size(); ++k) {
        flux1.data[k] = m1.data[k] * uc.data[k];
        flux2.data[k] = m2.data[k] * uc.data[k];
      }
      ScalarField div_flux = d1_fd(flux1) + d2_fd(flux2);
      ScalarField& target = comp == 0 ? mom.c1 : mom.c2;
      const ScalarField& lapc = comp == 0 ? lap.c1 : lap.c2;
      const ScalarField& gdc = comp == 0 ? gdiv.c1 : gdiv.c2;
      const ScalarField& gpc = comp == 0 ? gp.c1 : gp.c2;
      for (size_t k = 0; k < target.data.size(); ++k)
        target.data[k] = div_flux.data[k] - params.mu * lapc.data[k] -
                         (params.mu + params.nu) * gdc.data[k] + gpc.data[k];
    }
    rep.x_momentum_lp = interior_lp(mom, p);

    ScalarField d2u1 = d2_fd(xf.u.c1);
    ScalarField d1u2 = d1_fd(xf.u.c2);
    double wall = 0.0;
    for (int i = 0; i <= g.n; ++i) {
      const double sym_b = d2u1(i, 0) + d1u2(i, 0);
      const double sym_t = d2u1(i, g.n) + d1u2(i, g.n);
      wall = std::max(wall, std::abs(-params.mu * sym_b + params.alpha * xf.u.c1(i, 0) -
                                     spec.b_bottom[i]));
      wall = std::max(wall, std::abs(params.mu * sym_t + params.alpha * xf.u.c1(i, g.n) -
                                     spec.b_top[i]));
    }
    rep.wall_navier_sup = wall;
  }

  return rep;
}

}  // namespace chflow
