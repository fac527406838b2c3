#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "chflow/config.hpp"
#include "chflow/errors.hpp"
#include "chflow/fd.hpp"
#include "chflow/norms.hpp"
#include "chflow/picard.hpp"

using namespace chflow;

namespace {
constexpr double kPi = std::numbers::pi;

DataConfig reference_data(double amp) {
  DataConfig d;
  d.u0_amplitude = amp;
  d.rho_amplitude = amp;
  d.b_amplitude = amp;
  return d;
}

BoundarySpec zero_spec(const Params& p) { return make_boundary_spec(reference_data(0.0), p); }

FlowMap exp_map(Grid g, double eps) {
  ScalarField psi2 =
      ScalarField::sample(g, [=](double z1, double z2) { return z2 * std::exp(eps * z1); });
  ScalarField e21 = ScalarField::sample(
      g, [=](double z1, double z2) { return eps * z2 * std::exp(eps * z1); });
  ScalarField e22 =
      ScalarField::sample(g, [=](double z1, double) { return std::exp(eps * z1) - 1.0; });
  return flowmap_from_fields(psi2, e21, e22);
}

}  // namespace

TEST_CASE("compute_sources: zero state on the identity map") {
  Params p;
  p.n = 16;
  LiftResult lift;
  lift.u_tilde = VectorField(p.grid());
  IterationState st = initial_state(lift, p);
  auto [ft, gt] = compute_sources(st, lift, p);
  CHECK(ft.max_abs() == 0.0);
  CHECK(gt.max_abs() == 0.0);
}

TEST_CASE("compute_sources: pure-lift state matches the direct formula") {
  Params p;
  p.n = 16;
  const Grid g = p.grid();
  DataConfig d;
  d.u0_amplitude = 0.01;
  BoundarySpec spec = make_boundary_spec(d, p);
  LiftResult lift = solve_lame_lift(spec, p);
  IterationState st = initial_state(lift, p);
  auto [ft, gt] = compute_sources(st, lift, p);

  // F~ = -div u~ (the correction acts on v = 0), assembled independently
  ScalarField f_expect = div_fd(lift.u_tilde);
  f_expect *= -1.0;
  CHECK((ft - f_expect).max_abs() <= 1e-13);

  // G~ = -(u~+U0).grad u~ - (u~_2, 0) + mu lap u~ + (mu+nu) grad div u~
  const VectorField& ut = lift.u_tilde;
  ScalarField d1u1 = d1_fd(ut.c1), d2u1 = d2_fd(ut.c1);
  ScalarField d1u2 = d1_fd(ut.c2), d2u2 = d2_fd(ut.c2);
  ScalarField lap1 = d1_fd(d1_fd(ut.c1)) + d2_fd(d2_fd(ut.c1));
  ScalarField lap2 = d1_fd(d1_fd(ut.c2)) + d2_fd(d2_fd(ut.c2));
  VectorField gd = grad_fd(div_fd(ut));
  VectorField g_expect(g);
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const double c1 = ut.c1(i, j) + 1.0 + g.z2(j);
      const double c2 = ut.c2(i, j);
      g_expect.c1(i, j) = -(c1 * d1u1(i, j) + c2 * d2u1(i, j)) - ut.c2(i, j) +
                          p.mu * lap1(i, j) + (p.mu + p.nu) * gd.c1(i, j);
      g_expect.c2(i, j) = -(c1 * d1u2(i, j) + c2 * d2u2(i, j)) + p.mu * lap2(i, j) +
                          (p.mu + p.nu) * gd.c2(i, j);
    }
  }
  CHECK((gt - g_expect).max_abs() <= 1e-12);
}

TEST_CASE("compute_sources: halving the state nearly halves the source norms") {
  Params p;
  p.n = 24;
  const Grid g = p.grid();
  DataConfig d;
  d.u0_amplitude = 0.01;
  d.rho_amplitude = 0.01;
  BoundarySpec spec = make_boundary_spec(d, p);
  LiftResult lift = solve_lame_lift(spec, p);

  auto make_state = [&](double s) {
    IterationState st;
    st.v = VectorField::sample(
        g, [=](double a, double b) { return s * std::sin(kPi * a) * std::cos(kPi * b); },
        [=](double a, double b) { return s * std::sin(kPi * a) * std::sin(kPi * b); });
    st.w = ScalarField::sample(
        g, [=](double a, double b) { return s * a * std::sin(kPi * b); });
    st.dz1_w = ScalarField::sample(g, [=](double, double b) { return s * std::sin(kPi * b); });
    LiftResult scaled = lift;
    scaled.u_tilde *= s / 0.01;
    st.map = build_flowmap(tilde_v(st.v + scaled.u_tilde, p), p);
    return st;
  };

  LiftResult lift_full = lift;
  LiftResult lift_half = lift;
  lift_half.u_tilde *= 0.5;
  IterationState full = make_state(0.01);
  IterationState half = make_state(0.005);
  auto [ff, gf] = compute_sources(full, lift_full, p);
  auto [fh, gh] = compute_sources(half, lift_half, p);
  const double nf =
      norm(ff, NormKind::W1p, p.p_norm) + norm(gf, NormKind::Lp, p.p_norm);
  const double nh =
      norm(fh, NormKind::W1p, p.p_norm) + norm(gh, NormKind::Lp, p.p_norm);
  CHECK(nf / nh >= 1.9);
  CHECK(nf / nh <= 2.1);
}

TEST_CASE("compute_Btilde: identity map and zero perturbation") {
  Params p;
  p.n = 16;
  const Grid g = p.grid();
  BoundarySpec spec = zero_spec(p);
  // add a wall perturbation
  for (int i = 0; i <= p.n; ++i)
    spec.b_bottom[i] += 0.02 * std::sin(kPi * g.z1(i)) * envelope(g.z1(i), 0.125);

  IterationState st;
  st.v = VectorField(g);
  st.w = ScalarField(g);
  st.dz1_w = ScalarField(g);
  st.map = FlowMap::identity(g);
  auto [bb, bt] = compute_Btilde(st, spec, p);
  auto [btb, btt] = compute_btilde(p);
  for (int i = 0; i <= p.n; ++i) {
    CHECK(bb[i] == doctest::Approx(spec.b_bottom[i] - btb[i]).epsilon(1e-13));
    CHECK(bt[i] == doctest::Approx(spec.b_top[i] - btt[i]).epsilon(1e-13));
  }

  BoundarySpec clean = zero_spec(p);
  auto [b0, t0] = compute_Btilde(st, clean, p);
  CHECK(b0.max_abs() == 0.0);
  CHECK(t0.max_abs() == 0.0);
}

TEST_CASE("compute_Btilde: synthetic exponential map closed form") {
  Params p;
  p.n = 32;
  const Grid g = p.grid();
  const double eps = 0.3;
  IterationState st;
  st.v = VectorField{ScalarField::sample(g, [](double, double z2) { return z2 * z2; }),
                     ScalarField(g)};
  st.w = ScalarField(g);
  st.dz1_w = ScalarField(g);
  st.map = exp_map(g, eps);
  BoundarySpec spec = zero_spec(p);
  auto [bb, bt] = compute_Btilde(st, spec, p);
  for (int i = 0; i <= p.n; ++i) {
    // bottom entry vanishes (z2 = 0); top is -2 mu (exp(-eps z1) - 1)
    CHECK(std::abs(bb[i]) <= 1e-12);
    const double expect = -2.0 * p.mu * (std::exp(-eps * g.z1(i)) - 1.0);
    CHECK(bt[i] == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("picard: zero data is an exact fixed point") {
  Params p;
  p.n = 16;
  BoundarySpec spec = zero_spec(p);
  IterationLog log;
  Solution sol = run_picard(spec, p, log);
  CHECK(log.converged);
  CHECK(log.steps.size() == 1);
  CHECK(log.d0 == 0.0);
  CHECK(sol.v.max_abs() == 0.0);
  CHECK(sol.w.max_abs() == 0.0);

  XFields xf = reconstruct_x(sol);
  const Grid g = p.grid();
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i) {
      CHECK(xf.u.c1(i, j) == doctest::Approx(1.0 + g.z2(j)).epsilon(1e-14));
      CHECK(xf.u.c2(i, j) == 0.0);
      CHECK(xf.rho(i, j) == 1.0);
    }

  ResidualReport rep = nonlinear_residual(sol, spec, p);
  CHECK(rep.combined <= 1e-12);
  CHECK(rep.z_momentum_lp <= 1e-12);
  CHECK(rep.x_momentum_lp <= 1e-12);
  CHECK(rep.wall_navier_sup <= 1e-12);
}

TEST_CASE("picard: first step bounded by the lift size") {
  Params p;
  p.n = 24;
  DataConfig d;
  d.u0_amplitude = 0.01;  // velocity data only, rho_in = 1
  BoundarySpec spec = make_boundary_spec(d, p);
  LiftResult lift = solve_lame_lift(spec, p);
  IterationState st = initial_state(lift, p);
  IterationState first = picard_step(st, spec, lift, p);
  const double vnorm = norm(first.v, NormKind::W2pDiscrete, p.p_norm);
  CHECK(vnorm > 0.0);
  CHECK(vnorm <= 50.0 * lift.w2p_norm);
}

TEST_CASE("picard: reference run converges with contraction") {
  Params p;
  p.n = 32;
  BoundarySpec spec = make_boundary_spec(reference_data(0.01), p);
  IterationLog log;
  Solution sol = run_picard(spec, p, log);
  REQUIRE(log.converged);
  CHECK(log.d0 > 0.0);

  // all recorded increment ratios below one
  int recorded = 0;
  for (const auto& s : log.steps) {
    if (!std::isnan(s.ratio)) {
      CHECK(s.ratio < 1.0);
      ++recorded;
    }
  }
  CHECK(recorded >= 2);

  // deltas strictly decreasing
  for (size_t k = 1; k < log.steps.size(); ++k)
    CHECK(log.steps[k].delta < log.steps[k - 1].delta);

  // self-mapping: iterates stay inside twice the first-step ball
  const double ball =
      2.0 * (log.steps.front().norm_v_w2p + log.steps.front().norm_w_w1p) + 1e-12;
  for (const auto& s : log.steps) CHECK(s.norm_v_w2p + s.norm_w_w1p <= ball);

  // boundary exactness of the converged iterate
  const Grid g = p.grid();
  for (int j = 0; j <= g.n; ++j) {
    CHECK(sol.w(0, j) == doctest::Approx(spec.rho_in[j] - 1.0).epsilon(1e-14));
    CHECK(sol.v.c1(0, j) == 0.0);
    CHECK(sol.v.c2(g.n, j) == 0.0);
  }
  for (int i = 0; i <= g.n; ++i) {
    CHECK(sol.v.c2(i, 0) == 0.0);
    CHECK(sol.v.c2(i, g.n) == 0.0);
  }

  // residual re-evaluation at the fixed point
  ResidualReport rep = nonlinear_residual(sol, spec, p);
  CHECK(rep.combined < 1e-6);

  // fixed-point consistency: one extra step moves the iterate < 2 tol_outer
  IterationState st{sol.v, sol.w, sol.dz1_w, sol.map};
  IterationState extra = picard_step(st, spec, sol.lift, p);
  const double move = norm(extra.v - sol.v, NormKind::W2pDiscrete, p.p_norm) +
                      norm(extra.w - sol.w, NormKind::W1p, p.p_norm);
  CHECK(move < 2.0 * p.tol_outer);

  // diffeomorphism control at the solution
  DiffeoReport dr = check_diffeo(sol.map, p);
  CHECK(dr.min_jac >= 0.9);
  CHECK(dr.e_norm_w1p <= 0.1);
}

TEST_CASE("picard: dz1_w monitor stays bounded across iterations") {
  Params p;
  p.n = 16;
  BoundarySpec spec = make_boundary_spec(reference_data(0.01), p);
  LiftResult lift = solve_lame_lift(spec, p);
  IterationState st = initial_state(lift, p);
  std::vector<double> norms;
  for (int k = 0; k < 4; ++k) {
    st = picard_step(st, spec, lift, p);
    norms.push_back(norm(st.dz1_w, NormKind::W1p, p.p_norm));
  }
  const double first = norms.front();
  CHECK(first > 0.0);
  for (double v : norms) CHECK(v <= 2.0 * first + 1e-12);
}

TEST_CASE("picard: contraction ratios decrease with the data size") {
  auto max_ratio = [](double amp) {
    Params p;
    p.n = 24;
    BoundarySpec spec = make_boundary_spec(reference_data(amp), p);
    IterationLog log;
    run_picard(spec, p, log);
    double worst = 0.0;
    for (const auto& s : log.steps)
      if (!std::isnan(s.ratio)) worst = std::max(worst, s.ratio);
    return worst;
  };
  const double big = max_ratio(0.02);
  const double small = max_ratio(0.005);
  CHECK(small <= big + 0.02);
}

TEST_CASE("picard: outer cap raises OuterDivergence with the log retained") {
  Params p;
  p.n = 16;
  p.max_outer = 2;
  p.tol_outer = 1e-14;  // unreachable in two steps
  BoundarySpec spec = make_boundary_spec(reference_data(0.01), p);
  IterationLog log;
  try {
    run_picard(spec, p, log);
    FAIL("expected OuterDivergence");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::OuterDivergence);
  }
  CHECK(log.steps.size() == 2);
  CHECK_FALSE(log.converged);
  CHECK(log.error == "OuterDivergence");
}

TEST_CASE("picard: smallness transfer of the final norm") {
  auto final_norm = [](double amp) {
    Params p;
    p.n = 24;
    BoundarySpec spec = make_boundary_spec(reference_data(amp), p);
    IterationLog log;
    run_picard(spec, p, log);
    return log.steps.back().norm_v_w2p + log.steps.back().norm_w_w1p;
  };
  const double n2 = final_norm(0.02);
  const double n1 = final_norm(0.01);
  CHECK(n1 / n2 >= 0.5 - 0.075);
  CHECK(n1 / n2 <= 0.5 + 0.075);
}

TEST_CASE("picard: nonlinearity gap scales quadratically in the amplitude") {
  auto gap = [](double amp) {
    Params p;
    p.n = 32;
    BoundarySpec spec = make_boundary_spec(reference_data(amp), p);
    IterationLog log;
    Solution sol = run_picard(spec, p, log);
    LiftResult lift = solve_lame_lift(spec, p);
    IterationState st = initial_state(lift, p);
    IterationState first = picard_step(st, spec, lift, p);
    return norm(sol.v - first.v, NormKind::W2pDiscrete, p.p_norm) +
           norm(sol.w - first.w, NormKind::W1p, p.p_norm);
  };
  const double g2 = gap(0.02);
  const double g1 = gap(0.01);
  CHECK(g2 / g1 >= 3.2);
  CHECK(g2 / g1 <= 4.8);
}

TEST_CASE("picard: strong-form residual floor shrinks under refinement") {
  auto strong = [](int n) {
    Params p;
    p.n = n;
    BoundarySpec spec = make_boundary_spec(reference_data(0.01), p);
    IterationLog log;
    Solution sol = run_picard(spec, p, log);
    return nonlinear_residual(sol, spec, p);
  };
  ResidualReport r32 = strong(32);
  ResidualReport r64 = strong(64);
  CHECK(r32.z_momentum_lp / r64.z_momentum_lp >= 1.7);
  CHECK(r32.z_mass_lp / r64.z_mass_lp >= 1.7);
  CHECK(r32.x_momentum_lp / r64.x_momentum_lp >= 1.7);
  CHECK(r64.combined < 1e-6);
}

TEST_CASE("reconstruct_x: synthetic map composition oracle") {
  Params p;
  p.n = 32;
  const Grid g = p.grid();
  // wall-tangent quadratic map: psi2 = z2 (1 + a z1 (1 - z2)) maps onto [0,1]
  const double a = 0.3;
  ScalarField psi2 = ScalarField::sample(
      g, [=](double z1, double z2) { return z2 * (1.0 + a * z1 * (1.0 - z2)); });
  ScalarField e21 = ScalarField::sample(
      g, [=](double, double z2) { return a * z2 * (1.0 - z2); });
  ScalarField e22 = ScalarField::sample(
      g, [=](double z1, double z2) { return a * z1 * (1.0 - 2.0 * z2); });
  Solution sol;
  sol.params = p;
  sol.map = flowmap_from_fields(psi2, e21, e22);
  sol.v = VectorField::sample(
      g, [](double z1, double z2) { return std::sin(kPi * z1) * z2; },
      [](double z1, double z2) { return 0.5 * z1 * z2 * z2; });
  sol.w = ScalarField::sample(g, [](double z1, double z2) { return z1 + 0.3 * z2; });
  sol.dz1_w = ScalarField(g);
  sol.lift.u_tilde = VectorField(g);

  XFields xf = reconstruct_x(sol);
  double err = 0.0;
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const double x1 = g.z1(i), x2 = g.z2(j);
      const double q = 1.0 + a * x1;
      const double zstar =
          a * x1 > 0.0 ? (q - std::sqrt(q * q - 4.0 * a * x1 * x2)) / (2.0 * a * x1) : x2;
      const double u1 = std::sin(kPi * x1) * zstar + 1.0 + x2;
      const double rho = 1.0 + (x1 + 0.3 * zstar);
      err = std::max(err, std::abs(xf.u.c1(i, j) - u1));
      err = std::max(err, std::abs(xf.rho(i, j) - rho));
    }
  }
  CHECK(err <= 5.0 * g.h * g.h);
}

TEST_CASE("compute_sources guards the pressure domain") {
  Params p;
  p.n = 8;
  const Grid g = p.grid();
  LiftResult lift;
  lift.u_tilde = VectorField(g);
  IterationState st = initial_state(lift, p);
  st.w = ScalarField(g, -1.5);  // density iterate left the physical regime
  try {
    compute_sources(st, lift, p);
    FAIL("expected PressureDomain");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::PressureDomain);
  }
}

TEST_CASE("solver error classes carry the documented exit codes") {
  CHECK(SolverError::exit_code(ErrorKind::DegenerateFlow) == 10);
  CHECK(SolverError::exit_code(ErrorKind::DiffeoFailure) == 11);
  CHECK(SolverError::exit_code(ErrorKind::InversionFailure) == 11);
  CHECK(SolverError::exit_code(ErrorKind::InnerDivergence) == 12);
  CHECK(SolverError::exit_code(ErrorKind::OuterDivergence) == 13);
  CHECK(SolverError::exit_code(ErrorKind::PressureDomain) == 14);
  CHECK(SolverError::exit_code(ErrorKind::Config) == 2);
}
