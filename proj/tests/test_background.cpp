#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chflow/background.hpp"
#include "chflow/config.hpp"
#include "chflow/errors.hpp"
#include "chflow/fem.hpp"
#include "chflow/norms.hpp"

using namespace chflow;

namespace {
constexpr double kPi = std::numbers::pi;

// Boundary data equal to the shear data (zero perturbation).
BoundarySpec shear_spec(const Params& p) {
  BoundarySpec spec;
  spec.u0_in = shear_trace(p.n);
  spec.u0_out = shear_trace(p.n);
  spec.rho_in = BoundaryProfile(p.n, 1.0);
  auto [bb, bt] = compute_btilde(p);
  spec.b_bottom = bb;
  spec.b_top = bt;
  return spec;
}

// Corner-safe perturbation shape.
double enveloped_sine(double t, int k) {
  return std::sin(k * kPi * t) * envelope(t, 0.125);
}
}  // namespace

TEST_CASE("eval_shear") {
  auto [u0, rho0] = eval_shear(0.0, 0.0);
  CHECK(u0[0] == 1.0);
  CHECK(u0[1] == 0.0);
  CHECK(rho0 == 1.0);
  auto [u1, rho1] = eval_shear(0.5, 1.0);
  CHECK(u1[0] == 2.0);
  CHECK(rho1 == 1.0);
}

TEST_CASE("compute_btilde closed forms") {
  Params p;
  p.mu = 1.0;
  p.alpha = 0.0;
  auto [b0, t0] = compute_btilde(p);
  CHECK(b0[3] == doctest::Approx(-1.0));
  CHECK(t0[3] == doctest::Approx(1.0));

  p.alpha = 1.0;
  auto [b1, t1] = compute_btilde(p);
  CHECK(b1[0] == doctest::Approx(0.0));
  CHECK(t1[0] == doctest::Approx(3.0));

  // antisymmetry under the normal flip when alpha = 0
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(0.1, 5.0);
  for (int k = 0; k < 5; ++k) {
    Params q;
    q.mu = uni(rng);
    q.alpha = 0.0;
    auto [bb, bt] = compute_btilde(q);
    CHECK(bt[7] == doctest::Approx(-bb[7]));
    CHECK(bt[7] == doctest::Approx(q.mu));
  }
}

TEST_CASE("compute_D0: zero data, homogeneity, closed-form rho term") {
  Params p;
  p.n = 64;
  p.p_norm = 4.0;
  BoundarySpec spec = shear_spec(p);
  CHECK(compute_D0(spec, p) == 0.0);

  // scaling all perturbations doubles D0 exactly
  BoundarySpec pert = spec;
  for (int j = 0; j <= p.n; ++j) {
    const double t = static_cast<double>(j) / p.n;
    pert.u0_in.c1[j] += 0.01 * enveloped_sine(t, 1);
    pert.u0_in.c2[j] += 0.005 * enveloped_sine(t, 2);
    pert.rho_in[j] += 0.02 * enveloped_sine(t, 1);
    pert.b_bottom[j] += 0.01 * enveloped_sine(t, 1);
  }
  BoundarySpec pert2 = spec;
  for (int j = 0; j <= p.n; ++j) {
    pert2.u0_in.c1[j] += 2.0 * (pert.u0_in.c1[j] - spec.u0_in.c1[j]);
    pert2.u0_in.c2[j] += 2.0 * (pert.u0_in.c2[j] - spec.u0_in.c2[j]);
    pert2.rho_in[j] += 2.0 * (pert.rho_in[j] - spec.rho_in[j]);
    pert2.b_bottom[j] += 2.0 * (pert.b_bottom[j] - spec.b_bottom[j]);
  }
  CHECK(compute_D0(pert2, p) == doctest::Approx(2.0 * compute_D0(pert, p)).epsilon(1e-12));

  // rho_in = 1 + eps sin(pi t), everything else unperturbed:
  // D0 = eps * (1 + pi) * (3/8)^{1/4}
  const double eps = 0.03;
  BoundarySpec rho_only = spec;
  for (int j = 0; j <= p.n; ++j)
    rho_only.rho_in[j] = 1.0 + eps * std::sin(kPi * static_cast<double>(j) / p.n);
  const double expected = eps * (1.0 + kPi) * std::pow(3.0 / 8.0, 0.25);
  CHECK(std::abs(compute_D0(rho_only, p) - expected) <= 1.0 / p.n);
}

TEST_CASE("compute_D0: subadditive over stacked perturbations") {
  Params p;
  p.n = 32;
  BoundarySpec base = shear_spec(p);
  BoundarySpec pa = base, pb = base, pab = base;
  for (int j = 0; j <= p.n; ++j) {
    const double t = static_cast<double>(j) / p.n;
    const double da = 0.01 * enveloped_sine(t, 1);
    const double db = 0.02 * enveloped_sine(t, 3);
    pa.u0_in.c1[j] += da;
    pb.u0_in.c1[j] += db;
    pab.u0_in.c1[j] += da + db;
    pa.rho_in[j] += 0.5 * da;
    pb.rho_in[j] += db;
    pab.rho_in[j] += 0.5 * da + db;
  }
  CHECK(compute_D0(pab, p) <= (compute_D0(pa, p) + compute_D0(pb, p)) * (1.0 + 1e-12));
}

TEST_CASE("solve_lame_lift: zero perturbation gives the zero lift") {
  Params p;
  p.n = 16;
  LiftResult lift = solve_lame_lift(shear_spec(p), p);
  CHECK(lift.u_tilde.max_abs() <= 1e-12);
  CHECK(lift.w2p_norm <= 1e-12);
}

TEST_CASE("solve_lame_lift: corner-violating profile is rejected") {
  Params p;
  p.n = 16;
  BoundarySpec spec = shear_spec(p);
  for (int j = 0; j <= p.n; ++j)
    spec.u0_in.c2[j] += 0.01 * std::sin(kPi * static_cast<double>(j) / p.n);
  CHECK_THROWS_AS(solve_lame_lift(spec, p), SolverError);
}

TEST_CASE("lame mms: manufactured elastic solve converges at second order") {
  // u* = eps (sin(pi z1) sin(pi z2), 0) with matching body force and wall datum
  const double eps = 1e-2, mu = 1.0, nu = 0.3, alpha = 1.0;
  auto run = [&](int n) {
    Grid g(n);
    fem::FormOptions opt;
    opt.mu = mu;
    opt.nu = nu;
    opt.alpha = alpha;
    fem::VelocitySolver solver(fem::DofMap::channel(g), opt);
    VectorField body = VectorField::sample(
        g,
        [&](double a, double b) {
          return (3.0 * mu + nu) * kPi * kPi * eps * std::sin(kPi * a) * std::sin(kPi * b);
        },
        [&](double a, double b) {
          return -(mu + nu) * eps * kPi * kPi * std::cos(kPi * a) * std::cos(kPi * b);
        });
    BoundaryProfile wall = BoundaryProfile::sample(
        n, [&](double t) { return -mu * eps * kPi * std::sin(kPi * t); });
    VectorField u = solver.solve(solver.rhs_body(body) + solver.rhs_wall(wall, wall));
    VectorField exact = VectorField::sample(
        g, [&](double a, double b) { return eps * std::sin(kPi * a) * std::sin(kPi * b); },
        [](double, double) { return 0.0; });
    return norm(u - exact, NormKind::Lp, 2.0);
  };
  const double e16 = run(16), e32 = run(32);
  CHECK(e16 / e32 >= 3.2);
  CHECK(e16 / e32 <= 4.8);
}

TEST_CASE("solve_lame_lift: linearity and boundary exactness") {
  Params p;
  p.n = 16;
  BoundarySpec spec = shear_spec(p);
  for (int j = 0; j <= p.n; ++j) {
    const double t = static_cast<double>(j) / p.n;
    spec.u0_in.c1[j] += 0.01 * enveloped_sine(t, 1);
    spec.u0_in.c2[j] += 0.01 * enveloped_sine(t, 2);
    spec.u0_out.c2[j] += 0.005 * enveloped_sine(t, 1);
  }
  LiftResult lift = solve_lame_lift(spec, p);

  // Dirichlet values reproduced at the inflow nodes
  for (int j = 0; j <= p.n; ++j) {
    CHECK(lift.u_tilde.c1(0, j) ==
          doctest::Approx(spec.u0_in.c1[j] - (1.0 + static_cast<double>(j) / p.n))
              .epsilon(1e-12));
    CHECK(lift.u_tilde.c2(p.n, j) == doctest::Approx(spec.u0_out.c2[j]).epsilon(1e-12));
  }
  // wall-normal component is exactly zero
  for (int i = 0; i <= p.n; ++i) {
    CHECK(lift.u_tilde.c2(i, 0) == 0.0);
    CHECK(lift.u_tilde.c2(i, p.n) == 0.0);
  }

  // scaling the perturbation scales the lift
  BoundarySpec half = shear_spec(p);
  for (int j = 0; j <= p.n; ++j) {
    half.u0_in.c1[j] += 0.5 * (spec.u0_in.c1[j] - (1.0 + static_cast<double>(j) / p.n));
    half.u0_in.c2[j] += 0.5 * spec.u0_in.c2[j];
    half.u0_out.c2[j] += 0.5 * spec.u0_out.c2[j];
  }
  LiftResult lift_half = solve_lame_lift(half, p);
  VectorField diff = lift_half.u_tilde - 0.5 * lift.u_tilde;
  CHECK(diff.max_abs() <= 1e-10 * std::max(1.0, lift.u_tilde.max_abs()));
}

TEST_CASE("solve_lame_lift: lift norm controlled by the trace norm") {
  Params p;
  p.n = 32;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    BoundarySpec spec = shear_spec(p);
    const double a1 = 0.01 * uni(rng), a2 = 0.01 * uni(rng), a3 = 0.01 * uni(rng);
    double trace = 0.0;
    for (int j = 0; j <= p.n; ++j) {
      const double t = static_cast<double>(j) / p.n;
      spec.u0_in.c1[j] += a1 * enveloped_sine(t, 1);
      spec.u0_in.c2[j] += a2 * enveloped_sine(t, 2);
      spec.u0_out.c1[j] += a3 * enveloped_sine(t, 3);
    }
    const VectorProfile shear = shear_trace(p.n);
    trace += trace_norm_2mp(spec.u0_in.c1 - shear.c1, p.p_norm);
    trace += trace_norm_2mp(spec.u0_in.c2 - shear.c2, p.p_norm);
    trace += trace_norm_2mp(spec.u0_out.c1 - shear.c1, p.p_norm);
    trace += trace_norm_2mp(spec.u0_out.c2 - shear.c2, p.p_norm);
    if (trace == 0.0) continue;
    LiftResult lift = solve_lame_lift(spec, p);
    worst = std::max(worst, lift.w2p_norm / trace);
  }
  CHECK(worst > 0.0);
  CHECK(worst <= 25.0);
}
