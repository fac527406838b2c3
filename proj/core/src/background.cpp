#include "chflow/background.hpp"

#include <cmath>

#include "chflow/errors.hpp"
#include "chflow/fd.hpp"
#include "chflow/fem.hpp"
#include "chflow/norms.hpp"

namespace chflow {

std::pair<std::array<double, 2>, double> eval_shear(double /*x1*/, double x2) {
  return {{1.0 + x2, 0.0}, 1.0};
}

VectorProfile shear_trace(int n) {
  VectorProfile p;
  p.c1 = BoundaryProfile::sample(n, [](double t) { return 1.0 + t; });
  p.c2 = BoundaryProfile(n, 0.0);
  return p;
}

std::pair<BoundaryProfile, BoundaryProfile> compute_btilde(const Params& params) {
  // 2 mu n.D(U0).tau + alpha U0.tau with D(U0) = [[0,1/2],[1/2,0]]:
  // bottom n=(0,-1): -mu + alpha*(1+0); top n=(0,1): mu + alpha*(1+1).
  BoundaryProfile bottom(params.n, -params.mu + params.alpha);
  BoundaryProfile top(params.n, params.mu + 2.0 * params.alpha);
  return {bottom, top};
}

namespace {

void check_corner_vanishing(const BoundaryProfile& pert, const char* what) {
  const double tol = 1e-12 * std::max(1.0, pert.max_abs());
  const int n = pert.n;
  for (int i : {0, 1, n - 1, n}) {
    if (std::abs(pert[i]) > tol)
      throw SolverError(ErrorKind::CornerIncompatibility,
                        std::string(what) + " perturbation does not vanish near a corner");
  }
}

}  // namespace

void BoundarySpec::validate(const Params& params) const {
  const int n = params.n;
  if (u0_in.c1.n != n || u0_out.c1.n != n || rho_in.n != n || b_bottom.n != n || b_top.n != n)
    throw SolverError(ErrorKind::Config, "boundary profiles do not match the grid");

  for (int j = 0; j <= n; ++j) {
    if (u0_in.c1[j] < params.c_floor || u0_out.c1[j] < params.c_floor)
      throw SolverError(ErrorKind::Config,
                        "first velocity component drops below c_floor on the Dirichlet sides");
    if (!(rho_in[j] > 0.0))
      throw SolverError(ErrorKind::Config, "inflow density must be positive");
  }

  const VectorProfile shear = shear_trace(n);
  const auto [btb, btt] = compute_btilde(params);
  check_corner_vanishing(u0_in.c1 - shear.c1, "inflow velocity");
  check_corner_vanishing(u0_in.c2 - shear.c2, "inflow velocity");
  check_corner_vanishing(u0_out.c1 - shear.c1, "outflow velocity");
  check_corner_vanishing(u0_out.c2 - shear.c2, "outflow velocity");
  check_corner_vanishing(b_bottom - btb, "wall friction");
  check_corner_vanishing(b_top - btt, "wall friction");
}

double trace_norm_2mp(const BoundaryProfile& f, double p) {
  const double s = 1.0 - 1.0 / p;
  return boundary_norm(f, TraceNormKind::W1p, p) + slobodeckij_seminorm(deriv_fd(f), s, p);
}

double compute_D0(const BoundarySpec& spec, const Params& params) {
  const double p = params.p_norm;
  const double s = 1.0 - 1.0 / p;
  const VectorProfile shear = shear_trace(params.n);
  const auto [btb, btt] = compute_btilde(params);

  double d0 = 0.0;
  d0 += trace_norm_2mp(spec.u0_in.c1 - shear.c1, p);
  d0 += trace_norm_2mp(spec.u0_in.c2 - shear.c2, p);
  d0 += trace_norm_2mp(spec.u0_out.c1 - shear.c1, p);
  d0 += trace_norm_2mp(spec.u0_out.c2 - shear.c2, p);
  d0 += boundary_norm(spec.b_bottom - btb, TraceNormKind::Frac, p, s);
  d0 += boundary_norm(spec.b_top - btt, TraceNormKind::Frac, p, s);

  BoundaryProfile w_in = spec.rho_in;
  for (int j = 0; j <= params.n; ++j) w_in[j] -= 1.0;
  d0 += boundary_norm(w_in, TraceNormKind::W1p, p);
  return d0;
}

LiftResult solve_lame_lift(const BoundarySpec& spec, const Params& params) {
  spec.validate(params);
  const Grid g = params.grid();
  const VectorProfile shear = shear_trace(params.n);

  VectorProfile din{spec.u0_in.c1 - shear.c1, spec.u0_in.c2 - shear.c2};
  VectorProfile dout{spec.u0_out.c1 - shear.c1, spec.u0_out.c2 - shear.c2};

  fem::DofMap dofs = fem::DofMap::channel(g);
  dofs.set_dirichlet(din, dout);

  fem::FormOptions opt;
  opt.mu = params.mu;
  opt.nu = params.nu;
  opt.alpha = params.alpha;
  fem::VelocitySolver solver(std::move(dofs), opt);
  VectorField lift = solver.solve(solver.rhs_dirichlet());

  LiftResult out;
  out.w2p_norm = norm(lift, NormKind::W2pDiscrete, params.p_norm);

  // Pointwise friction-condition defect at the wall nodes (the condition is
  // imposed weakly, so this is a monitoring quantity).
  ScalarField d2u1 = d2_fd(lift.c1);
  ScalarField d1u2 = d1_fd(lift.c2);
  double res = 0.0;
  for (int i = 0; i <= g.n; ++i) {
    const double sym_b = d2u1(i, 0) + d1u2(i, 0);
    const double sym_t = d2u1(i, g.n) + d1u2(i, g.n);
    res = std::max(res, std::abs(-params.mu * sym_b + params.alpha * lift.c1(i, 0)));
    res = std::max(res, std::abs(params.mu * sym_t + params.alpha * lift.c1(i, g.n)));
  }
  out.wall_residual = res;
  out.u_tilde = std::move(lift);
  return out;
}

}  // namespace chflow
