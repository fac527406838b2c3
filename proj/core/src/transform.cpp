#include "chflow/transform.hpp"

#include <cmath>

#include "chflow/errors.hpp"
#include "chflow/fd.hpp"
#include "chflow/norms.hpp"

namespace chflow {

TildeV tilde_v(const VectorField& v_plus_u, const Params& params) {
  const Grid g = v_plus_u.grid();
  TildeV tv;
  tv.denom = ScalarField(g);
  tv.vt = ScalarField(g);
  double dmin = std::numeric_limits<double>::max();
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const double den = 1.0 + g.z2(j) + v_plus_u.c1(i, j);
      tv.denom(i, j) = den;
      dmin = std::min(dmin, den);
    }
  }
  if (dmin < params.c_floor)
    throw SolverError(ErrorKind::DegenerateFlow,
                      "transport denominator dropped below c_floor: " + std::to_string(dmin));
  for (size_t k = 0; k < tv.vt.data.size(); ++k)
    tv.vt.data[k] = v_plus_u.c2.data[k] / tv.denom.data[k];
  tv.dvt_dx2 = d2_fd(tv.vt);
  tv.min_denom = dmin;
  return tv;
}

TildeV tilde_v_from_field(const ScalarField& vt) {
  TildeV tv;
  tv.vt = vt;
  tv.dvt_dx2 = d2_fd(vt);
  tv.denom = ScalarField::sample(vt.grid, [](double, double x2) { return 1.0 + x2; });
  tv.min_denom = 1.0;
  return tv;
}

FlowMap FlowMap::identity(Grid g) {
  FlowMap m;
  m.psi2 = ScalarField::sample(g, [](double, double x2) { return x2; });
  m.e21 = ScalarField(g);
  m.e22 = ScalarField(g);
  m.jac = ScalarField(g, 1.0);
  m.et21 = ScalarField(g);
  m.et22 = ScalarField(g);
  m.de21_d1 = ScalarField(g);
  m.de21_d2 = ScalarField(g);
  m.de22_d1 = ScalarField(g);
  m.de22_d2 = ScalarField(g);
  m.min_jac = 1.0;
  m.c_min = 1.0;
  return m;
}

FlowMap build_flowmap(const TildeV& tv, const Params& params) {
  const Grid g = tv.vt.grid;
  const double h = g.h;
  FlowMap m;
  m.psi2 = ScalarField(g);
  m.e21 = ScalarField(g);
  m.e22 = ScalarField(g);
  m.jac = ScalarField(g);

  auto slope = [&](double z1, double y) { return tv.vt.eval(z1, y); };
  auto dslope = [&](double z1, double y) { return tv.dvt_dx2.eval(z1, y); };

  double min_jac = std::numeric_limits<double>::max();
  double worst_exit = 0.0;

  for (int j = 0; j <= g.n; ++j) {
    double y = g.z2(j);
    double q = 1.0;  // d(psi2)/d(z2), variational state
    for (int i = 0; i <= g.n; ++i) {
      const double z1 = g.z1(i);
      m.psi2(i, j) = y;
      m.e21(i, j) = slope(z1, y);
      m.e22(i, j) = q - 1.0;
      m.jac(i, j) = q;
      min_jac = std::min(min_jac, q);
      worst_exit = std::max(worst_exit, std::max(-y, y - 1.0));
      if (i == g.n) break;

      // Joint RK4 step for (psi2, q).
      const double k1 = slope(z1, y);
      const double l1 = dslope(z1, y) * q;
      const double k2 = slope(z1 + 0.5 * h, y + 0.5 * h * k1);
      const double l2 = dslope(z1 + 0.5 * h, y + 0.5 * h * k1) * (q + 0.5 * h * l1);
      const double k3 = slope(z1 + 0.5 * h, y + 0.5 * h * k2);
      const double l3 = dslope(z1 + 0.5 * h, y + 0.5 * h * k2) * (q + 0.5 * h * l2);
      const double k4 = slope(z1 + h, y + h * k3);
      const double l4 = dslope(z1 + h, y + h * k3) * (q + h * l3);
      y += h * (k1 + 2 * k2 + 2 * k3 + k4) / 6.0;
      q += h * (l1 + 2 * l2 + 2 * l3 + l4) / 6.0;
    }
  }

  if (worst_exit > h * h)
    throw SolverError(ErrorKind::DiffeoFailure,
                      "streamline map leaves the unit square by " + std::to_string(worst_exit));
  if (min_jac < params.j_floor)
    throw SolverError(ErrorKind::DiffeoFailure,
                      "map Jacobian dropped below j_floor: " + std::to_string(min_jac));

  for (double& v : m.psi2.data) v = std::clamp(v, 0.0, 1.0);
  m.min_jac = min_jac;

  m.et21 = ScalarField(g);
  m.et22 = ScalarField(g);
  for (size_t k = 0; k < m.jac.data.size(); ++k) {
    m.et21.data[k] = -m.e21.data[k] / m.jac.data[k];
    m.et22.data[k] = -m.e22.data[k] / m.jac.data[k];
  }
  m.de21_d1 = d1_fd(m.e21);
  m.de21_d2 = d2_fd(m.e21);
  m.de22_d1 = d1_fd(m.e22);
  m.de22_d2 = d2_fd(m.e22);

  double cmin = std::numeric_limits<double>::max();
  for (int j = 0; j <= g.n; ++j)
    for (int i = 0; i <= g.n; ++i)
      cmin = std::min(cmin, tv.denom.eval(g.z1(i), m.psi2(i, j)));
  m.c_min = cmin;
  return m;
}

FlowMap flowmap_from_fields(const ScalarField& psi2, const ScalarField& e21,
                            const ScalarField& e22) {
  const Grid g = psi2.grid;
  FlowMap m;
  m.psi2 = psi2;
  m.e21 = e21;
  m.e22 = e22;
  m.jac = ScalarField(g);
  m.et21 = ScalarField(g);
  m.et22 = ScalarField(g);
  double min_jac = std::numeric_limits<double>::max();
  for (size_t k = 0; k < psi2.data.size(); ++k) {
    const double J = 1.0 + e22.data[k];
    m.jac.data[k] = J;
    m.et21.data[k] = -e21.data[k] / J;
    m.et22.data[k] = -e22.data[k] / J;
    min_jac = std::min(min_jac, J);
  }
  m.min_jac = min_jac;
  m.de21_d1 = d1_fd(e21);
  m.de21_d2 = d2_fd(e21);
  m.de22_d1 = d1_fd(e22);
  m.de22_d2 = d2_fd(e22);
  double cmin = std::numeric_limits<double>::max();
  for (double v : psi2.data) cmin = std::min(cmin, 1.0 + v);
  m.c_min = cmin;
  return m;
}

ScalarField ubar_composed(const FlowMap& map) {
  ScalarField out = map.psi2;
  for (double& v : out.data) v += 1.0;
  return out;
}

namespace {

// Inverse-transfer coefficients: d_x1 = d_z1 + a1 d_z2, d_x2 = a2 d_z2.
struct Transfer {
  const ScalarField& a1;  // = et21
  ScalarField a2;         // = 1/jac
  ScalarField da1_d1, da1_d2, da2_d1, da2_d2;

  explicit Transfer(const FlowMap& m) : a1(m.et21) {
    const Grid g = m.psi2.grid;
    a2 = ScalarField(g);
    da1_d1 = ScalarField(g);
    da1_d2 = ScalarField(g);
    da2_d1 = ScalarField(g);
    da2_d2 = ScalarField(g);
    for (size_t k = 0; k < a2.data.size(); ++k) {
      const double J = m.jac.data[k];
      const double e21 = m.e21.data[k];
      a2.data[k] = 1.0 / J;
      // quotient rule; dJ = de22
      da1_d1.data[k] = -(m.de21_d1.data[k] * J - e21 * m.de22_d1.data[k]) / (J * J);
      da1_d2.data[k] = -(m.de21_d2.data[k] * J - e21 * m.de22_d2.data[k]) / (J * J);
      da2_d1.data[k] = -m.de22_d1.data[k] / (J * J);
      da2_d2.data[k] = -m.de22_d2.data[k] / (J * J);
    }
  }
};

struct Hessian {
  ScalarField xx, xy, yy;  // x-coordinate second derivatives
  ScalarField zxx, zxy, zyy;
};

// Second derivatives in x from z-differences, expanded with the product rule
// on the transfer coefficients (uses the stored first differences of the
// Jacobian entries).
Hessian hessian_x(const ScalarField& f, const Transfer& tr) {
  ScalarField f1 = d1_fd(f), f2 = d2_fd(f);
  Hessian out;
  out.zxx = d1_fd(f1);
  out.zxy = d2_fd(f1);
  out.zyy = d2_fd(f2);
  const Grid g = f.grid;
  out.xx = ScalarField(g);
  out.xy = ScalarField(g);
  out.yy = ScalarField(g);
  for (size_t k = 0; k < f.data.size(); ++k) {
    const double a1 = tr.a1.data[k], a2 = tr.a2.data[k];
    const double g2 = f2.data[k];
    const double f11 = out.zxx.data[k], f12 = out.zxy.data[k], f22 = out.zyy.data[k];
    out.xx.data[k] = f11 + 2.0 * a1 * f12 + a1 * a1 * f22 +
                     (tr.da1_d1.data[k] + a1 * tr.da1_d2.data[k]) * g2;
    out.xy.data[k] = a2 * f12 + a1 * a2 * f22 +
                     (tr.da2_d1.data[k] + a1 * tr.da2_d2.data[k]) * g2;
    out.yy.data[k] = a2 * a2 * f22 + a2 * tr.da2_d2.data[k] * g2;
  }
  return out;
}

}  // namespace

ScalarField x_d1(const ScalarField& f, const FlowMap& map) {
  ScalarField out = d1_fd(f);
  ScalarField f2 = d2_fd(f);
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] += map.et21.data[k] * f2.data[k];
  return out;
}

ScalarField x_d2(const ScalarField& f, const FlowMap& map) {
  ScalarField out = d2_fd(f);
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] /= map.jac.data[k];
  return out;
}

ScalarField r_d1(const ScalarField& f, const FlowMap& map) {
  ScalarField out = d2_fd(f);
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] *= map.et21.data[k];
  return out;
}

ScalarField r_d2(const ScalarField& f, const FlowMap& map) {
  ScalarField out = d2_fd(f);
  for (size_t k = 0; k < out.data.size(); ++k) out.data[k] *= map.et22.data[k];
  return out;
}

VectorField r_grad(const ScalarField& f, const FlowMap& map) {
  return {r_d1(f, map), r_d2(f, map)};
}

ScalarField r_div(const VectorField& f, const FlowMap& map) {
  ScalarField out = r_d1(f.c1, map);
  out += r_d2(f.c2, map);
  return out;
}

VectorField r_laplacian(const VectorField& f, const FlowMap& map) {
  const Transfer tr(map);
  VectorField out(f.grid());
  const Hessian h1 = hessian_x(f.c1, tr);
  const Hessian h2 = hessian_x(f.c2, tr);
  for (size_t k = 0; k < out.c1.data.size(); ++k) {
    out.c1.data[k] = (h1.xx.data[k] + h1.yy.data[k]) - (h1.zxx.data[k] + h1.zyy.data[k]);
    out.c2.data[k] = (h2.xx.data[k] + h2.yy.data[k]) - (h2.zxx.data[k] + h2.zyy.data[k]);
  }
  return out;
}

VectorField r_grad_div(const VectorField& f, const FlowMap& map) {
  const Transfer tr(map);
  const Hessian h1 = hessian_x(f.c1, tr);
  const Hessian h2 = hessian_x(f.c2, tr);
  VectorField out(f.grid());
  for (size_t k = 0; k < out.c1.data.size(); ++k) {
    out.c1.data[k] = (h1.xx.data[k] + h2.xy.data[k]) - (h1.zxx.data[k] + h2.zxy.data[k]);
    out.c2.data[k] = (h1.xy.data[k] + h2.yy.data[k]) - (h1.zxy.data[k] + h2.zyy.data[k]);
  }
  return out;
}

SymTensorField r_sym_grad(const VectorField& f, const FlowMap& map) {
  SymTensorField out;
  out.t11 = r_d1(f.c1, map);
  out.t22 = r_d2(f.c2, map);
  ScalarField a = r_d2(f.c1, map);
  ScalarField b = r_d1(f.c2, map);
  out.t12 = ScalarField(f.grid());
  for (size_t k = 0; k < out.t12.data.size(); ++k)
    out.t12.data[k] = 0.5 * (a.data[k] + b.data[k]);
  return out;
}

double invert_psi2_column(const FlowMap& map, int i, double x2, double tol) {
  const Grid g = map.psi2.grid;
  for (int j = 0; j < g.n; ++j) {
    if (!(map.psi2(i, j + 1) > map.psi2(i, j)))
      throw SolverError(ErrorKind::InversionFailure,
                        "psi2 is not strictly increasing along a column");
  }
  if (x2 <= map.psi2(i, 0)) return 0.0;
  if (x2 >= map.psi2(i, g.n)) return 1.0;
  int lo = 0, hi = g.n;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (map.psi2(i, mid) <= x2 ? lo : hi) = mid;
  }
  if (std::abs(map.psi2(i, lo) - x2) <= 1e-14) return g.z2(lo);
  if (std::abs(map.psi2(i, hi) - x2) <= 1e-14) return g.z2(hi);
  double a = g.z2(lo), b = g.z2(hi);
  double fa = map.psi2(i, lo) - x2;
  while (b - a > tol) {
    const double c = 0.5 * (a + b);
    // linear interpolant of psi2 on [a, b] within the bracketing cell
    const double t = (c - g.z2(lo)) / g.h;
    const double fc = (1 - t) * map.psi2(i, lo) + t * map.psi2(i, hi) - x2;
    if ((fa <= 0.0) == (fc <= 0.0)) {
      a = c;
      fa = fc;
    } else {
      b = c;
    }
  }
  return 0.5 * (a + b);
}

DiffeoReport check_diffeo(const FlowMap& map, const Params& params) {
  DiffeoReport rep;
  rep.min_jac = map.min_jac;
  rep.max_abs_e21 = map.e21.max_abs();
  rep.max_abs_e22 = map.e22.max_abs();
  rep.e_norm_w1p = norm(VectorField{map.e21, map.e22}, NormKind::W1p, params.p_norm);
  rep.et_norm_w1p = norm(VectorField{map.et21, map.et22}, NormKind::W1p, params.p_norm);
  rep.pass = map.min_jac >= params.j_floor;
  return rep;
}

}  // namespace chflow
