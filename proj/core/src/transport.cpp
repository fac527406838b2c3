#include "chflow/transport.hpp"

#include <string>

#include "chflow/errors.hpp"

namespace chflow {

TransportCoeff coeff_a(const FlowMap& map, const VectorField& v_bar, const Params& params) {
  const Grid g = map.psi2.grid;
  TransportCoeff out;
  out.a = ScalarField(g);
  double amin = std::numeric_limits<double>::max();
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      const double p2 = map.psi2(i, j);
      const double val = 1.0 + p2 + v_bar.c1.eval(g.z1(i), p2);
      out.a(i, j) = val;
      amin = std::min(amin, val);
    }
  }
  if (amin < params.c_floor)
    throw SolverError(ErrorKind::DegenerateFlow,
                      "transport coefficient dropped below c_floor: " + std::to_string(amin));
  out.min_a = amin;
  return out;
}

ScalarField transport_S(const ScalarField& rhs, const BoundaryProfile& w_in,
                        const TransportCoeff& a) {
  const Grid g = rhs.grid;
  ScalarField w(g);
  const double h = g.h;
  for (int j = 0; j <= g.n; ++j) {
    double acc = w_in[j];
    double prev = rhs(0, j) / a.a(0, j);
    w(0, j) = acc;
    for (int i = 1; i <= g.n; ++i) {
      const double cur = rhs(i, j) / a.a(i, j);
      acc += 0.5 * h * (prev + cur);
      w(i, j) = acc;
      prev = cur;
    }
  }
  return w;
}

}  // namespace chflow
