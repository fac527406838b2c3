#include "chflow/params.hpp"

#include "chflow/errors.hpp"

namespace chflow {

void Params::validate() const {
  auto fail = [](const std::string& msg) { throw SolverError(ErrorKind::Config, msg); };
  if (!(mu > 0.0)) fail("mu must be positive");
  if (!(mu + nu >= 0.0)) fail("mu + nu must be nonnegative");
  if (!(gamma > 1.0)) fail("gamma must exceed 1");
  if (!(alpha >= 0.0)) fail("alpha must be nonnegative");
  if (!(p_norm > 2.0)) fail("p_norm must exceed 2");
  if (n < 4) fail("n must be at least 4");
  if (!(c_floor > 0.0 && c_floor < 1.0)) fail("c_floor must lie in (0,1)");
  if (!(j_floor > 0.0 && j_floor < 1.0)) fail("j_floor must lie in (0,1)");
  if (!(tol_inner > 0.0 && tol_outer > 0.0)) fail("tolerances must be positive");
  if (max_inner < 1 || max_outer < 1) fail("iteration caps must be positive");
  if (!(inner_relax > 0.0 && inner_relax <= 1.0)) fail("inner_relax must lie in (0,1]");
}

}  // namespace chflow
