#pragma once

#include "chflow/field.hpp"
#include "chflow/profile.hpp"

namespace chflow {

// Interior norms. Conventions:
//   Lp           (integral |f|^p)^(1/p), trapezoid quadrature
//   Lsup         max over nodes of |f|
//   H1           sqrt(L2^2 + ||grad f||_L2^2)
//   W1p          (Lp^p + ||grad f||_Lp^p)^(1/p)
//   W2pDiscrete  W1p plus second centered differences integrated over
//                interior nodes only (monitoring surrogate)
// Vector fields use pointwise Euclidean / Frobenius magnitudes.
enum class NormKind { Lp, Lsup, H1, W1p, W2pDiscrete };

double norm(const ScalarField& f, NormKind kind, double p = 2.0);
double norm(const VectorField& f, NormKind kind, double p = 2.0);

// Trace norms on one side. Conventions:
//   Lp        1-D trapezoid of |f|^p
//   W1p       Lp(f) + Lp(f'), derivative by the fd module
//   Frac      Lp(f) + Sobolev-Slobodeckij seminorm of order s in (0,1)
enum class TraceNormKind { Lp, W1p, Frac };

double boundary_norm(const BoundaryProfile& f, TraceNormKind kind, double p, double s = 0.0);

// (double sum over node pairs of |f_i - f_j|^p / |t_i - t_j|^(1+s*p), diagonal
// excluded, uniform h^2 pair weights)^(1/p).
double slobodeckij_seminorm(const BoundaryProfile& f, double s, double p);

// sup over z1 cuts of the L2 norm in z2 (the L^inf(L^2) quantity of the
// transport estimate).
double max_z1cut_l2(const ScalarField& f);

}  // namespace chflow
