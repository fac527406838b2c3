#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "chflow/fd.hpp"
#include "chflow/io.hpp"
#include "chflow/norms.hpp"
#include "chflow/quadrature.hpp"

using namespace chflow;

namespace {
constexpr double kPi = std::numbers::pi;

ScalarField random_field(Grid g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  ScalarField f(g);
  for (double& v : f.data) v = uni(rng);
  return f;
}
}  // namespace

TEST_CASE("grad_fd: constant field has zero gradient") {
  Grid g(16);
  ScalarField f(g, 3.75);
  VectorField grad = grad_fd(f);
  CHECK(grad.c1.max_abs() <= 1e-13);
  CHECK(grad.c2.max_abs() <= 1e-13);
}

TEST_CASE("grad_fd: exact on affine fields") {
  Grid g(12);
  ScalarField f = ScalarField::sample(g, [](double a, double b) { return 2.0 + 3.0 * a - b; });
  VectorField grad = grad_fd(f);
  for (int j = 0; j <= g.n; ++j) {
    for (int i = 0; i <= g.n; ++i) {
      CHECK(grad.c1(i, j) == doctest::Approx(3.0).epsilon(1e-12));
      CHECK(grad.c2(i, j) == doctest::Approx(-1.0).epsilon(1e-12));
    }
  }

  ScalarField id1 = ScalarField::sample(g, [](double a, double) { return a; });
  VectorField gid = grad_fd(id1);
  CHECK(std::abs(gid.c1(5, 7) - 1.0) <= 1e-13);
  CHECK(std::abs(gid.c2(5, 7)) <= 1e-13);
}

TEST_CASE("grad_fd: second-order error on sin, quarters under doubling") {
  auto max_err = [](int n) {
    Grid g(n);
    ScalarField f = ScalarField::sample(g, [](double a, double) { return std::sin(kPi * a); });
    ScalarField d1 = d1_fd(f);
    double err = 0.0;
    for (int j = 0; j <= g.n; ++j)
      for (int i = 0; i <= g.n; ++i)
        err = std::max(err, std::abs(d1(i, j) - kPi * std::cos(kPi * g.z1(i))));
    return err;
  };
  const double e64 = max_err(64);
  const double e128 = max_err(128);
  CHECK(e64 <= 11.0 / (64.0 * 64.0));
  CHECK(e64 / e128 >= 3.5);
  CHECK(e64 / e128 <= 4.5);
}

TEST_CASE("integrate: unit measure and exact bilinear") {
  Grid g(8);
  CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
  ScalarField f = ScalarField::sample(g, [](double a, double b) { return a * b; });
  CHECK(integrate(f) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("integrate: sin*sin converges at second order to 4/pi^2") {
  auto err = [](int n) {
    Grid g(n);
    ScalarField f = ScalarField::sample(
        g, [](double a, double b) { return std::sin(kPi * a) * std::sin(kPi * b); });
    return std::abs(integrate(f) - 4.0 / (kPi * kPi));
  };
  CHECK(err(64) <= 1.0 / (64.0 * 64.0));
  CHECK(err(64) / err(128) >= 3.8);
  CHECK(err(64) / err(128) <= 4.2);
}

TEST_CASE("norm: zero field gives zero for every kind") {
  Grid g(8);
  ScalarField z(g);
  for (NormKind k :
       {NormKind::Lp, NormKind::Lsup, NormKind::H1, NormKind::W1p, NormKind::W2pDiscrete})
    CHECK(norm(z, k, 4.0) == 0.0);
}

TEST_CASE("norm: sin(pi z1) L2 and H1 against closed forms") {
  Grid g(64);
  ScalarField f = ScalarField::sample(g, [](double a, double) { return std::sin(kPi * a); });
  // trapezoid integrates sin^2 exactly (discrete orthogonality)
  CHECK(std::abs(norm(f, NormKind::Lp, 2.0) - std::sqrt(0.5)) <= 1e-13);
  const double h1_exact = std::sqrt(0.5 + kPi * kPi / 2.0);
  CHECK(std::abs(norm(f, NormKind::H1) - h1_exact) <= 8.0 / (64.0 * 64.0));
  CHECK(norm(f, NormKind::H1) >= norm(f, NormKind::Lp, 2.0));
}

TEST_CASE("norm: absolute homogeneity and triangle inequality") {
  Grid g(16);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField a = random_field(g, rng);
    ScalarField b = random_field(g, rng);
    for (NormKind k : {NormKind::Lp, NormKind::H1, NormKind::W1p, NormKind::W2pDiscrete}) {
      const double na = norm(a, k, 4.0);
      CHECK(norm(-2.5 * a, k, 4.0) == doctest::Approx(2.5 * na).epsilon(1e-12));
      const double lhs = norm(a + b, k, 4.0);
      CHECK(lhs <= (na + norm(b, k, 4.0)) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("norm: H1 dominates L2 on random fields") {
  Grid g(16);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField a = random_field(g, rng);
    CHECK(norm(a, NormKind::H1) >= norm(a, NormKind::Lp, 2.0));
  }
}

TEST_CASE("boundary_norm: zero profile and constant seminorm") {
  BoundaryProfile z(32, 0.0);
  CHECK(boundary_norm(z, TraceNormKind::Lp, 4.0) == 0.0);
  CHECK(boundary_norm(z, TraceNormKind::W1p, 4.0) == 0.0);
  BoundaryProfile c(32, 2.0);
  CHECK(slobodeckij_seminorm(c, 0.75, 4.0) == 0.0);
}

TEST_CASE("boundary_norm: f(t)=t in W^{1,4} against the closed form") {
  BoundaryProfile f = BoundaryProfile::sample(32, [](double t) { return t; });
  const double expected = std::pow(0.2, 0.25) + 1.0;
  CHECK(std::abs(boundary_norm(f, TraceNormKind::W1p, 4.0) - expected) <= 1.0 / 32.0);
}

TEST_CASE("boundary_norm: homogeneity of the fractional norm") {
  BoundaryProfile f = BoundaryProfile::sample(32, [](double t) { return std::sin(2 * kPi * t); });
  const double p = 4.0, s = 0.75;
  const double base = boundary_norm(f, TraceNormKind::Frac, p, s);
  CHECK(boundary_norm(3.0 * f, TraceNormKind::Frac, p, s) ==
        doctest::Approx(3.0 * base).epsilon(1e-12));
}

TEST_CASE("max_z1cut_l2 picks the largest column") {
  Grid g(16);
  // field = z1: the z1 = 1 cut has L2 norm 1
  ScalarField f = ScalarField::sample(g, [](double a, double) { return a; });
  CHECK(max_z1cut_l2(f) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("csv dump format") {
  Grid g(4);
  ScalarField f = ScalarField::sample(g, [](double a, double b) { return a + 10 * b; });
  const std::string path = "core_dump_test.csv";
  write_csv(path, f);
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "z1,z2,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 25);

  VectorField v(g);
  const std::string vpath = "core_dump_vec_test.csv";
  write_csv(vpath, v);
  std::ifstream vin(vpath);
  std::getline(vin, line);
  CHECK(line == "z1,z2,v1,v2");
}
