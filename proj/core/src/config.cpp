#include "chflow/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "chflow/errors.hpp"

namespace chflow {

double envelope(double t, double margin) {
  // flat zero on [0, m], quintic ramp on [m, 3m]; mirrored at the right end
  const double m = margin;
  auto smooth = [](double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); };
  double left = t <= m ? 0.0 : (t >= 3 * m ? 1.0 : smooth(0.5 * (t - m) / m));
  double s = 1.0 - t;
  double right = s <= m ? 0.0 : (s >= 3 * m ? 1.0 : smooth(0.5 * (s - m) / m));
  return left * right;
}

namespace {

using Shape = std::function<double(double)>;

// Primary and secondary shapes of a named family, envelope included.
std::pair<Shape, Shape> family_shapes(const std::string& name, double margin) {
  const double pi = std::numbers::pi;
  if (name == "sine") {
    return {[=](double t) { return std::sin(pi * t) * envelope(t, margin); },
            [=](double t) { return 0.35 * std::sin(2 * pi * t) * envelope(t, margin); }};
  }
  if (name == "bump") {
    return {[=](double t) { return envelope(t, margin); },
            [=](double t) { return 0.25 * envelope(t, margin); }};
  }
  throw SolverError(ErrorKind::Config, "unknown profile family: " + name);
}

}  // namespace

BoundarySpec make_boundary_spec(const DataConfig& data, const Params& params) {
  if (data.u0_amplitude < 0 || data.rho_amplitude < 0 || data.b_amplitude < 0)
    throw SolverError(ErrorKind::Config, "profile amplitudes must be nonnegative");
  const int n = params.n;
  auto [u_s1, u_s2] = family_shapes(data.u0_family, data.margin);
  const Shape r_s1 = family_shapes(data.rho_family, data.margin).first;
  auto [b_s1, b_s2] = family_shapes(data.b_family, data.margin);

  BoundarySpec spec;
  const double au = data.u0_amplitude;
  spec.u0_in.c1 = BoundaryProfile::sample(n, [&](double t) { return 1.0 + t + au * u_s1(t); });
  spec.u0_in.c2 = BoundaryProfile::sample(n, [&](double t) { return au * u_s2(t); });
  spec.u0_out.c1 =
      BoundaryProfile::sample(n, [&](double t) { return 1.0 + t + 0.8 * au * u_s1(t); });
  spec.u0_out.c2 = BoundaryProfile::sample(n, [&](double t) { return 0.8 * au * u_s2(t); });

  spec.rho_in = BoundaryProfile::sample(
      n, [&](double t) { return 1.0 + data.rho_amplitude * r_s1(t); });

  const auto [btb, btt] = compute_btilde(params);
  spec.b_bottom = BoundaryProfile::sample(
      n, [&](double t) { return data.b_amplitude * b_s1(t); });
  spec.b_top = BoundaryProfile::sample(
      n, [&](double t) { return 0.6 * data.b_amplitude * b_s2(t); });
  spec.b_bottom += btb;
  spec.b_top += btt;

  auto override_profile = [n](const std::vector<double>& samples, BoundaryProfile& target,
                              const char* what) {
    if (samples.empty()) return;
    if (static_cast<int>(samples.size()) != n + 1)
      throw SolverError(ErrorKind::Config,
                        std::string("explicit samples for ") + what + " must have n+1 values");
    target.v = samples;
  };
  override_profile(data.samples.u0_in_c1, spec.u0_in.c1, "u0_in_c1");
  override_profile(data.samples.u0_in_c2, spec.u0_in.c2, "u0_in_c2");
  override_profile(data.samples.u0_out_c1, spec.u0_out.c1, "u0_out_c1");
  override_profile(data.samples.u0_out_c2, spec.u0_out.c2, "u0_out_c2");
  override_profile(data.samples.rho_in, spec.rho_in, "rho_in");
  override_profile(data.samples.b_bottom, spec.b_bottom, "b_bottom");
  override_profile(data.samples.b_top, spec.b_top, "b_top");
  return spec;
}

namespace {

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const std::exception& e) {
    throw SolverError(ErrorKind::Config, std::string("config parse error: ") + e.what());
  }

  RunConfig cfg;
  try {
    read_if(j, "mode", cfg.mode);
    read_if(j, "seed", cfg.seed);
    if (j.contains("params")) {
      const auto& p = j.at("params");
      read_if(p, "mu", cfg.params.mu);
      read_if(p, "nu", cfg.params.nu);
      read_if(p, "gamma", cfg.params.gamma);
      read_if(p, "alpha", cfg.params.alpha);
      read_if(p, "p", cfg.params.p_norm);
      read_if(p, "n", cfg.params.n);
      read_if(p, "tol_inner", cfg.params.tol_inner);
      read_if(p, "tol_outer", cfg.params.tol_outer);
      read_if(p, "max_inner", cfg.params.max_inner);
      read_if(p, "max_outer", cfg.params.max_outer);
      read_if(p, "c_floor", cfg.params.c_floor);
      read_if(p, "j_floor", cfg.params.j_floor);
      read_if(p, "inner_relax", cfg.params.inner_relax);
      read_if(p, "upwind", cfg.params.upwind);
    }
    if (j.contains("data")) {
      const auto& d = j.at("data");
      read_if(d, "u0_family", cfg.data.u0_family);
      read_if(d, "u0_amplitude", cfg.data.u0_amplitude);
      read_if(d, "rho_family", cfg.data.rho_family);
      read_if(d, "rho_amplitude", cfg.data.rho_amplitude);
      read_if(d, "b_family", cfg.data.b_family);
      read_if(d, "b_amplitude", cfg.data.b_amplitude);
      read_if(d, "margin", cfg.data.margin);
      if (d.contains("samples")) {
        const auto& s = d.at("samples");
        read_if(s, "u0_in_c1", cfg.data.samples.u0_in_c1);
        read_if(s, "u0_in_c2", cfg.data.samples.u0_in_c2);
        read_if(s, "u0_out_c1", cfg.data.samples.u0_out_c1);
        read_if(s, "u0_out_c2", cfg.data.samples.u0_out_c2);
        read_if(s, "rho_in", cfg.data.samples.rho_in);
        read_if(s, "b_bottom", cfg.data.samples.b_bottom);
        read_if(s, "b_top", cfg.data.samples.b_top);
      }
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      read_if(s, "mu", cfg.sweep.mu);
      read_if(s, "amplitude", cfg.sweep.amplitude);
    }
    if (j.contains("output")) read_if(j.at("output"), "dir", cfg.out_dir);
  } catch (const SolverError&) {
    throw;
  } catch (const std::exception& e) {
    throw SolverError(ErrorKind::Config, std::string("config field error: ") + e.what());
  }

  static const char* kModes[] = {"solve", "mms", "korn", "threshold", "scaling"};
  bool known = false;
  for (const char* m : kModes) known = known || cfg.mode == m;
  if (!known) throw SolverError(ErrorKind::Config, "unknown mode: " + cfg.mode);
  cfg.params.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SolverError(ErrorKind::Config, "cannot read config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace chflow
