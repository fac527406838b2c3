#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chflow/background.hpp"
#include "chflow/params.hpp"

namespace chflow {

// Boundary data families. Shapes are multiplied by a C^2 plateau envelope
// that vanishes on [0, margin] and [1-margin, 1], which keeps the data flat
// near the corners (at least two grid nodes for the grids used here).
// Optional explicit node samples (n+1 values each); a nonempty entry
// overrides the corresponding analytic family.
struct ProfileSamples {
  std::vector<double> u0_in_c1, u0_in_c2, u0_out_c1, u0_out_c2;
  std::vector<double> rho_in, b_bottom, b_top;
};

struct DataConfig {
  std::string u0_family = "sine";
  double u0_amplitude = 0.0;
  std::string rho_family = "sine";
  double rho_amplitude = 0.0;
  std::string b_family = "sine";
  double b_amplitude = 0.0;
  double margin = 0.125;
  ProfileSamples samples;
};

struct SweepConfig {
  std::vector<double> mu;
  std::vector<double> amplitude;
};

struct RunConfig {
  std::string mode = "solve";
  Params params;
  DataConfig data;
  SweepConfig sweep;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
};

// Quintic plateau envelope: 0 on [0, m] and [1-m, 1], 1 on [2m, 1-2m].
double envelope(double t, double margin);

// Samples the configured analytic families into full boundary data
// (shear traces plus perturbations).
BoundarySpec make_boundary_spec(const DataConfig& data, const Params& params);

// Parses the JSON run configuration (flat keys under params/data/sweep/output).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);

}  // namespace chflow
