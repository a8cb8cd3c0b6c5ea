#pragma once

#include <map>
#include <string>
#include <vector>

namespace weylband {

// Scenario configuration, mirroring the TOML sections
// [surface] [observable] [band] [numerics] [output] [dampedwave].
// Flag overrides are applied on top by the CLI; the effective config is
// echoed into every output and must re-parse to an identical value.

struct SurfaceSection {
  std::string family = "sphere";
  std::map<std::string, double> params;
  bool operator==(const SurfaceSection&) const = default;
};

struct ObservableSection {
  std::string kind = "cos2s";
  std::map<std::string, double> params;
  bool operator==(const ObservableSection&) const = default;
};

struct BandSection {
  double e2 = 0.9, e4 = 1.1;
  double f3 = 0.2, f1 = 0.4;
  // eps is either h^exponent ("h^0.5") or a literal value
  bool eps_is_exponent = true;
  double eps_value = 0.5;
  bool operator==(const BandSection&) const = default;
};

struct NumericsSection {
  std::vector<double> h_list{0.08, 0.04, 0.02};
  int grid_n = 2048;
  double quad_tol = 1e-10;
  double ode_tol = 1e-10;
  int admissible_grid_n = 512;
  double transversality_tol = 1e-3;
  double a_margin = 0.02;
  int m_buffer = 3;
  int classical_a_grid = 65;
  long long seed = 20240101;
  long long mc_samples = 0;  // 0 disables the Monte-Carlo volume check
  bool operator==(const NumericsSection&) const = default;
};

struct OutputSection {
  std::string dir = "out";
  bool svg = true;
  bool operator==(const OutputSection&) const = default;
};

struct DampedWaveSection {
  double tau_lo = 45.0, tau_hi = 55.0;
  double box_im_lo = 0.2, box_im_hi = 0.4;
  int grid_n = 2048;
  double basis_margin = 8.0;
  bool operator==(const DampedWaveSection&) const = default;
};

struct ScenarioConfig {
  SurfaceSection surface;
  ObservableSection observable;
  BandSection band;
  NumericsSection numerics;
  OutputSection output;
  DampedWaveSection dampedwave;
  bool operator==(const ScenarioConfig&) const = default;
};

double eps_for(const BandSection& band, double h);

// TOML-syntax subset: [section] headers, key = value with numbers, booleans,
// quoted strings and flat numeric arrays, # comments. Unknown sections or
// keys are rejected. Throws ConfigError.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// serialization with round-trip-exact numbers
std::string to_toml(const ScenarioConfig& cfg);

}  // namespace weylband
