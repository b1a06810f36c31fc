#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "homsim/detection.hpp"

namespace homsim {

inline constexpr const char* kVersion = "0.1.0";

/// Configuration problem; carries the offending key when known.
struct ConfigError : std::runtime_error {
  std::string key;
  ConfigError(std::string k, const std::string& what)
      : std::runtime_error(k.empty() ? what : k + ": " + what), key(std::move(k)) {}
};

/// Flat dotted-key configuration, presets first, overrides second.
struct RunConfig {
  std::string experiment = "custom";

  double L_PDC_cm = 2.07;
  double x_um = 3810.0;
  double y_um = 5810.0;
  double l_um = 10000.0;
  double L_PC1_um = 7620.0;
  double phi1_rad = kPi / 4;
  double phi2_rad = kPi / 2;

  double n_H = 2.15;
  double n_V = 2.21;

  double pump_wavelength_nm = 775.0;
  double pump_bandwidth_rad_per_s = 0.0;
  bool pump_monochromatic = true;

  int grid_n_points = 512;
  double grid_half_span_lobes = 3.0;      // half span in units of the first sinc zero
  double grid_half_span_rad_per_s = 0.0;  // 0 = derive from lobes

  double scan_min_um = 0.0;  // honored only when both min and max are set
  double scan_max_um = 0.0;
  int scan_coarse_points = 400;
  double scan_fine_step_um = 0.0;  // 0 = fringe period / 8
  double scan_fine_window_um = 6.0;
  bool scan_components = false;  // custom experiment: also emit component series

  std::set<std::string> explicit_keys;
};

/// Parse a key = value document ('#' comments, blank lines allowed).
/// Unknown keys and invariant violations raise ConfigError naming the key.
RunConfig parse_config(const std::string& text);

/// Apply one "key=value" override.
void apply_override(RunConfig& config, const std::string& key_equals_value);

void validate_config(const RunConfig& config);

struct SeriesSpec {
  std::string name;  // file stem suffix
  CircuitGeometry geometry;
  std::string part;  // "total", "psi1", "psi2"
};

/// Resolve the experiment preset into concrete series; explicitly set keys win
/// over preset values.
std::vector<SeriesSpec> resolve_series(const RunConfig& config);

/// Sorted unique scan points: uniform coarse sampling plus a fine window.
std::vector<double> make_delay_points(double lo, double hi, int coarse_points,
                                      double fine_center, double fine_half_width,
                                      double fine_step);

struct RunOutput {
  std::vector<std::string> csv_files;
  std::string manifest_file;
};

/// Execute every series of the configured experiment, write one CSV per series
/// plus a manifest sufficient to reproduce the run bit-for-bit.
RunOutput run(const RunConfig& config, const std::string& out_dir);

}  // namespace homsim
