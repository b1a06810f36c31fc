#include "homsim/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "homsim/oracle.hpp"

namespace homsim {

namespace {

constexpr double kUm = 1e-6;
constexpr double kCm = 1e-2;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected a number, got '" + value + "'");
  }
}

int parse_int(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const int v = std::stoi(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key, "expected an integer, got '" + value + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError(key, "expected true/false, got '" + value + "'");
}

struct KeyInfo {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
  bool inferred;  // default is an inference rather than a figure-stated value
};

const std::map<std::string, KeyInfo>& key_table() {
  static const std::map<std::string, KeyInfo> table = [] {
    std::map<std::string, KeyInfo> t;
    auto dbl = [&t](const std::string& key, double RunConfig::*field, bool inferred) {
      t[key] = {[field](RunConfig& c, const std::string& k, const std::string& v) {
                  c.*field = parse_double(k, v);
                },
                [field](const RunConfig& c) { return fmt17(c.*field); }, inferred};
    };
    t["experiment"] = {[](RunConfig& c, const std::string&, const std::string& v) {
                         c.experiment = v;
                       },
                       [](const RunConfig& c) { return c.experiment; }, false};
    dbl("geometry.L_PDC_cm", &RunConfig::L_PDC_cm, false);
    dbl("geometry.x_um", &RunConfig::x_um, false);
    dbl("geometry.y_um", &RunConfig::y_um, false);
    dbl("geometry.l_um", &RunConfig::l_um, true);
    dbl("geometry.L_PC1_um", &RunConfig::L_PC1_um, true);
    dbl("geometry.phi1_rad", &RunConfig::phi1_rad, false);
    dbl("geometry.phi2_rad", &RunConfig::phi2_rad, false);
    dbl("dispersion.n_H", &RunConfig::n_H, true);
    dbl("dispersion.n_V", &RunConfig::n_V, true);
    dbl("pump.wavelength_nm", &RunConfig::pump_wavelength_nm, true);
    dbl("pump.bandwidth_rad_per_s", &RunConfig::pump_bandwidth_rad_per_s, true);
    t["pump.monochromatic"] = {[](RunConfig& c, const std::string& k, const std::string& v) {
                                 c.pump_monochromatic = parse_bool(k, v);
                               },
                               [](const RunConfig& c) {
                                 return std::string(c.pump_monochromatic ? "true" : "false");
                               },
                               true};
    t["grid.n_points"] = {[](RunConfig& c, const std::string& k, const std::string& v) {
                            c.grid_n_points = parse_int(k, v);
                          },
                          [](const RunConfig& c) { return std::to_string(c.grid_n_points); },
                          true};
    dbl("grid.half_span_lobes", &RunConfig::grid_half_span_lobes, true);
    dbl("grid.half_span_rad_per_s", &RunConfig::grid_half_span_rad_per_s, true);
    dbl("scan.min_um", &RunConfig::scan_min_um, true);
    dbl("scan.max_um", &RunConfig::scan_max_um, true);
    t["scan.coarse_points"] = {[](RunConfig& c, const std::string& k, const std::string& v) {
                                 c.scan_coarse_points = parse_int(k, v);
                               },
                               [](const RunConfig& c) {
                                 return std::to_string(c.scan_coarse_points);
                               },
                               true};
    dbl("scan.fine_step_um", &RunConfig::scan_fine_step_um, true);
    dbl("scan.fine_window_um", &RunConfig::scan_fine_window_um, true);
    t["scan.components"] = {[](RunConfig& c, const std::string& k, const std::string& v) {
                              c.scan_components = parse_bool(k, v);
                            },
                            [](const RunConfig& c) {
                              return std::string(c.scan_components ? "true" : "false");
                            },
                            true};
    return t;
  }();
  return table;
}

void set_key(RunConfig& config, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw ConfigError(key, "unknown key");
  it->second.set(config, key, value);
  config.explicit_keys.insert(key);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_explicit(const RunConfig& c, const std::string& key) {
  return c.explicit_keys.count(key) > 0;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
    set_key(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate_config(config);
  return config;
}

void apply_override(RunConfig& config, const std::string& key_equals_value) {
  const auto eq = key_equals_value.find('=');
  if (eq == std::string::npos)
    throw ConfigError("", "override must be key=value: '" + key_equals_value + "'");
  set_key(config, trim(key_equals_value.substr(0, eq)), trim(key_equals_value.substr(eq + 1)));
}

void validate_config(const RunConfig& c) {
  static const std::set<std::string> experiments = {"fig3a", "fig3b", "fig4",  "fig5",
                                                    "fig6a", "fig6b", "custom"};
  if (!experiments.count(c.experiment))
    throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
  if (!(c.n_H > 1.0)) throw ConfigError("dispersion.n_H", "refractive index must exceed 1");
  if (!(c.n_V > 1.0)) throw ConfigError("dispersion.n_V", "refractive index must exceed 1");
  if (!(c.pump_wavelength_nm > 0)) throw ConfigError("pump.wavelength_nm", "must be > 0");
  if (c.pump_bandwidth_rad_per_s < 0)
    throw ConfigError("pump.bandwidth_rad_per_s", "must be >= 0");
  if (!c.pump_monochromatic && !(c.pump_bandwidth_rad_per_s > 0))
    throw ConfigError("pump.bandwidth_rad_per_s", "finite-bandwidth pump needs bandwidth > 0");
  if (c.grid_n_points < 2) throw ConfigError("grid.n_points", "must be >= 2");
  if (!(c.grid_half_span_lobes > 0)) throw ConfigError("grid.half_span_lobes", "must be > 0");
  if (c.grid_half_span_rad_per_s < 0)
    throw ConfigError("grid.half_span_rad_per_s", "must be >= 0");
  if (c.n_H == c.n_V && c.grid_half_span_rad_per_s == 0)
    throw ConfigError("grid.half_span_rad_per_s",
                      "required explicitly when n_H == n_V (no phase-matching lobe)");
  if (!(c.L_PDC_cm > 0)) throw ConfigError("geometry.L_PDC_cm", "must be > 0");
  for (const auto& [key, val] : std::map<std::string, double>{{"geometry.x_um", c.x_um},
                                                              {"geometry.y_um", c.y_um},
                                                              {"geometry.l_um", c.l_um},
                                                              {"geometry.L_PC1_um", c.L_PC1_um}})
    if (val < 0) throw ConfigError(key, "must be >= 0");
  if (c.scan_coarse_points < 2) throw ConfigError("scan.coarse_points", "must be >= 2");
  if (c.scan_fine_step_um < 0) throw ConfigError("scan.fine_step_um", "must be >= 0");
  if (c.scan_fine_window_um < 0) throw ConfigError("scan.fine_window_um", "must be >= 0");
  const bool has_min = is_explicit(c, "scan.min_um");
  const bool has_max = is_explicit(c, "scan.max_um");
  if (has_min != has_max)
    throw ConfigError("scan.min_um", "scan.min_um and scan.max_um must be set together");
  if (has_min && !(c.scan_min_um < c.scan_max_um))
    throw ConfigError("scan.min_um", "scan.min_um must be below scan.max_um");
}

std::vector<SeriesSpec> resolve_series(const RunConfig& c) {
  CircuitGeometry base;
  base.L_PDC = c.L_PDC_cm * kCm;
  base.x = c.x_um * kUm;
  base.y = c.y_um * kUm;
  base.l = c.l_um * kUm;
  base.L_PC1 = c.L_PC1_um * kUm;
  base.phi1 = c.phi1_rad;
  base.phi2 = c.phi2_rad;

  // Preset values apply first; explicitly set keys win.
  auto preset = [&](double L_PDC_cm, double x_um, double y_um, double phi1) {
    CircuitGeometry g = base;
    if (!is_explicit(c, "geometry.L_PDC_cm")) g.L_PDC = L_PDC_cm * kCm;
    if (!is_explicit(c, "geometry.x_um")) g.x = x_um * kUm;
    if (!is_explicit(c, "geometry.y_um")) g.y = y_um * kUm;
    if (!is_explicit(c, "geometry.phi1_rad")) g.phi1 = phi1;
    if (!is_explicit(c, "geometry.phi2_rad")) g.phi2 = kPi / 2;
    return g;
  };

  std::vector<SeriesSpec> series;
  if (c.experiment == "fig3a") {
    series.push_back({"phi1_0", preset(2.07, 3810, 5810, 0.0), "total"});
    series.push_back({"phi1_pi2", preset(2.07, 3810, 5810, kPi / 2), "total"});
  } else if (c.experiment == "fig3b") {
    series.push_back({"phi1_3pi8", preset(2.07, 3810, 5810, 3 * kPi / 8), "total"});
    series.push_back({"phi1_pi2", preset(2.07, 3810, 5810, kPi / 2), "total"});
  } else if (c.experiment == "fig4") {
    const CircuitGeometry g = preset(2.07, 3810, 5810, kPi / 4);
    series.push_back({"total", g, "total"});
    series.push_back({"psi1", g, "psi1"});
    series.push_back({"psi2", g, "psi2"});
  } else if (c.experiment == "fig5") {
    for (const auto& [tag, lpdc] : std::vector<std::pair<std::string, double>>{
             {"lpdc_1p035cm", 1.035}, {"lpdc_1p5cm", 1.5}, {"lpdc_3p07cm", 3.07}}) {
      const CircuitGeometry g = preset(lpdc, 3810, 5810, kPi / 4);
      series.push_back({tag + "_total", g, "total"});
      series.push_back({tag + "_psi1", g, "psi1"});
    }
  } else if (c.experiment == "fig6a") {
    series.push_back({"x_45210um", preset(2.07, 45210, 5810, kPi / 4), "total"});
    series.push_back({"x_3810um", preset(6.21, 3810, 5810, kPi / 4), "total"});
  } else if (c.experiment == "fig6b") {
    series.push_back({"y_5810um", preset(2.07, 3810, 5810, kPi / 4), "total"});
    series.push_back({"y_9810um", preset(2.07, 3810, 9810, kPi / 4), "total"});
  } else {  // custom
    series.push_back({"total", base, "total"});
    if (c.scan_components) {
      series.push_back({"psi1", base, "psi1"});
      series.push_back({"psi2", base, "psi2"});
    }
  }
  return series;
}

std::vector<double> make_delay_points(double lo, double hi, int coarse_points,
                                      double fine_center, double fine_half_width,
                                      double fine_step) {
  if (!(hi > lo)) throw std::invalid_argument("make_delay_points: need hi > lo");
  if (coarse_points < 2) throw std::invalid_argument("make_delay_points: need >= 2 points");
  std::vector<double> pts;
  pts.reserve(coarse_points + 64);
  const double step = (hi - lo) / (coarse_points - 1);
  for (int j = 0; j < coarse_points; ++j) pts.push_back(lo + j * step);
  if (fine_half_width > 0 && fine_step > 0) {
    const int m = static_cast<int>(std::floor(fine_half_width / fine_step));
    for (int j = -m; j <= m; ++j) {
      const double p = fine_center + j * fine_step;
      if (p > lo && p < hi) pts.push_back(p);
    }
  }
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  out.reserve(pts.size());
  for (const double p : pts)
    if (out.empty() || p - out.back() > 1e-12 * kUm) out.push_back(p);
  return out;
}

namespace {

struct SeriesPlan {
  SeriesSpec spec;
  FrequencyGrid grid;
  std::vector<double> points;
};

SeriesPlan plan_series(const RunConfig& c, const SeriesSpec& spec, const DispersionModel& disp,
                       const PumpSpec& pump) {
  SeriesPlan plan{spec, {}, {}};
  const double half_span = c.grid_half_span_rad_per_s > 0
                               ? c.grid_half_span_rad_per_s
                               : c.grid_half_span_lobes *
                                     first_sinc_zero(disp, spec.geometry.L_PDC);
  plan.grid = build_grid(pump.omega_p / 2.0, half_span, c.grid_n_points);

  double lo, hi;
  if (is_explicit(c, "scan.min_um")) {
    lo = c.scan_min_um * kUm;
    hi = c.scan_max_um * kUm;
  } else {
    const auto [d1, d2] = oracle::dip_positions(spec.geometry, disp);
    const double hw =
        std::abs(disp.v_V() / disp.v_H() - 1.0) * spec.geometry.L_PDC / 2.0 + 100 * kUm;
    lo = std::min(d1, d2) - hw;
    hi = std::max(d1, d2) + hw;
  }
  const bool fringes = std::abs(std::sin(spec.geometry.phi1) * std::cos(spec.geometry.phi1)) >
                       1e-12;
  double fine_hw = 0, fine_step = 0, fine_center = 0;
  if (fringes) {
    fine_center = oracle::delay_compensation(spec.geometry, disp);
    fine_hw = c.scan_fine_window_um * kUm;
    fine_step = c.scan_fine_step_um > 0
                    ? c.scan_fine_step_um * kUm
                    : oracle::fringe_period(spec.geometry, disp, pump) / 8.0;
  }
  plan.points = make_delay_points(lo, hi, c.scan_coarse_points, fine_center, fine_hw, fine_step);
  return plan;
}

void write_csv(const std::string& path, const ScanResult& scan) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "delta_l_um,p_vv,p_hh,p_hv,p_vh,p_bunch_1,p_bunch_2\n";
  for (size_t j = 0; j < scan.records.size(); ++j) {
    const CoincidenceRecord& r = scan.records[j];
    out << fmt17(scan.delta_l_values[j] / kUm) << ',' << fmt17(r.p_vv) << ',' << fmt17(r.p_hh)
        << ',' << fmt17(r.p_hv) << ',' << fmt17(r.p_vh) << ',' << fmt17(r.p_bunch_1) << ','
        << fmt17(r.p_bunch_2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const std::string& path, const RunConfig& c,
                    const std::vector<SeriesPlan>& plans,
                    const std::vector<std::string>& csv_files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "# run manifest (version " << kVersion << ")\n";
  out << "# reproduce with: simulate --config <this file> --out <dir>\n";
  out << "experiment = " << c.experiment << "\n";
  for (const auto& [key, info] : key_table()) {
    if (key == "experiment" || !is_explicit(c, key)) continue;
    out << key << " = " << info.get(c) << "\n";
  }
  out << "# resolved parameters:\n";
  for (const auto& [key, info] : key_table()) {
    if (key == "experiment" || is_explicit(c, key)) continue;
    const bool inferred = info.inferred || c.experiment == "custom";
    out << "#   " << key << " = " << info.get(c) << " inferred=" << (inferred ? "true" : "false")
        << "\n";
  }
  for (size_t s = 0; s < plans.size(); ++s) {
    const auto& p = plans[s];
    out << "# series " << csv_files[s] << ": part=" << p.spec.part
        << " L_PDC_cm=" << fmt17(p.spec.geometry.L_PDC / kCm)
        << " x_um=" << fmt17(p.spec.geometry.x / kUm)
        << " y_um=" << fmt17(p.spec.geometry.y / kUm)
        << " l_um=" << fmt17(p.spec.geometry.l / kUm)
        << " phi1_rad=" << fmt17(p.spec.geometry.phi1)
        << " phi2_rad=" << fmt17(p.spec.geometry.phi2) << " grid_n=" << p.grid.n_points
        << " grid_half_span_rad_per_s=" << fmt17(p.grid.half_span)
        << " points=" << p.points.size() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

RunOutput run(const RunConfig& config, const std::string& out_dir) {
  validate_config(config);
  const DispersionModel disp(config.n_H, config.n_V);
  PumpSpec pump;
  pump.omega_p = 2.0 * kPi * kSpeedOfLight / (config.pump_wavelength_nm * 1e-9);
  pump.bandwidth = config.pump_bandwidth_rad_per_s;
  pump.monochromatic = config.pump_monochromatic;
  pump.validate();

  std::filesystem::create_directories(out_dir);

  std::vector<SeriesPlan> plans;
  for (const SeriesSpec& spec : resolve_series(config))
    plans.push_back(plan_series(config, spec, disp, pump));

  RunOutput output;
  for (const SeriesPlan& plan : plans) {
    ScanResult scan;
    if (plan.spec.part == "total") {
      scan = scan_delay(plan.spec.geometry, disp, pump, plan.grid, plan.points);
    } else {
      const ComponentPart part =
          plan.spec.part == "psi1" ? ComponentPart::Psi1Only : ComponentPart::Psi2Only;
      scan = scan_component(plan.spec.geometry, disp, pump, plan.grid, plan.points, part);
    }
    const std::string name = config.experiment + "_" + plan.spec.name + ".csv";
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    write_csv(path, scan);
    output.csv_files.push_back(name);
  }

  const std::string manifest = (std::filesystem::path(out_dir) / "manifest").string();
  write_manifest(manifest, config, plans, output.csv_files);
  output.manifest_file = "manifest";
  return output;
}

}  // namespace homsim
