#pragma once

#include <string>
#include <vector>

#include "homsim/circuit.hpp"

namespace homsim {

struct CoincidenceRecord {
  double p_vv = 0.0;
  double p_hh = 0.0;
  double p_hv = 0.0;  // detector b: H, detector c: V
  double p_vh = 0.0;
  double p_bunch_1 = 0.0;
  double p_bunch_2 = 0.0;

  double sum() const { return p_vv + p_hh + p_hv + p_vh + p_bunch_1 + p_bunch_2; }
};

/// P = sum w_b w_c |A[(1,pol_b),(2,pol_c)](wb,wc) + A[(2,pol_c),(1,pol_b)](wc,wb)|^2.
double coincidence_probability(const BiphotonState& state, Pol pol_b, Pol pol_c);

/// Both photons in the given channel, summed over polarization pairs, with the
/// 1/2 same-mode normalization that makes the six probabilities sum to the
/// squared state norm.
double bunching_probability(const BiphotonState& state, int channel);

double total_probability(const BiphotonState& state);

CoincidenceRecord coincidence_record(const BiphotonState& state);

enum class ComponentPart { Psi1Only, Psi2Only };

/// Zero every block except the cross-channel VV pair (Psi1Only: (1V,2V) and
/// (2V,1V)) or the same-channel VV pair (Psi2Only: (1V,1V) and (2V,2V)).
BiphotonState project_component(const BiphotonState& before_bs, ComponentPart part);

struct ScanMetadata {
  CircuitGeometry geometry;  // template; delta_l varies per point
  DispersionModel dispersion{2.15, 2.21};
  PumpSpec pump;
  double grid_center = 0.0;
  double grid_half_span = 0.0;
  int grid_n = 0;
  std::string part = "total";
  std::vector<std::string> warnings;
};

struct ScanResult {
  std::vector<double> delta_l_values;  // m, strictly increasing
  std::vector<CoincidenceRecord> records;
  ScanMetadata metadata;
};

/// For each delta_l: build the circuit, propagate the source state, record the
/// six probabilities. Points are independent; any invalid geometry aborts with
/// the scan point identified.
ScanResult scan_delay(const CircuitGeometry& geom_template, const DispersionModel& disp,
                      const PumpSpec& pump, const FrequencyGrid& grid,
                      const std::vector<double>& delta_l_values);

/// As scan_delay, but the state is projected onto one wavefunction component
/// before the final splitter; splitter and detection act on that part alone.
ScanResult scan_component(const CircuitGeometry& geom_template, const DispersionModel& disp,
                          const PumpSpec& pump, const FrequencyGrid& grid,
                          const std::vector<double>& delta_l_values, ComponentPart part);

}  // namespace homsim
