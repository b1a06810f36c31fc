#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "homsim/constants.hpp"

namespace homsim {

/// Uniform angular-frequency grid with quadrature weights.
struct FrequencyGrid {
  double center = 0.0;     // rad/s
  double half_span = 0.0;  // rad/s
  int n_points = 0;
  Eigen::VectorXd nodes;    // strictly increasing, symmetric about center
  Eigen::VectorXd weights;  // trapezoid weights, sum = 2*half_span
  std::string quadrature;   // rule used to build the weights

  double step() const { return 2.0 * half_span / (n_points - 1); }
  bool same_sampling_as(const FrequencyGrid& other) const;
};

FrequencyGrid build_grid(double center, double half_span, int n_points);

/// Constant refractive indices for the two guided polarizations, evaluated at
/// the degeneracy frequency.
struct DispersionModel {
  double n_H;
  double n_V;

  DispersionModel(double nH, double nV);
  double v_H() const { return kSpeedOfLight / n_H; }
  double v_V() const { return kSpeedOfLight / n_V; }
  /// 1/v_H - 1/v_V, the walk-off per unit length (s/m).
  double inverse_velocity_mismatch() const { return (n_H - n_V) / kSpeedOfLight; }
};

struct PumpSpec {
  double omega_p = 0.0;    // rad/s
  double bandwidth = 0.0;  // Gaussian std of the spectral amplitude, rad/s
  bool monochromatic = true;

  static PumpSpec monochromatic_from_wavelength(double vacuum_wavelength_m);
  void validate() const;
};

/// Normalized two-photon amplitude F(w_s, w_i) on a grid pair.
struct JointSpectralAmplitude {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::MatrixXcd values;  // n_s x n_i
  std::vector<std::string> warnings;
};

/// Linearized collinear phase mismatch of the degenerate type-II process,
/// with poling absorbing the constant term:
///   dk = (w_s - w_p/2)/v_H + (w_i - w_p/2)/v_V.
double phase_mismatch(double omega_s, double omega_i, const DispersionModel& disp,
                      const PumpSpec& pump);

/// F ~ pump envelope * sinc(dk L/2) * exp(i dk L/2), unit weighted L2 norm.
/// The exp(i dk L/2) factor places the effective emission point at the section
/// center; the first free-propagation segment starts at the output facet.
JointSpectralAmplitude build_jsa(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i,
                                 const PumpSpec& pump, const DispersionModel& disp,
                                 double L_PDC);

double weighted_l2_norm(const JointSpectralAmplitude& jsa);

struct SchmidtSpectrum {
  Eigen::VectorXd coefficients;  // non-increasing, squares sum to 1
  double schmidt_number = 1.0;   // 1 / sum coefficients^4
};

/// Singular values of sqrt(w_s) F sqrt(w_i), normalized.
SchmidtSpectrum schmidt_decompose(const JointSpectralAmplitude& jsa);

/// Frequency of the first sinc zero along the antidiagonal (rad/s), used to
/// size grids; infinite without birefringence.
double first_sinc_zero(const DispersionModel& disp, double L_PDC);

}  // namespace homsim
