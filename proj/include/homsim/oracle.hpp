#pragma once

#include <Eigen/Core>
#include <utility>

#include "homsim/circuit.hpp"

namespace homsim {
namespace oracle {

/// Closed-form VV amplitudes just before the final splitter (phi2 = pi/2,
/// ideal PBS), split into the cross-channel part psi1 and the same-channel
/// part psi2. Ground truth for the matrix engine's phase conventions.
struct BeforeBsAmplitudes {
  Eigen::MatrixXcd psi1_2V1V;  // signal in 2V, idler in 1V (prefactor sin^2 phi1)
  Eigen::MatrixXcd psi1_1V2V;  // signal in 1V, idler in 2V (prefactor cos^2 phi1)
  Eigen::MatrixXcd psi2_1V1V;  // both in channel 1 (prefactor sin phi1 cos phi1)
  Eigen::MatrixXcd psi2_2V2V;  // both in channel 2
};

/// Pointwise closed forms; jsa_value is F(w_s, w_i).
/// Returns {block (2V,1V), block (1V,2V)}.
std::pair<Complex, Complex> psi1_amplitude(double omega_s, double omega_i, Complex jsa_value,
                                           const CircuitGeometry& geom,
                                           const DispersionModel& disp);
/// Returns {block (1V,1V), block (2V,2V)}.
std::pair<Complex, Complex> psi2_amplitude(double omega_s, double omega_i, Complex jsa_value,
                                           const CircuitGeometry& geom,
                                           const DispersionModel& disp);

BeforeBsAmplitudes before_bs_amplitudes(const JointSpectralAmplitude& jsa,
                                        const CircuitGeometry& geom,
                                        const DispersionModel& disp);

/// Reduced single-photon channel density matrix, basis [channel 2, channel 1]:
/// diagonal (sin^2 phi1, cos^2 phi1), off-diagonal the |F|^2-weighted integral
/// of (i/4) sin(4 phi1) exp[i w_s (dl/v_V - (l+y)(1/v_H - 1/v_V))].
Eigen::Matrix2cd reduced_density_matrix(double phi1, const CircuitGeometry& geom,
                                        const DispersionModel& disp,
                                        const JointSpectralAmplitude& jsa);

/// K = 1 / (cos^4 phi1 + sin^4 phi1 + sin^2(4 phi1)/8), valid at the
/// compensated delay.
double schmidt_number_spatial(double phi1);

/// K = 1/Tr(rho_r^2) for arbitrary delay.
double schmidt_number_general(double phi1, const CircuitGeometry& geom,
                              const DispersionModel& disp, const JointSpectralAmplitude& jsa);

/// Period of the double-frequency fringes in delta_l: 2 pi v_V / omega_p.
double fringe_period(const CircuitGeometry& geom, const DispersionModel& disp,
                     const PumpSpec& pump);

/// Delay values of the two coincidence dips:
///   (v_V/v_H - 1)(l + y + (x + L_PDC/2)) and (v_V/v_H - 1)(l + y - (x + L_PDC/2)).
std::pair<double, double> dip_positions(const CircuitGeometry& geom,
                                        const DispersionModel& disp);

/// delta_l = (v_V/v_H - 1)(l + y), the midpoint of the two dips.
double delay_compensation(const CircuitGeometry& geom, const DispersionModel& disp);

}  // namespace oracle
}  // namespace homsim
