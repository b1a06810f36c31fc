#include "homsim/oracle.hpp"

#include <cmath>

#include "homsim/phase.hpp"

namespace homsim {
namespace oracle {

namespace {

struct PathTimes {
  PhaseArg x_H, x_V;        // source facet -> PC1, per polarization
  PhaseArg ch1_H;           // PC1 -> BS staying in channel 1 as H: (y + l)/v_H
  PhaseArg ch2_V;           // PC1 -> BS through channel 2 as V: (y + l + dl)/v_V
  PhaseArg ch1_sum_H;       // (l + y)/v_H for sum-frequency factors
  PhaseArg ch1_sum_V;       // (l + y)/v_V
  PhaseArg delay_V;         // dl/v_V
};

PathTimes path_times(const CircuitGeometry& g, const DispersionModel& d) {
  PathTimes t;
  t.x_H = optical_time(g.x, d.n_H);
  t.x_V = optical_time(g.x, d.n_V);
  t.ch1_H = optical_time(g.y, d.n_H) + optical_time(g.l, d.n_H);
  t.ch2_V = optical_time(g.y, d.n_V) + optical_time(g.l, d.n_V) + optical_time(g.delta_l, d.n_V);
  t.ch1_sum_H = t.ch1_H;
  t.ch1_sum_V = optical_time(g.y, d.n_V) + optical_time(g.l, d.n_V);
  t.delay_V = optical_time(g.delta_l, d.n_V);
  return t;
}

}  // namespace

std::pair<Complex, Complex> psi1_amplitude(double omega_s, double omega_i, Complex jsa_value,
                                           const CircuitGeometry& geom,
                                           const DispersionModel& disp) {
  const PathTimes t = path_times(geom, disp);
  const PhaseArg ws = omega_s;
  const PhaseArg wi = omega_i;
  const double s2 = std::sin(geom.phi1) * std::sin(geom.phi1);
  const double c2 = std::cos(geom.phi1) * std::cos(geom.phi1);
  const Complex pre = kImag * jsa_value * unit_phase(ws * t.x_H + wi * t.x_V);
  // chi(a, b) = exp[i(a (l+dl+y)/v_V + b (l+y)/v_H)]
  const Complex chi_si = unit_phase(ws * t.ch2_V + wi * t.ch1_H);
  const Complex chi_is = unit_phase(wi * t.ch2_V + ws * t.ch1_H);
  return {pre * chi_si * s2, -pre * chi_is * c2};
}

std::pair<Complex, Complex> psi2_amplitude(double omega_s, double omega_i, Complex jsa_value,
                                           const CircuitGeometry& geom,
                                           const DispersionModel& disp) {
  const PathTimes t = path_times(geom, disp);
  const PhaseArg ws = omega_s;
  const PhaseArg wi = omega_i;
  const double sc = std::sin(geom.phi1) * std::cos(geom.phi1);
  const Complex pre = -jsa_value * sc * unit_phase(ws * t.x_H + wi * t.x_V);
  const Complex phi1f = unit_phase((ws + wi) * t.ch1_sum_H);
  const Complex phi2f = unit_phase((ws + wi) * t.ch1_sum_V + (ws + wi) * t.delay_V);
  return {pre * phi1f, pre * phi2f};
}

BeforeBsAmplitudes before_bs_amplitudes(const JointSpectralAmplitude& jsa,
                                        const CircuitGeometry& geom,
                                        const DispersionModel& disp) {
  geom.validate();
  const int ns = jsa.grid_s.n_points;
  const int ni = jsa.grid_i.n_points;
  BeforeBsAmplitudes out;
  out.psi1_2V1V.setZero(ns, ni);
  out.psi1_1V2V.setZero(ns, ni);
  out.psi2_1V1V.setZero(ns, ni);
  out.psi2_2V2V.setZero(ns, ni);
  for (int j = 0; j < ns; ++j) {
    for (int k = 0; k < ni; ++k) {
      const Complex f = jsa.values(j, k);
      if (f == Complex(0.0, 0.0)) continue;
      const double ws = jsa.grid_s.nodes[j];
      const double wi = jsa.grid_i.nodes[k];
      const auto [a21, a12] = psi1_amplitude(ws, wi, f, geom, disp);
      const auto [a11, a22] = psi2_amplitude(ws, wi, f, geom, disp);
      out.psi1_2V1V(j, k) = a21;
      out.psi1_1V2V(j, k) = a12;
      out.psi2_1V1V(j, k) = a11;
      out.psi2_2V2V(j, k) = a22;
    }
  }
  return out;
}

Eigen::Matrix2cd reduced_density_matrix(double phi1, const CircuitGeometry& geom,
                                        const DispersionModel& disp,
                                        const JointSpectralAmplitude& jsa) {
  const double s2 = std::sin(phi1) * std::sin(phi1);
  const double c2 = std::cos(phi1) * std::cos(phi1);

  // theta = dl/v_V - (l+y)(1/v_H - 1/v_V); the off-diagonal depends on w_s only.
  const PhaseArg theta = optical_time(geom.delta_l, disp.n_V) -
                         (optical_time(geom.l, disp.n_H) + optical_time(geom.y, disp.n_H)) +
                         (optical_time(geom.l, disp.n_V) + optical_time(geom.y, disp.n_V));
  Complex integral(0.0, 0.0);
  for (int j = 0; j < jsa.grid_s.n_points; ++j) {
    double row = 0.0;
    for (int k = 0; k < jsa.grid_i.n_points; ++k)
      row += jsa.grid_i.weights[k] * std::norm(jsa.values(j, k));
    integral += jsa.grid_s.weights[j] * row *
                unit_phase(static_cast<PhaseArg>(jsa.grid_s.nodes[j]) * theta);
  }
  const Complex off = kImag * 0.25 * std::sin(4.0 * phi1) * integral;

  Eigen::Matrix2cd rho;
  rho(0, 0) = s2;   // traced photon in channel 2 (converted branch)
  rho(1, 1) = c2;   // channel 1
  rho(0, 1) = off;
  rho(1, 0) = std::conj(off);
  return rho;
}

double schmidt_number_spatial(double phi1) {
  const double s2phi = std::sin(2.0 * phi1);
  const double s4phi = std::sin(4.0 * phi1);
  // cos^4 + sin^4 = 1 - sin^2(2 phi)/2
  return 1.0 / (1.0 - 0.5 * s2phi * s2phi + 0.125 * s4phi * s4phi);
}

double schmidt_number_general(double phi1, const CircuitGeometry& geom,
                              const DispersionModel& disp,
                              const JointSpectralAmplitude& jsa) {
  const Eigen::Matrix2cd rho = reduced_density_matrix(phi1, geom, disp, jsa);
  const double purity = (rho * rho).trace().real();
  return 1.0 / purity;
}

double fringe_period(const CircuitGeometry&, const DispersionModel& disp, const PumpSpec& pump) {
  return 2.0 * kPi * disp.v_V() / pump.omega_p;
}

std::pair<double, double> dip_positions(const CircuitGeometry& geom,
                                        const DispersionModel& disp) {
  const double factor = disp.v_V() / disp.v_H() - 1.0;
  const double reach = geom.x + geom.L_PDC / 2.0;
  return {factor * (geom.l + geom.y + reach), factor * (geom.l + geom.y - reach)};
}

double delay_compensation(const CircuitGeometry& geom, const DispersionModel& disp) {
  return (disp.v_V() / disp.v_H() - 1.0) * (geom.l + geom.y);
}

}  // namespace oracle
}  // namespace homsim
