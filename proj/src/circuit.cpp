#include "homsim/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include "homsim/phase.hpp"

namespace homsim {

void CircuitGeometry::validate() const {
  if (L_PDC < 0 || x < 0 || y < 0 || l < 0 || L_PC1 < 0)
    throw std::invalid_argument("CircuitGeometry: lengths must be non-negative");
  if (delta_l < 0 && !(std::abs(delta_l) < l))
    throw std::invalid_argument("CircuitGeometry: negative delta_l must satisfy |delta_l| < l");
}

Matrix4c pc_matrix(double phi, int channel) {
  if (channel != 1 && channel != 2) throw std::invalid_argument("pc_matrix: channel must be 1 or 2");
  Matrix4c m = Matrix4c::Identity();
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  const int h = mode_index(channel, Pol::H);
  const int v = mode_index(channel, Pol::V);
  m(h, h) = c;
  m(h, v) = -s;
  m(v, h) = s;
  m(v, v) = c;
  return m;
}

Matrix4c pbs_matrix() {
  Matrix4c m = Matrix4c::Zero();
  m(k1H, k1H) = 1.0;
  m(k2H, k2H) = 1.0;
  m(k1V, k2V) = -kImag;
  m(k2V, k1V) = -kImag;
  return m;
}

Matrix4c bs_matrix() {
  Matrix4c m = Matrix4c::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  for (int p = 0; p < 2; ++p) {
    m(k1H + p, k1H + p) = r;
    m(k1H + p, k2H + p) = kImag * r;
    m(k2H + p, k1H + p) = kImag * r;
    m(k2H + p, k2H + p) = r;
  }
  return m;
}

Matrix4c fp_matrix(double len_ch1, double len_ch2, const DispersionModel& disp, double omega) {
  if (len_ch1 < 0 || len_ch2 < 0) throw std::invalid_argument("fp_matrix: lengths must be >= 0");
  Matrix4c m = Matrix4c::Zero();
  const PhaseArg w = static_cast<PhaseArg>(omega);
  m(k1H, k1H) = unit_phase(w * optical_time(len_ch1, disp.n_H));
  m(k1V, k1V) = unit_phase(w * optical_time(len_ch1, disp.n_V));
  m(k2H, k2H) = unit_phase(w * optical_time(len_ch2, disp.n_H));
  m(k2V, k2V) = unit_phase(w * optical_time(len_ch2, disp.n_V));
  return m;
}

namespace {

// Channel-2 excess path; the excess may be negative (channel 2 shorter).
Matrix4c delay_factor(double excess, const DispersionModel& disp, double omega) {
  Matrix4c m = Matrix4c::Identity();
  const PhaseArg w = static_cast<PhaseArg>(omega);
  m(k2H, k2H) = unit_phase(w * optical_time(excess, disp.n_H));
  m(k2V, k2V) = unit_phase(w * optical_time(excess, disp.n_V));
  return m;
}

Matrix4c before_bs_at(double omega, const CircuitGeometry& g, const DispersionModel& d) {
  // The delay excess is a separate diagonal factor so its phase argument is
  // accumulated independently of l (matches the closed forms' bookkeeping).
  Matrix4c u = pc_matrix(g.phi1, 1) * fp_matrix(g.x, g.x, d, omega);
  u = pbs_matrix() * fp_matrix(g.y, g.y, d, omega) * u;
  u = delay_factor(g.delta_l, d, omega) * fp_matrix(g.l, g.l, d, omega) * u;
  u = pc_matrix(g.phi2, 1) * u;
  return u;
}

}  // namespace

TransferOperator compose_full(const CircuitGeometry& geom, const DispersionModel& disp) {
  geom.validate();
  const Matrix4c bs = bs_matrix();
  return TransferOperator(
      [geom, disp, bs](double omega) { return Matrix4c(bs * before_bs_at(omega, geom, disp)); });
}

TransferOperator compose_before_bs(const CircuitGeometry& geom, const DispersionModel& disp) {
  geom.validate();
  return TransferOperator(
      [geom, disp](double omega) { return before_bs_at(omega, geom, disp); });
}

void BiphotonState::validate_shape() const {
  for (const auto& row : blocks)
    for (const auto& b : row)
      if (b.rows() != grid_s.n_points || b.cols() != grid_i.n_points)
        throw std::invalid_argument("BiphotonState: block shape does not match grids");
}

BiphotonState init_state(const JointSpectralAmplitude& jsa) {
  BiphotonState st;
  st.grid_s = jsa.grid_s;
  st.grid_i = jsa.grid_i;
  for (auto& row : st.blocks)
    for (auto& b : row) b.setZero(jsa.grid_s.n_points, jsa.grid_i.n_points);
  st.blocks[k1H][k1V] = jsa.values;
  return st;
}

BiphotonState propagate(const BiphotonState& state, const TransferOperator& op) {
  state.validate_shape();
  const int ns = state.grid_s.n_points;
  const int ni = state.grid_i.n_points;

  std::vector<Matrix4c> us(ns), ui;
  for (int j = 0; j < ns; ++j) us[j] = op.evaluate(state.grid_s.nodes[j]);
  const bool same = state.grid_s.same_sampling_as(state.grid_i);
  if (!same) {
    ui.resize(ni);
    for (int k = 0; k < ni; ++k) ui[k] = op.evaluate(state.grid_i.nodes[k]);
  }

  BiphotonState out;
  out.grid_s = state.grid_s;
  out.grid_i = state.grid_i;
  for (auto& row : out.blocks)
    for (auto& b : row) b.setZero(ns, ni);

  Matrix4c a, ap;
  for (int j = 0; j < ns; ++j) {
    for (int k = 0; k < ni; ++k) {
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) a(m, n) = state.blocks[m][n](j, k);
      ap = us[j] * a * (same ? us[k] : ui[k]).transpose();
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) out.blocks[m][n](j, k) = ap(m, n);
    }
  }
  return out;
}

}  // namespace homsim
