#pragma once

#include <Eigen/Core>
#include <array>
#include <functional>

#include "homsim/spectral.hpp"

namespace homsim {

enum class Pol { H, V };

/// Canonical mode ordering used for all 4x4 matrices and state tensors.
enum Mode : int { k1H = 0, k1V = 1, k2H = 2, k2V = 3 };

inline int mode_index(int channel, Pol pol) {
  return (channel - 1) * 2 + (pol == Pol::V ? 1 : 0);
}

using Matrix4c = Eigen::Matrix4cd;

/// All lengths in meters, angles in radians. x runs from the source output
/// facet to the center of the first converter (converters are thin elements;
/// their physical length is absorbed into the adjacent segments, so the
/// default x equals L_PC1/2). delta_l is the excess length of channel 2.
struct CircuitGeometry {
  double L_PDC = 0.0207;
  double x = 3810e-6;
  double y = 5810e-6;
  double l = 10000e-6;
  double delta_l = 0.0;
  double L_PC1 = 7620e-6;
  double phi1 = 0.0;
  double phi2 = kPi / 2;

  void validate() const;  // throws std::invalid_argument
  CircuitGeometry with_delta_l(double dl) const {
    CircuitGeometry g = *this;
    g.delta_l = dl;
    return g;
  }
};

/// Polarization rotation by phi in one channel: on (H,V) amplitudes applies
/// [[cos phi, -sin phi], [sin phi, cos phi]]; identity on the other channel.
Matrix4c pc_matrix(double phi, int channel);

/// H transmits, V crosses channels with phase -i (fixed by the closed-form
/// equivalence contract).
Matrix4c pbs_matrix();

/// Balanced polarization-preserving splitter, (1/sqrt2)[[1,i],[i,1]] on the
/// channel index.
Matrix4c bs_matrix();

/// Free propagation: diagonal exp(i w n_pol len_ch / c) per mode.
Matrix4c fp_matrix(double len_ch1, double len_ch2, const DispersionModel& disp,
                   double omega);

/// Frequency-dependent 4x4 unitary; evaluated lazily per node.
class TransferOperator {
 public:
  explicit TransferOperator(std::function<Matrix4c(double)> eval) : eval_(std::move(eval)) {}
  Matrix4c evaluate(double omega) const { return eval_(omega); }

 private:
  std::function<Matrix4c(double)> eval_;
};

/// Full chain BS * PC2 * FP(l, l+dl) * PBS * FP(y,y) * PC1 * FP(x,x).
/// The second converter sits at the channel-1 output immediately before the
/// final splitter (the last free segment has zero length), so channel 1
/// contributes l and channel 2 contributes l+dl of path after the PBS.
TransferOperator compose_full(const CircuitGeometry& geom, const DispersionModel& disp);

/// Same chain without the final splitter.
TransferOperator compose_before_bs(const CircuitGeometry& geom, const DispersionModel& disp);

/// Two-photon amplitude tensor A[mode_s][mode_i](w_s, w_i).
struct BiphotonState {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  std::array<std::array<Eigen::MatrixXcd, 4>, 4> blocks;

  void validate_shape() const;  // throws on grid/block mismatch
};

/// Pair state of the source: support only on (1H, 1V).
BiphotonState init_state(const JointSpectralAmplitude& jsa);

/// A'[m',n'](w_s,w_i) = sum_{m,n} U(w_s)[m',m] U(w_i)[n',n] A[m,n](w_s,w_i).
BiphotonState propagate(const BiphotonState& state, const TransferOperator& op);

}  // namespace homsim
