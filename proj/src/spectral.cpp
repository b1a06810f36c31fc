#include "homsim/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "homsim/phase.hpp"

namespace homsim {

namespace {

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace

bool FrequencyGrid::same_sampling_as(const FrequencyGrid& other) const {
  return n_points == other.n_points && center == other.center && half_span == other.half_span;
}

FrequencyGrid build_grid(double center, double half_span, int n_points) {
  if (n_points < 2) throw std::invalid_argument("build_grid: n_points must be >= 2");
  if (!(half_span > 0.0)) throw std::invalid_argument("build_grid: half_span must be > 0");
  if (!(center > 0.0)) throw std::invalid_argument("build_grid: center must be > 0");

  FrequencyGrid g;
  g.center = center;
  g.half_span = half_span;
  g.n_points = n_points;
  g.quadrature = "trapezoid";
  g.nodes.resize(n_points);
  g.weights.resize(n_points);
  const double half_step = half_span / (n_points - 1);
  for (int j = 0; j < n_points; ++j) {
    // offsets exactly antisymmetric: (2j - (n-1)) * half_step
    g.nodes[j] = center + static_cast<double>(2 * j - (n_points - 1)) * half_step;
    g.weights[j] = 2.0 * half_step;
  }
  g.weights[0] *= 0.5;
  g.weights[n_points - 1] *= 0.5;
  return g;
}

DispersionModel::DispersionModel(double nH, double nV) : n_H(nH), n_V(nV) {
  if (!(n_H > 1.0) || !(n_V > 1.0))
    throw std::invalid_argument("DispersionModel: refractive index must exceed 1");
}

PumpSpec PumpSpec::monochromatic_from_wavelength(double vacuum_wavelength_m) {
  PumpSpec p;
  p.omega_p = 2.0 * kPi * kSpeedOfLight / vacuum_wavelength_m;
  p.bandwidth = 0.0;
  p.monochromatic = true;
  return p;
}

void PumpSpec::validate() const {
  if (!(omega_p > 0.0)) throw std::invalid_argument("PumpSpec: omega_p must be > 0");
  if (bandwidth < 0.0) throw std::invalid_argument("PumpSpec: bandwidth must be >= 0");
  if (!monochromatic && !(bandwidth > 0.0))
    throw std::invalid_argument("PumpSpec: finite-bandwidth pump needs bandwidth > 0");
}

double phase_mismatch(double omega_s, double omega_i, const DispersionModel& disp,
                      const PumpSpec& pump) {
  if (!(omega_s > 0.0) || !(omega_i > 0.0))
    throw std::invalid_argument("phase_mismatch: frequencies must be positive");
  const double w0 = pump.omega_p / 2.0;
  return (omega_s - w0) / disp.v_H() + (omega_i - w0) / disp.v_V();
}

double first_sinc_zero(const DispersionModel& disp, double L_PDC) {
  const double tau = std::abs(disp.inverse_velocity_mismatch());
  if (tau == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * kPi / (L_PDC * tau);
}

JointSpectralAmplitude build_jsa(const FrequencyGrid& grid_s, const FrequencyGrid& grid_i,
                                 const PumpSpec& pump, const DispersionModel& disp,
                                 double L_PDC) {
  if (!(L_PDC > 0.0)) throw std::invalid_argument("build_jsa: L_PDC must be > 0");
  pump.validate();
  const double w0 = pump.omega_p / 2.0;
  for (const FrequencyGrid* g : {&grid_s, &grid_i}) {
    if (std::abs(g->center - w0) > 1e-9 * pump.omega_p)
      throw std::invalid_argument("build_jsa: grids must be centered at omega_p/2");
  }

  JointSpectralAmplitude jsa;
  jsa.grid_s = grid_s;
  jsa.grid_i = grid_i;
  const int ns = grid_s.n_points;
  const int ni = grid_i.n_points;
  jsa.values.setZero(ns, ni);

  const double cell = 0.5 * std::min(grid_s.step(), grid_i.step());
  for (int j = 0; j < ns; ++j) {
    for (int k = 0; k < ni; ++k) {
      const double ws = grid_s.nodes[j];
      const double wi = grid_i.nodes[k];
      double envelope;
      if (pump.monochromatic) {
        envelope = std::abs(ws + wi - pump.omega_p) < cell ? 1.0 : 0.0;
        if (envelope == 0.0) continue;
      } else {
        const double d = ws + wi - pump.omega_p;
        envelope = std::exp(-d * d / (4.0 * pump.bandwidth * pump.bandwidth));
      }
      const double dk = phase_mismatch(ws, wi, disp, pump);
      const double arg = dk * L_PDC / 2.0;
      jsa.values(j, k) = envelope * sinc(arg) * unit_phase(static_cast<PhaseArg>(arg));
    }
  }

  const double nu1 = first_sinc_zero(disp, L_PDC);
  if (std::min(grid_s.half_span, grid_i.half_span) < nu1)
    jsa.warnings.push_back("grid narrower than the main phase-matching lobe");

  const double norm = weighted_l2_norm(jsa);
  if (!(norm > 0.0)) throw std::invalid_argument("build_jsa: amplitude vanishes on this grid");
  jsa.values /= norm;
  return jsa;
}

double weighted_l2_norm(const JointSpectralAmplitude& jsa) {
  double s = 0.0;
  for (int j = 0; j < jsa.values.rows(); ++j)
    for (int k = 0; k < jsa.values.cols(); ++k)
      s += jsa.grid_s.weights[j] * jsa.grid_i.weights[k] * std::norm(jsa.values(j, k));
  return std::sqrt(s);
}

SchmidtSpectrum schmidt_decompose(const JointSpectralAmplitude& jsa) {
  if (!jsa.values.allFinite())
    throw std::runtime_error("schmidt_decompose: amplitude has non-finite entries");

  // Singular values of diag(sqrt(w_s)) F diag(sqrt(w_i)) via the Hermitian
  // Gram matrix; only the values are needed.
  Eigen::MatrixXcd m = jsa.values;
  for (int j = 0; j < m.rows(); ++j) m.row(j) *= std::sqrt(jsa.grid_s.weights[j]);
  for (int k = 0; k < m.cols(); ++k) m.col(k) *= std::sqrt(jsa.grid_i.weights[k]);

  const bool wide = m.rows() >= m.cols();
  Eigen::MatrixXcd gram = wide ? Eigen::MatrixXcd(m.adjoint() * m)
                               : Eigen::MatrixXcd(m * m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram, Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);

  std::sort(ev.data(), ev.data() + ev.size(), std::greater<double>());
  const double total = ev.sum();
  if (!(total > 0.0)) throw std::runtime_error("schmidt_decompose: zero amplitude");

  SchmidtSpectrum out;
  out.coefficients = (ev / total).cwiseSqrt();
  double quartic = 0.0;
  for (int j = 0; j < ev.size(); ++j) {
    const double p = ev[j] / total;
    quartic += p * p;
  }
  out.schmidt_number = 1.0 / quartic;
  return out;
}

}  // namespace homsim
