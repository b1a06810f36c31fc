#include "homsim/detection.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace homsim {

namespace {

void require_square(const BiphotonState& st) {
  st.validate_shape();
  if (!st.grid_s.same_sampling_as(st.grid_i))
    throw std::invalid_argument("detection: signal and idler grids must coincide");
}

}  // namespace

double coincidence_probability(const BiphotonState& state, Pol pol_b, Pol pol_c) {
  require_square(state);
  const int m1 = mode_index(1, pol_b);
  const int m2 = mode_index(2, pol_c);
  const auto& a12 = state.blocks[m1][m2];
  const auto& a21 = state.blocks[m2][m1];
  const auto& w = state.grid_s.weights;
  double p = 0.0;
  for (int j = 0; j < state.grid_s.n_points; ++j)
    for (int k = 0; k < state.grid_i.n_points; ++k)
      p += w[j] * w[k] * std::norm(a12(j, k) + a21(k, j));
  return p;
}

double bunching_probability(const BiphotonState& state, int channel) {
  require_square(state);
  if (channel != 1 && channel != 2)
    throw std::invalid_argument("bunching_probability: channel must be 1 or 2");
  const auto& w = state.grid_s.weights;
  double p = 0.0;
  for (Pol pb : {Pol::H, Pol::V}) {
    for (Pol pc : {Pol::H, Pol::V}) {
      const int m1 = mode_index(channel, pb);
      const int m2 = mode_index(channel, pc);
      const auto& a12 = state.blocks[m1][m2];
      const auto& a21 = state.blocks[m2][m1];
      for (int j = 0; j < state.grid_s.n_points; ++j)
        for (int k = 0; k < state.grid_i.n_points; ++k)
          p += 0.5 * w[j] * w[k] * std::norm(a12(j, k) + a21(k, j));
    }
  }
  return p;
}

double total_probability(const BiphotonState& state) {
  return coincidence_record(state).sum();
}

CoincidenceRecord coincidence_record(const BiphotonState& state) {
  CoincidenceRecord r;
  r.p_vv = coincidence_probability(state, Pol::V, Pol::V);
  r.p_hh = coincidence_probability(state, Pol::H, Pol::H);
  r.p_hv = coincidence_probability(state, Pol::H, Pol::V);
  r.p_vh = coincidence_probability(state, Pol::V, Pol::H);
  r.p_bunch_1 = bunching_probability(state, 1);
  r.p_bunch_2 = bunching_probability(state, 2);
  return r;
}

BiphotonState project_component(const BiphotonState& before_bs, ComponentPart part) {
  before_bs.validate_shape();
  BiphotonState out = before_bs;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) out.blocks[m][n].setZero();
  if (part == ComponentPart::Psi1Only) {
    out.blocks[k1V][k2V] = before_bs.blocks[k1V][k2V];
    out.blocks[k2V][k1V] = before_bs.blocks[k2V][k1V];
  } else {
    out.blocks[k1V][k1V] = before_bs.blocks[k1V][k1V];
    out.blocks[k2V][k2V] = before_bs.blocks[k2V][k2V];
  }
  return out;
}

namespace {

using Vector4c = Eigen::Vector4cd;

ScanResult scan_impl(const CircuitGeometry& geom_template, const DispersionModel& disp,
                     const PumpSpec& pump, const FrequencyGrid& grid,
                     const std::vector<double>& delta_l_values,
                     const std::optional<ComponentPart>& part) {
  if (delta_l_values.empty()) throw std::invalid_argument("scan: empty delta_l range");
  for (size_t a = 1; a < delta_l_values.size(); ++a)
    if (!(delta_l_values[a] > delta_l_values[a - 1]))
      throw std::invalid_argument("scan: delta_l values must be strictly increasing");

  const JointSpectralAmplitude jsa = build_jsa(grid, grid, pump, disp, geom_template.L_PDC);
  const int n = grid.n_points;

  // Ordered index pairs carrying amplitude in either orientation; for the
  // monochromatic mask this collapses to the antidiagonal.
  std::vector<std::pair<int, int>> support;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (jsa.values(j, k) != Complex(0.0, 0.0) || jsa.values(k, j) != Complex(0.0, 0.0))
        support.emplace_back(j, k);

  Matrix4c mask = Matrix4c::Zero();
  if (part) {
    if (*part == ComponentPart::Psi1Only) {
      mask(k1V, k2V) = 1.0;
      mask(k2V, k1V) = 1.0;
    } else {
      mask(k1V, k1V) = 1.0;
      mask(k2V, k2V) = 1.0;
    }
  }
  const Matrix4c bs = bs_matrix();

  ScanResult result;
  result.delta_l_values = delta_l_values;
  result.records.resize(delta_l_values.size());
  result.metadata.geometry = geom_template;
  result.metadata.dispersion = disp;
  result.metadata.pump = pump;
  result.metadata.grid_center = grid.center;
  result.metadata.grid_half_span = grid.half_span;
  result.metadata.grid_n = grid.n_points;
  result.metadata.part = !part ? "total" : (*part == ComponentPart::Psi1Only ? "psi1" : "psi2");
  result.metadata.warnings = jsa.warnings;

  std::vector<Vector4c> vs(n), vi(n), ws(n), wi(n);
  double worst_sum_deviation = 0.0;

  for (size_t a = 0; a < delta_l_values.size(); ++a) {
    const CircuitGeometry geom = geom_template.with_delta_l(delta_l_values[a]);
    try {
      geom.validate();
    } catch (const std::exception& e) {
      throw std::invalid_argument("scan point " + std::to_string(a) +
                                  " (delta_l=" + std::to_string(delta_l_values[a] * 1e6) +
                                  " um): " + e.what());
    }
    const TransferOperator before = compose_before_bs(geom, disp);
    for (int j = 0; j < n; ++j) {
      const Matrix4c u = before.evaluate(grid.nodes[j]);
      vs[j] = u.col(k1H);
      vi[j] = u.col(k1V);
      if (!part) {
        ws[j] = bs * vs[j];
        wi[j] = bs * vi[j];
      }
    }

    CoincidenceRecord rec;
    Matrix4c b1, b2;
    for (const auto& [j, k] : support) {
      if (part) {
        const Matrix4c a1 =
            (vs[j] * vi[k].transpose()).cwiseProduct(mask) * jsa.values(j, k);
        const Matrix4c a2 =
            (vs[k] * vi[j].transpose()).cwiseProduct(mask) * jsa.values(k, j);
        b1 = bs * a1 * bs.transpose();
        b2 = bs * a2 * bs.transpose();
      } else {
        b1 = (ws[j] * wi[k].transpose()) * jsa.values(j, k);
        b2 = (ws[k] * wi[j].transpose()) * jsa.values(k, j);
      }
      const double ww = grid.weights[j] * grid.weights[k];
      rec.p_vv += ww * std::norm(b1(k1V, k2V) + b2(k2V, k1V));
      rec.p_hh += ww * std::norm(b1(k1H, k2H) + b2(k2H, k1H));
      rec.p_hv += ww * std::norm(b1(k1H, k2V) + b2(k2V, k1H));
      rec.p_vh += ww * std::norm(b1(k1V, k2H) + b2(k2H, k1V));
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
          rec.p_bunch_1 += 0.5 * ww * std::norm(b1(k1H + p, k1H + q) + b2(k1H + q, k1H + p));
          rec.p_bunch_2 += 0.5 * ww * std::norm(b1(k2H + p, k2H + q) + b2(k2H + q, k2H + p));
        }
    }
    result.records[a] = rec;
    if (!part) worst_sum_deviation = std::max(worst_sum_deviation, std::abs(rec.sum() - 1.0));
  }

  if (!part && worst_sum_deviation > 1e-6)
    result.metadata.warnings.push_back("non-unit total probability (worst deviation " +
                                       std::to_string(worst_sum_deviation) + ")");
  return result;
}

}  // namespace

ScanResult scan_delay(const CircuitGeometry& geom_template, const DispersionModel& disp,
                      const PumpSpec& pump, const FrequencyGrid& grid,
                      const std::vector<double>& delta_l_values) {
  return scan_impl(geom_template, disp, pump, grid, delta_l_values, std::nullopt);
}

ScanResult scan_component(const CircuitGeometry& geom_template, const DispersionModel& disp,
                          const PumpSpec& pump, const FrequencyGrid& grid,
                          const std::vector<double>& delta_l_values, ComponentPart part) {
  return scan_impl(geom_template, disp, pump, grid, delta_l_values, part);
}

}  // namespace homsim
