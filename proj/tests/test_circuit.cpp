#include "doctest.h"

#include <cmath>
#include <random>

#include "homsim/circuit.hpp"
#include "homsim/detection.hpp"
#include "homsim/phase.hpp"

using namespace homsim;

namespace {

const PumpSpec kPump = PumpSpec::monochromatic_from_wavelength(775e-9);

FrequencyGrid small_grid(const DispersionModel& disp, double L_PDC, int n) {
  return build_grid(kPump.omega_p / 2.0, 3.0 * first_sinc_zero(disp, L_PDC), n);
}

CircuitGeometry default_geometry() { return CircuitGeometry{}; }

double max_nonunitarity(const TransferOperator& op, const FrequencyGrid& g) {
  double worst = 0.0;
  for (int j = 0; j < g.n_points; ++j) {
    const Matrix4c u = op.evaluate(g.nodes[j]);
    worst = std::max(worst, (u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff());
  }
  return worst;
}

CircuitGeometry random_geometry(std::mt19937& rng) {
  std::uniform_real_distribution<double> len(1e-3, 3e-2);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  CircuitGeometry g;
  g.L_PDC = len(rng);
  g.x = len(rng);
  g.y = len(rng);
  g.l = len(rng);
  g.delta_l = std::uniform_real_distribution<double>(-5e-4, 5e-4)(rng);
  g.phi1 = ang(rng);
  g.phi2 = ang(rng);
  return g;
}

}  // namespace

TEST_CASE("pc_matrix basics") {
  CHECK((pc_matrix(0.0, 1) - Matrix4c::Identity()).cwiseAbs().maxCoeff() == 0.0);

  const Matrix4c swap = pc_matrix(kPi / 2, 1);
  CHECK(std::abs(swap(k1V, k1H)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(swap(k1H, k1V)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(swap(k1H, k1H)) < 1e-15);

  const Matrix4c half = pc_matrix(kPi / 4, 2);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(half(k2H, k2H)) == doctest::Approx(r).epsilon(1e-15));
  CHECK(std::abs(half(k2V, k2H)) == doctest::Approx(r).epsilon(1e-15));
  // other channel untouched
  CHECK(half(k1H, k1H) == Complex(1.0, 0.0));
  CHECK(half(k1V, k1V) == Complex(1.0, 0.0));

  for (double phi : {-0.3, 0.7, 2.9}) {
    const Matrix4c u = pc_matrix(phi, 1);
    CHECK((u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK_THROWS_AS(pc_matrix(0.1, 3), std::invalid_argument);
}

TEST_CASE("pbs_matrix routes V across and keeps H") {
  const Matrix4c u = pbs_matrix();
  CHECK(std::abs(u(k1H, k1H)) == doctest::Approx(1.0));
  CHECK(std::abs(u(k2V, k1V)) == doctest::Approx(1.0));
  CHECK(std::abs(u(k1V, k2V)) == doctest::Approx(1.0));
  CHECK(std::abs(u(k1V, k1V)) < 1e-15);
  CHECK((u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("bs_matrix balanced and HOM-cancelling") {
  const Matrix4c u = bs_matrix();
  CHECK(std::norm(u(k1V, k1V)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::norm(u(k2V, k1V)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK((u.adjoint() * u - Matrix4c::Identity()).cwiseAbs().maxCoeff() < 1e-15);

  // identical photons in opposite ports: symmetrized coincidence amplitude
  // U[1V,1V]U[2V,2V] + U[2V,1V]U[1V,2V] vanishes
  const Complex coincidence = u(k1V, k1V) * u(k2V, k2V) + u(k2V, k1V) * u(k1V, k2V);
  CHECK(std::abs(coincidence) < 1e-15);
}

TEST_CASE("fp_matrix phases") {
  const DispersionModel disp(2.15, 2.21);
  const double omega = kPump.omega_p / 2.0;

  CHECK((fp_matrix(0.0, 0.0, disp, omega) - Matrix4c::Identity()).cwiseAbs().maxCoeff() == 0.0);

  const DispersionModel iso(2.2, 2.2);
  const double d = 0.0123;
  const Matrix4c u = fp_matrix(d, d, iso, omega);
  const Complex global = propagation_phase(omega, d, 2.2);
  CHECK((u - global * Matrix4c::Identity()).cwiseAbs().maxCoeff() < 1e-14);

  // 1H vs 1V phases differ by omega d (n_H - n_V)/c
  const Matrix4c v = fp_matrix(d, 0.0, disp, omega);
  const Complex ratio = v(k1H, k1H) / v(k1V, k1V);
  const Complex expected =
      unit_phase(static_cast<PhaseArg>(omega) *
                 (optical_time(d, disp.n_H) - optical_time(d, disp.n_V)));
  CHECK(std::abs(ratio - expected) < 1e-12);
  CHECK_THROWS_AS(fp_matrix(-1.0, 0.0, disp, omega), std::invalid_argument);
}

TEST_CASE("compose_full collapses to BS*PBS for zero lengths and angles") {
  CircuitGeometry g;
  g.L_PDC = 0.01;  // source length does not enter the transfer chain
  g.x = g.y = g.l = g.delta_l = 0.0;
  g.phi1 = 0.0;
  g.phi2 = 0.0;
  const DispersionModel disp(2.15, 2.21);
  const Matrix4c u = compose_full(g, disp).evaluate(kPump.omega_p / 2.0);
  const Matrix4c expected = bs_matrix() * pbs_matrix();
  CHECK((u - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("compose_full unitary at every node") {
  std::mt19937 rng(7);
  const DispersionModel disp(2.15, 2.21);
  for (int trial = 0; trial < 5; ++trial) {
    const CircuitGeometry g = random_geometry(rng);
    const FrequencyGrid grid = small_grid(disp, g.L_PDC, 17);
    CHECK(max_nonunitarity(compose_full(g, disp), grid) < 1e-12);
  }
}

TEST_CASE("compose_before_bs equals inverse splitter times full chain") {
  std::mt19937 rng(11);
  const DispersionModel disp(2.15, 2.21);
  const CircuitGeometry g = random_geometry(rng);
  const FrequencyGrid grid = small_grid(disp, g.L_PDC, 9);
  const Matrix4c bs_inv = bs_matrix().adjoint();
  const TransferOperator full = compose_full(g, disp);
  const TransferOperator before = compose_before_bs(g, disp);
  for (int j = 0; j < grid.n_points; ++j) {
    const Matrix4c diff =
        before.evaluate(grid.nodes[j]) - bs_inv * full.evaluate(grid.nodes[j]);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("before-BS mode routing for the two converter settings") {
  const DispersionModel disp(2.15, 2.21);
  CircuitGeometry g = default_geometry();
  g.phi2 = kPi / 2;
  const double omega = kPump.omega_p / 2.0 + 2e11;

  g.phi1 = 0.0;
  Matrix4c u = compose_before_bs(g, disp).evaluate(omega);
  // signal (1H in) ends in 1V, idler (1V in) ends in 2V
  CHECK(std::abs(u(k1V, k1H)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(u(k2V, k1V)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(u(k1H, k1H)) < 1e-12);
  CHECK(std::abs(u(k2H, k1H)) < 1e-12);

  g.phi1 = kPi / 2;
  u = compose_before_bs(g, disp).evaluate(omega);
  // converted pair: signal to 2V, idler to 1V
  CHECK(std::abs(u(k2V, k1H)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(u(k1V, k1V)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("init_state places the pair in (1H,1V) only") {
  const DispersionModel disp(2.15, 2.21);
  const FrequencyGrid g = small_grid(disp, 0.0207, 24);
  const JointSpectralAmplitude jsa = build_jsa(g, g, kPump, disp, 0.0207);
  const BiphotonState st = init_state(jsa);
  CHECK((st.blocks[k1H][k1V] - jsa.values).cwiseAbs().maxCoeff() == 0.0);
  CHECK(st.blocks[k1V][k1H].cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(total_probability(st) - 1.0) < 1e-10);
}

TEST_CASE("propagate: identity, norm preservation, composition") {
  const DispersionModel disp(2.15, 2.21);
  const FrequencyGrid g = small_grid(disp, 0.0207, 12);
  const JointSpectralAmplitude jsa = build_jsa(g, g, kPump, disp, 0.0207);
  const BiphotonState st = init_state(jsa);

  const TransferOperator id([](double) { return Matrix4c::Identity(); });
  const BiphotonState same = propagate(st, id);
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n)
      CHECK((same.blocks[m][n] - st.blocks[m][n]).cwiseAbs().maxCoeff() == 0.0);

  std::mt19937 rng(23);
  for (int trial = 0; trial < 4; ++trial) {
    const CircuitGeometry g1 = random_geometry(rng);
    const CircuitGeometry g2 = random_geometry(rng);
    const TransferOperator u1 = compose_full(g1, disp);
    const TransferOperator u2 = compose_before_bs(g2, disp);
    const BiphotonState s1 = propagate(propagate(st, u1), u2);
    CHECK(std::abs(total_probability(s1) - 1.0) < 1e-12);

    const TransferOperator u21(
        [&](double w) { return Matrix4c(u2.evaluate(w) * u1.evaluate(w)); });
    const BiphotonState s2 = propagate(st, u21);
    double worst = 0.0;
    for (int m = 0; m < 4; ++m)
      for (int n = 0; n < 4; ++n)
        worst = std::max(worst, (s1.blocks[m][n] - s2.blocks[m][n]).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("propagate rejects a state with mismatched block shapes") {
  const DispersionModel disp(2.15, 2.21);
  const FrequencyGrid g = small_grid(disp, 0.0207, 8);
  const JointSpectralAmplitude jsa = build_jsa(g, g, kPump, disp, 0.0207);
  BiphotonState st = init_state(jsa);
  st.blocks[k2H][k2V].resize(3, 3);
  const TransferOperator id([](double) { return Matrix4c::Identity(); });
  CHECK_THROWS_AS(propagate(st, id), std::invalid_argument);
}

TEST_CASE("CircuitGeometry validation") {
  CircuitGeometry g = default_geometry();
  g.delta_l = -g.l / 2;
  CHECK_NOTHROW(g.validate());
  g.delta_l = -g.l;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
  g = default_geometry();
  g.y = -1e-6;
  CHECK_THROWS_AS(g.validate(), std::invalid_argument);
}
