#include "shuttle/spin_sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "shuttle/constants.hpp"

namespace shuttle {

namespace {

using cd = std::complex<double>;

int spin_sign(int s) { return s == 0 ? 1 : -1; }

}  // namespace

SpinConfig make_spin_config(double hyperfine_mhz, bool raw_coefficient,
                            double gamma_e_mhz_per_g, double gamma_n_mhz_per_g,
                            double b_gauss) {
  SpinConfig cfg;
  cfg.a_mev = planck_mev_per_mhz * hyperfine_mhz / (raw_coefficient ? 1.0 : 4.0);
  // Precession frequency f = (Zeeman splitting)/h = 2*gamma*B/h.
  cfg.gamma_e_mev_per_g = planck_mev_per_mhz * gamma_e_mhz_per_g / 2.0;
  cfg.gamma_n_mev_per_g = planck_mev_per_mhz * gamma_n_mhz_per_g / 2.0;
  cfg.b_gauss = b_gauss;
  if (cfg.a_mev < 0.0) throw std::invalid_argument("hyperfine constant must be >= 0");
  if (cfg.gamma_e_mev_per_g <= 0.0)
    throw std::invalid_argument("gamma_e must be positive");
  return cfg;
}

int hyperfine_index(int site, int es, int n1, int n2, int n3) {
  return (((site * 2 + es) * 2 + n1) * 2 + n2) * 2 + n3;
}

std::array<HyperfineEigenstate, 4> single_site_hyperfine_eigenstates(
    const SpinConfig& cfg) {
  const double a = cfg.a_mev;
  const double be = cfg.b_gauss * cfg.gamma_e_mev_per_g;
  const double bn = cfg.b_gauss * cfg.gamma_n_mev_per_g;
  const double b = be + bn;  // anti-aligned Zeeman asymmetry
  const double r = std::hypot(b, 2.0 * a);

  // Anti-aligned 2x2 block over [ud, du]: [[-a + b, 2a], [2a, -a - b]].
  // Mixing angle from tan(2 theta) = 2a/b.
  const double theta = 0.5 * std::atan2(2.0 * a, b);
  const double c = std::cos(theta), s = std::sin(theta);

  std::array<HyperfineEigenstate, 4> out;
  out[0].label = "anti_minus";
  out[0].energy = -a - r;
  out[0].state << 0.0, -s, c, 0.0;
  out[1].label = "down_down";
  out[1].energy = a - (be - bn);
  out[1].state << 0.0, 0.0, 0.0, 1.0;
  out[2].label = "anti_plus";
  out[2].energy = -a + r;
  out[2].state << 0.0, c, s, 0.0;
  out[3].label = "up_up";
  out[3].energy = a + (be - bn);
  out[3].state << 1.0, 0.0, 0.0, 0.0;

  std::stable_sort(out.begin(), out.end(),
                   [](const auto& x, const auto& y) { return x.energy < y.energy; });
  return out;
}

Eigen::MatrixXcd build_full_hamiltonian(double omega12, double omega23,
                                        const SpinConfig& cfg, double delta) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(hyperfine_dim, hyperfine_dim);
  for (int site = 0; site < 3; ++site)
    for (int es = 0; es < 2; ++es)
      for (int n1 = 0; n1 < 2; ++n1)
        for (int n2 = 0; n2 < 2; ++n2)
          for (int n3 = 0; n3 < 2; ++n3) {
            const int row = hyperfine_index(site, es, n1, n2, n3);
            const int n[3] = {n1, n2, n3};
            // Spatial part: tunneling plus middle-site detuning.
            if (site == 1) h(row, row) += delta;
            if (site == 0)
              h(hyperfine_index(1, es, n1, n2, n3), row) += -omega12;
            if (site == 1) {
              h(hyperfine_index(0, es, n1, n2, n3), row) += -omega12;
              h(hyperfine_index(2, es, n1, n2, n3), row) += -omega23;
            }
            if (site == 2)
              h(hyperfine_index(1, es, n1, n2, n3), row) += -omega23;
            // Zeeman.
            h(row, row) += cfg.b_gauss * cfg.gamma_e_mev_per_g * spin_sign(es);
            for (int i = 0; i < 3; ++i)
              h(row, row) -= cfg.b_gauss * cfg.gamma_n_mev_per_g * spin_sign(n[i]);
            // On-site hyperfine with the co-located nucleus.
            const int ns = n[site];
            h(row, row) += cfg.a_mev * spin_sign(es) * spin_sign(ns);
            if (es != ns) {
              int flipped[3] = {n1, n2, n3};
              flipped[site] = 1 - ns;
              const int col = hyperfine_index(site, 1 - es, flipped[0],
                                              flipped[1], flipped[2]);
              h(col, row) += 2.0 * cfg.a_mev;
            }
          }
  return h;
}

Eigen::VectorXcd make_initial_site1_state(const Eigen::Vector4cd& pair_state) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(hyperfine_dim);
  for (int es = 0; es < 2; ++es)
    for (int n1 = 0; n1 < 2; ++n1)
      psi[hyperfine_index(0, es, n1, 0, 0)] = pair_state[2 * es + n1];
  return psi;
}

SpinTrajectory propagate_spin(const Eigen::VectorXcd& psi0,
                              const PiecewiseControls& controls,
                              const SpinConfig& cfg, double delta) {
  if (psi0.size() != hyperfine_dim)
    throw std::invalid_argument("state dimension must be 48");
  if (std::abs(psi0.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("initial state must be normalized");
  if (controls.values.cols() != 2)
    throw std::invalid_argument("donor-chain pulses (two controls) required");

  const Eigen::MatrixXcd h0 = build_full_hamiltonian(0.0, 0.0, cfg, delta);
  const SpinConfig no_spin{};
  const Eigen::MatrixXcd w12 = build_full_hamiltonian(1.0, 0.0, no_spin, 0.0);
  const Eigen::MatrixXcd w23 = build_full_hamiltonian(0.0, 1.0, no_spin, 0.0);

  const int n = controls.slices();
  SpinTrajectory traj;
  traj.times.resize(n + 1);
  traj.states.resize(n + 1);
  traj.times[0] = 0.0;
  traj.states[0] = psi0;

  Eigen::VectorXcd psi = psi0;
  Eigen::MatrixXcd h(hyperfine_dim, hyperfine_dim);
  for (int k = 0; k < n; ++k) {
    h = h0 + controls.values(k, 0) * w12 + controls.values(k, 1) * w23;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    if (solver.info() != Eigen::Success)
      throw std::runtime_error("48x48 eigendecomposition failed");
    Eigen::VectorXcd amp = solver.eigenvectors().adjoint() * psi;
    for (int j = 0; j < hyperfine_dim; ++j)
      amp[j] *= std::exp(
          cd(0.0, -solver.eigenvalues()[j] * controls.dt / hbar_mev_ns));
    psi = solver.eigenvectors() * amp;
    traj.times[k + 1] = (k + 1) * controls.dt;
    traj.states[k + 1] = psi;
  }
  return traj;
}

Eigen::Matrix4cd site3_reduced(const Eigen::VectorXcd& psi) {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int es = 0; es < 2; ++es)
    for (int n3 = 0; n3 < 2; ++n3)
      for (int esp = 0; esp < 2; ++esp)
        for (int n3p = 0; n3p < 2; ++n3p) {
          cd acc = 0.0;
          for (int n1 = 0; n1 < 2; ++n1)
            for (int n2 = 0; n2 < 2; ++n2)
              acc += psi[hyperfine_index(2, es, n1, n2, n3)] *
                     std::conj(psi[hyperfine_index(2, esp, n1, n2, n3p)]);
          rho(2 * es + n3, 2 * esp + n3p) = acc;
        }
  return rho;
}

double distance_measure(const Eigen::Matrix4cd& rho_t,
                        const Eigen::Matrix4cd& rho_hf) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho_t - rho_hf);
  return 1.0 - solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spatial_fidelity(const Eigen::VectorXcd& psi) {
  return site_population(psi, 3);
}

double site_population(const Eigen::VectorXcd& psi, int site) {
  if (site < 1 || site > 3) throw std::out_of_range("site index out of range [1,3]");
  const int base = (site - 1) * 16;
  double acc = 0.0;
  for (int j = 0; j < 16; ++j) acc += std::norm(psi[base + j]);
  return acc;
}

Eigen::VectorXd total_sz_diagonal() {
  Eigen::VectorXd d(hyperfine_dim);
  for (int site = 0; site < 3; ++site)
    for (int es = 0; es < 2; ++es)
      for (int n1 = 0; n1 < 2; ++n1)
        for (int n2 = 0; n2 < 2; ++n2)
          for (int n3 = 0; n3 < 2; ++n3)
            d[hyperfine_index(site, es, n1, n2, n3)] =
                0.5 * (spin_sign(es) + spin_sign(n1) + spin_sign(n2) +
                       spin_sign(n3));
  return d;
}

}  // namespace shuttle
