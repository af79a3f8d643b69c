#include "shuttle/systems.hpp"

#include <cmath>

namespace shuttle {

SystemModel triple_dot_model(double j1, double j2) {
  const double r3 = std::sqrt(3.0);
  SystemModel m;
  m.kind = ModelKind::TripleDot;
  m.name = "triple_dot";
  m.j1 = j1;
  m.j2 = j2;
  m.drift = Vec8::Zero();
  m.drift[0] = j1;
  m.drift[1] = j2;
  m.active = {7, 8};
  m.control_names = {"mu_l", "mu_r"};

  // Stationarity of the control Hamiltonian gives
  //   phi_7 = 5*u_7 - sqrt(3)*u_8,  phi_8 = 3*u_8 - sqrt(3)*u_7,
  // inverted here to express (u_7, u_8) in terms of (phi_7, phi_8).
  m.momentum_to_canonical = Eigen::MatrixXd::Zero(2, 8);
  m.momentum_to_canonical(0, 6) = 1.0 / 4.0;
  m.momentum_to_canonical(0, 7) = 1.0 / (4.0 * r3);
  m.momentum_to_canonical(1, 6) = r3 / 12.0;
  m.momentum_to_canonical(1, 7) = 5.0 / 12.0;

  // mu_L = 2*u_7, mu_R = u_7 - sqrt(3)*u_8.
  m.phys_from_canonical = Eigen::MatrixXd(2, 2);
  m.phys_from_canonical << 2.0, 0.0, 1.0, -r3;
  m.canonical_from_phys = m.phys_from_canonical.inverse();

  m.cost_matrix = Eigen::MatrixXd::Identity(2, 2);  // 1/2 (mu_L^2 + mu_R^2)
  return m;
}

SystemModel donor_chain_model(double delta) {
  const double r3 = std::sqrt(3.0);
  SystemModel m;
  m.kind = ModelKind::DonorChain;
  m.name = "donor_chain";
  m.delta = delta;
  m.drift = Vec8::Zero();
  m.drift[6] = -delta / 2.0;
  m.drift[7] = delta / (2.0 * r3);
  m.active = {1, 2};
  m.control_names = {"omega12", "omega23"};

  // L = 1/2 (u_1^2 + u_2^2) so u_l = phi_l directly.
  m.momentum_to_canonical = Eigen::MatrixXd::Zero(2, 8);
  m.momentum_to_canonical(0, 0) = 1.0;
  m.momentum_to_canonical(1, 1) = 1.0;

  // Omega_12 = -u_1, Omega_23 = -u_2.
  m.phys_from_canonical = -Eigen::MatrixXd::Identity(2, 2);
  m.canonical_from_phys = -Eigen::MatrixXd::Identity(2, 2);

  m.cost_matrix = Eigen::MatrixXd::Identity(2, 2);  // 1/2 (O12^2 + O23^2)
  return m;
}

}  // namespace shuttle
