#ifndef SHUTTLE_SYSTEMS_HPP
#define SHUTTLE_SYSTEMS_HPP

#include <string>
#include <vector>

#include "shuttle/su3.hpp"

namespace shuttle {

enum class ModelKind { TripleDot, DonorChain };

// A three-site control system: drift coefficients over the su(3) basis,
// the set of actively driven basis directions, the quadratic running
// cost over physical controls, and the linear maps tying momentum
// functions, canonical coefficients u_l and physical controls together.
struct SystemModel {
  ModelKind kind;
  std::string name;
  Vec8 drift;                         // meV
  std::vector<int> active;            // canonical indices, 1-based
  std::vector<std::string> control_names;
  Eigen::MatrixXd momentum_to_canonical;  // p x 8, u_l = K * phi (dL/du = phi)
  Eigen::MatrixXd phys_from_canonical;    // p x p
  Eigen::MatrixXd canonical_from_phys;    // p x p
  Eigen::MatrixXd cost_matrix;            // p x p, L = 1/2 u_phys^T Q u_phys

  // Model parameters (meV); which ones are meaningful depends on kind.
  double delta = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;

  int p() const { return static_cast<int>(active.size()); }

  Eigen::VectorXd canonical_from_momentum(const Vec8& phi) const {
    return momentum_to_canonical * phi;
  }
  Eigen::VectorXd controls_from_momentum(const Vec8& phi) const {
    return phys_from_canonical * canonical_from_momentum(phi);
  }
  Vec8 embed_canonical(const Eigen::VectorXd& u_canonical) const {
    Vec8 full = Vec8::Zero();
    for (int m = 0; m < p(); ++m) full[active[m] - 1] = u_canonical[m];
    return full;
  }
  Matrix3c hamiltonian_from_physical(const Eigen::VectorXd& u_phys) const {
    return su3::assemble_hamiltonian(drift,
                                     embed_canonical(canonical_from_phys * u_phys));
  }
  double running_cost(const Eigen::VectorXd& u_phys) const {
    return 0.5 * u_phys.dot(cost_matrix * u_phys);
  }
};

// Lateral triple quantum dot with fixed tunnel couplings j1, j2 and
// gate-controlled on-site energies (mu_L, mu_R).
SystemModel triple_dot_model(double j1, double j2);

// Chain of three ionized donors: fixed middle-site detuning delta,
// controlled tunnel rates (Omega_12, Omega_23).
SystemModel donor_chain_model(double delta);

}  // namespace shuttle

#endif
