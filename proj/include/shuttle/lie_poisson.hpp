#ifndef SHUTTLE_LIE_POISSON_HPP
#define SHUTTLE_LIE_POISSON_HPP

#include <stdexcept>
#include <vector>

#include "shuttle/systems.hpp"

namespace shuttle {

struct IntegrationOptions {
  // Uniform sub-intervals of RK4 per control slice.
  int substeps = 64;
  // If true, the controls entering the momentum ODE are frozen at their
  // slice-start value u(phi(t_k)) instead of following phi continuously.
  // The sensitivity propagation accounts for either convention exactly.
  bool slice_frozen_controls = false;
};

struct MomentumTrajectory {
  double dt = 0.0;                  // slice length T/N, ns
  std::vector<double> times;        // t_k = k*T/N, k = 0..N
  std::vector<Vec8> phi;            // phi(t_k), meV
  std::vector<Mat8> sensitivity;    // d phi(t_k) / d phi(0)
  int slices() const { return static_cast<int>(times.size()) - 1; }
};

struct IntegrationDiverged : std::runtime_error {
  explicit IntegrationDiverged(double t_fail);
  double t;  // ns
};

// Right-hand side S(phi) of the reduced momentum dynamics, in the
// normalized (hbar = 1) form: units meV^2.  The integrator applies the
// single 1/hbar conversion.
Vec8 momentum_rhs(const SystemModel& model, const Vec8& phi);

// Jacobian DS(phi) of momentum_rhs, including the dependence of the
// controls on phi.  Units meV.
Mat8 momentum_jacobian(const SystemModel& model, const Vec8& phi);

// Physical controls solving dL/du_l = phi_l for the model.
Eigen::VectorXd controls_from_momentum(const SystemModel& model, const Vec8& phi);

// Integrates phi and its initial-condition sensitivity over [0, T] with
// classical RK4 on the coupled 72-dimensional system; the variational
// part shares the trajectory stages, so the returned sensitivity is the
// exact derivative of the discrete flow map.
MomentumTrajectory integrate_with_sensitivity(const SystemModel& model,
                                              const Vec8& phi0, double T, int N,
                                              const IntegrationOptions& opts = {});

// Trajectory only (same discrete map, no sensitivity).
std::vector<Vec8> integrate_momentum(const SystemModel& model, const Vec8& phi0,
                                     double T, int N,
                                     const IntegrationOptions& opts = {});

}  // namespace shuttle

#endif
