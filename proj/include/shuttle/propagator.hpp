#ifndef SHUTTLE_PROPAGATOR_HPP
#define SHUTTLE_PROPAGATOR_HPP

#include <string>
#include <vector>

#include "shuttle/lie_poisson.hpp"
#include "shuttle/systems.hpp"

namespace shuttle {

// Piecewise-constant physical control values, one row per slice.
struct PiecewiseControls {
  Eigen::MatrixXd values;  // N x p, meV
  double dt = 0.0;         // ns
  std::string model_name;
  std::vector<std::string> control_names;

  int slices() const { return static_cast<int>(values.rows()); }
  double duration() const { return slices() * dt; }
};

// Sample the momentum trajectory at slice left endpoints and map to
// physical controls.
PiecewiseControls pulses_from_trajectory(const SystemModel& model,
                                         const MomentumTrajectory& traj);

struct EigenSystem3 {
  Eigen::Vector3d gamma;  // meV
  Matrix3c basis;         // unitary T with H = T diag(gamma) T^dag
  bool analytic = false;
};

EigenSystem3 hermitian_eigensystem(const Matrix3c& h);

// Closed-form eigensystem of the traceless donor-chain Hamiltonian
// (the gamma_1 = -delta/3 branch; the traceful matrix differs by the
// dropped delta/3 * I global-phase term).  Falls back to the numerical
// solver, with analytic=false, when g2 = sqrt(o12^2 + o23^2) vanishes.
EigenSystem3 analytic_donor_eigensystem(double omega12, double omega23,
                                        double delta);

// Eigensystem of the slice Hamiltonian for the given physical controls;
// uses the closed form for the donor chain.
EigenSystem3 slice_eigensystem(const SystemModel& model,
                               const Eigen::VectorXd& u_phys);

// U = exp(-i H dt / hbar) via diagonalization.
Matrix3c slice_propagator(const Matrix3c& h, double dt);
Matrix3c slice_propagator(const EigenSystem3& es, double dt);

// All intermediate states rho_0 .. rho_N under the sampled pulses.
std::vector<Matrix3c> propagate(const Matrix3c& rho0, const SystemModel& model,
                                const PiecewiseControls& controls);

// Re tr(rho_target * rho_final).
double fidelity(const Matrix3c& rho_final, const Matrix3c& rho_target);

// Time integral of the model's quadratic running cost, meV^2 * ns.
double fluence(const SystemModel& model, const PiecewiseControls& controls);

// Exact dF/du_m(k) for every slice k and active canonical control m
// (N x p).  Physical-control gradients follow by the constant linear map
// model.canonical_from_phys^T.
Eigen::MatrixXd gradient_wrt_controls(const SystemModel& model,
                                      const PiecewiseControls& controls,
                                      const Matrix3c& rho0,
                                      const Matrix3c& rho_target);

// Projector |site><site|, site in 1..3.
Matrix3c site_projector(int site);

}  // namespace shuttle

#endif
