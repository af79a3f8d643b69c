#include "shuttle/propagator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "shuttle/constants.hpp"

namespace shuttle {

namespace {

using cd = std::complex<double>;

// Relative phase below which the Phi integrand is treated as degenerate.
constexpr double phi_degeneracy_threshold = 1e-9;

Matrix3c phase_conjugate(const EigenSystem3& es, double dt) {
  Eigen::Vector3cd phases;
  for (int a = 0; a < 3; ++a)
    phases[a] = std::exp(cd(0.0, -es.gamma[a] * dt / hbar_mev_ns));
  return es.basis * phases.asDiagonal() * es.basis.adjoint();
}

// Phi_ab = integral over one slice of exp(i (gamma_b - gamma_a) tau / hbar).
Matrix3c phi_matrix(const Eigen::Vector3d& gamma, double dt) {
  Matrix3c phi;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double w = (gamma[b] - gamma[a]) / hbar_mev_ns;  // rad/ns
      if (std::abs(w) * dt < phi_degeneracy_threshold) {
        phi(a, b) = dt;
      } else {
        phi(a, b) = (std::exp(cd(0.0, w * dt)) - 1.0) / cd(0.0, w);
      }
    }
  return phi;
}

}  // namespace

PiecewiseControls pulses_from_trajectory(const SystemModel& model,
                                         const MomentumTrajectory& traj) {
  const int n = traj.slices();
  PiecewiseControls out;
  out.dt = traj.dt;
  out.model_name = model.name;
  out.control_names = model.control_names;
  out.values.resize(n, model.p());
  for (int k = 0; k < n; ++k)
    out.values.row(k) = model.controls_from_momentum(traj.phi[k]).transpose();
  return out;
}

EigenSystem3 hermitian_eigensystem(const Matrix3c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix3c> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("3x3 Hermitian eigendecomposition failed");
  EigenSystem3 es;
  es.gamma = solver.eigenvalues();
  es.basis = solver.eigenvectors();
  es.analytic = false;
  return es;
}

EigenSystem3 analytic_donor_eigensystem(double omega12, double omega23,
                                        double delta) {
  const double g2 = std::hypot(omega12, omega23);
  if (g2 == 0.0) {
    // g1 = |delta| branch: the control-free Hamiltonian is diagonal.
    Matrix3c h = Matrix3c::Zero();
    h(0, 0) = -delta / 3.0;
    h(1, 1) = 2.0 * delta / 3.0;
    h(2, 2) = -delta / 3.0;
    return hermitian_eigensystem(h);
  }
  const double g1 = std::hypot(delta, 2.0 * g2);
  // c_pm = sqrt((g1 +- delta) / (2 g1)); the smaller one is recovered from
  // c_plus * c_minus = g2 / g1 to avoid cancellation in g1 -+ |delta|.
  double cp, cm;
  if (delta >= 0.0) {
    cp = std::sqrt((g1 + delta) / (2.0 * g1));
    cm = g2 / (g1 * cp);
  } else {
    cm = std::sqrt((g1 - delta) / (2.0 * g1));
    cp = g2 / (g1 * cm);
  }
  EigenSystem3 es;
  es.gamma[0] = -delta / 3.0;
  es.gamma[1] = (delta + 3.0 * g1) / 6.0;
  es.gamma[2] = (delta - 3.0 * g1) / 6.0;
  es.basis = Matrix3c::Zero();
  es.basis(0, 0) = -omega23 / g2;
  es.basis(2, 0) = omega12 / g2;
  es.basis(0, 1) = omega12 / (g1 * cp);
  es.basis(1, 1) = -cp;
  es.basis(2, 1) = omega23 / (g1 * cp);
  es.basis(0, 2) = omega12 / (g1 * cm);
  es.basis(1, 2) = cm;
  es.basis(2, 2) = omega23 / (g1 * cm);
  es.analytic = true;
  return es;
}

EigenSystem3 slice_eigensystem(const SystemModel& model,
                               const Eigen::VectorXd& u_phys) {
  if (model.kind == ModelKind::DonorChain)
    return analytic_donor_eigensystem(u_phys[0], u_phys[1], model.delta);
  return hermitian_eigensystem(model.hamiltonian_from_physical(u_phys));
}

Matrix3c slice_propagator(const Matrix3c& h, double dt) {
  return phase_conjugate(hermitian_eigensystem(h), dt);
}

Matrix3c slice_propagator(const EigenSystem3& es, double dt) {
  return phase_conjugate(es, dt);
}

std::vector<Matrix3c> propagate(const Matrix3c& rho0, const SystemModel& model,
                                const PiecewiseControls& controls) {
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-9 ||
      std::abs(rho0.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("rho0 is not a unit-trace Hermitian matrix");
  const int n = controls.slices();
  std::vector<Matrix3c> rho(n + 1);
  rho[0] = rho0;
  for (int k = 0; k < n; ++k) {
    const Matrix3c u = slice_propagator(
        slice_eigensystem(model, controls.values.row(k).transpose()),
        controls.dt);
    rho[k + 1] = u * rho[k] * u.adjoint();
  }
  return rho;
}

double fidelity(const Matrix3c& rho_final, const Matrix3c& rho_target) {
  return (rho_target * rho_final).trace().real();
}

double fluence(const SystemModel& model, const PiecewiseControls& controls) {
  double acc = 0.0;
  for (int k = 0; k < controls.slices(); ++k)
    acc += model.running_cost(controls.values.row(k).transpose());
  return acc * controls.dt;
}

Eigen::MatrixXd gradient_wrt_controls(const SystemModel& model,
                                      const PiecewiseControls& controls,
                                      const Matrix3c& rho0,
                                      const Matrix3c& rho_target) {
  const int n = controls.slices();
  const int p = model.p();
  const double dt = controls.dt;

  std::vector<EigenSystem3> es(n);
  std::vector<Matrix3c> u(n);
  std::vector<Matrix3c> rho(n + 1);
  rho[0] = rho0;
  for (int k = 0; k < n; ++k) {
    es[k] = slice_eigensystem(model, controls.values.row(k).transpose());
    u[k] = slice_propagator(es[k], dt);
    rho[k + 1] = u[k] * rho[k] * u[k].adjoint();
  }

  Eigen::MatrixXd grad(n, p);
  Matrix3c lambda = rho_target;  // Lambda_{k+1}, starting at Lambda_N
  for (int k = n - 1; k >= 0; --k) {
    const Matrix3c comm = lambda * rho[k + 1] - rho[k + 1] * lambda;
    const Matrix3c phi = phi_matrix(es[k].gamma, dt);
    for (int m = 0; m < p; ++m) {
      const Matrix3c w = es[k].basis.adjoint() *
                         su3::basis_matrix(model.active[m]) * es[k].basis;
      const Matrix3c g =
          es[k].basis * w.cwiseProduct(phi) * es[k].basis.adjoint();
      grad(k, m) = (comm * g).trace().real() / hbar_mev_ns;
    }
    lambda = u[k].adjoint() * lambda * u[k];
  }
  return grad;
}

Matrix3c site_projector(int site) {
  if (site < 1 || site > 3) throw std::out_of_range("site index out of range [1,3]");
  Matrix3c p = Matrix3c::Zero();
  p(site - 1, site - 1) = 1.0;
  return p;
}

}  // namespace shuttle
