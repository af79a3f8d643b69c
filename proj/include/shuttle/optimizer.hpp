#ifndef SHUTTLE_OPTIMIZER_HPP
#define SHUTTLE_OPTIMIZER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shuttle/propagator.hpp"

namespace shuttle {

struct TransferProblem {
  SystemModel model;
  Matrix3c rho0 = site_projector(1);
  Matrix3c rho_target = site_projector(3);
  double T = 1.0;  // ns
  int N = 1;       // control slices
  IntegrationOptions integration;
};

struct OptimizerConfig {
  double epsilon0 = 1e-4;
  int max_iters = 5000;
  double fidelity_target = 0.999;
  double grad_tol = 1e-8;
  int restarts = 8;
  std::uint64_t seed = 1;
  double init_scale = 1e-4;  // meV; see default_init_scale
  int threads = 0;           // 0 = hardware concurrency
  // When set, every restart starts from this vector instead of a random
  // draw (used to re-optimize a converged solution at a different N).
  std::optional<Vec8> warm_start;
};

// Componentwise uniform [-s, s] initialization scale that matches the
// expected pulse magnitude of the model.
double default_init_scale(ModelKind kind);

struct IterationRecord {
  int iteration;
  double fidelity;
  double gradient_norm;
  double step_size;
};

enum class StopReason {
  FidelityTarget,
  GradientTol,
  MaxIters,
  LineSearchStall,
  Diverged,
};

std::string to_string(StopReason reason);

struct RestartRecord {
  int restart_index = 0;
  Vec8 phi0 = Vec8::Zero();
  double fidelity = 0.0;
  StopReason reason = StopReason::MaxIters;
  std::vector<IterationRecord> history;
  std::string error;  // non-empty when the restart diverged
};

struct OptimizationResult {
  Vec8 phi0_star;
  double fidelity = 0.0;
  double fluence = 0.0;
  PiecewiseControls controls;
  std::vector<IterationRecord> history;  // best restart
  bool converged = false;
  StopReason reason = StopReason::MaxIters;
  int restart_index = 0;
  std::vector<RestartRecord> restarts;
};

struct OptimizationFailed : std::runtime_error {
  explicit OptimizationFailed(const std::string& what) : std::runtime_error(what) {}
};

// The constant matrix du_m/dphi_s implied by the model's linear momentum
// map (p x 8).
Eigen::MatrixXd du_dphi(const SystemModel& model);

// Fidelity of the pulses generated by phi0.
double evaluate_fidelity(const TransferProblem& problem, const Vec8& phi0);

// Chain-rule gradient dF/dphi_l(0): slice-control gradients composed with
// du/dphi and the trajectory sensitivities.
Vec8 fidelity_gradient_wrt_initial(const TransferProblem& problem,
                                   const Vec8& phi0);

// Gradient ascent on phi(0) with backtracking line search, best result
// over seeded restarts.  Throws OptimizationFailed if every restart
// diverged.
OptimizationResult optimize(const TransferProblem& problem,
                            const OptimizerConfig& config);

}  // namespace shuttle

#endif
