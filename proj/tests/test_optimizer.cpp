#include <doctest.h>

#include <cmath>
#include <random>

#include "shuttle/optimizer.hpp"

using namespace shuttle;

namespace {

TransferProblem small_dot_problem(int n = 64) {
  TransferProblem pb;
  pb.model = triple_dot_model(-0.07, -0.14);
  pb.T = 1.0;
  pb.N = n;
  pb.integration.substeps = 16;
  return pb;
}

Vec8 random_phi(std::mt19937& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vec8 phi;
  for (int i = 0; i < 8; ++i) phi[i] = dist(rng);
  return phi;
}

}  // namespace

TEST_CASE("du_dphi constants") {
  const Eigen::MatrixXd kd = du_dphi(donor_chain_model(2.7));
  CHECK(kd.rows() == 2);
  CHECK(kd.cols() == 8);
  CHECK(kd(0, 0) == 1.0);
  CHECK(kd(1, 1) == 1.0);
  CHECK(kd.cwiseAbs().sum() == 2.0);

  const double r3 = std::sqrt(3.0);
  const Eigen::MatrixXd kq = du_dphi(triple_dot_model(-0.07, -0.14));
  CHECK(kq.rows() == 2);
  CHECK(kq(0, 6) == doctest::Approx(0.25));
  CHECK(kq(0, 7) == doctest::Approx(1.0 / (4.0 * r3)));
  CHECK(kq(1, 6) == doctest::Approx(r3 / 12.0));
  CHECK(kq(1, 7) == doctest::Approx(5.0 / 12.0));
  CHECK(kq.leftCols(6).cwiseAbs().sum() == 0.0);
}

TEST_CASE("initial-condition gradient matches finite differences") {
  std::mt19937 rng(21);
  for (bool frozen : {false, true}) {
    for (const auto& model :
         {donor_chain_model(2.7), triple_dot_model(-0.07, -0.14)}) {
      TransferProblem pb;
      pb.model = model;
      pb.T = 1.0;
      pb.N = 64;
      // The donor's 2.7 meV detuning needs substeps keeping the RK4 stage
      // phase small, or the fast rotation is damped to noise.  Its phi0 is
      // drawn at the converged-pulse scale so that F is well off zero and
      // the finite-difference quotient is conditioned.
      pb.integration.substeps = model.kind == ModelKind::DonorChain ? 512 : 16;
      pb.integration.slice_frozen_controls = frozen;
      const double scale = model.kind == ModelKind::DonorChain ? 3e-2 : 0.05;
      const Vec8 phi0 = random_phi(rng, scale);

      const Vec8 grad = fidelity_gradient_wrt_initial(pb, phi0);
      const double h = 1e-7 * std::max(phi0.norm(), scale);
      Vec8 fd;
      for (int j = 0; j < 8; ++j) {
        Vec8 hi = phi0, lo = phi0;
        hi[j] += h;
        lo[j] -= h;
        fd[j] =
            (evaluate_fidelity(pb, hi) - evaluate_fidelity(pb, lo)) / (2.0 * h);
      }
      CHECK((fd - grad).norm() / std::max(fd.norm(), grad.norm()) <= 1e-4);
    }
  }
}

TEST_CASE("generic chain rule equals the hand-coded specializations") {
  std::mt19937 rng(31);

  SUBCASE("donor: unit-weight sum over the two active controls") {
    TransferProblem pb;
    pb.model = donor_chain_model(2.7);
    pb.T = 0.5;
    pb.N = 80;
    pb.integration.substeps = 16;
    const Vec8 phi0 = random_phi(rng, 2e-3);

    const auto traj =
        integrate_with_sensitivity(pb.model, phi0, pb.T, pb.N, pb.integration);
    const auto controls = pulses_from_trajectory(pb.model, traj);
    const Eigen::MatrixXd gu =
        gradient_wrt_controls(pb.model, controls, pb.rho0, pb.rho_target);

    Vec8 by_hand = Vec8::Zero();
    for (int l = 0; l < 8; ++l)
      for (int k = 0; k < pb.N; ++k)
        by_hand[l] += gu(k, 0) * traj.sensitivity[k](0, l) +
                      gu(k, 1) * traj.sensitivity[k](1, l);

    const Vec8 generic = fidelity_gradient_wrt_initial(pb, phi0);
    CHECK((generic - by_hand).norm() / std::max(1e-30, by_hand.norm()) <= 1e-10);
  }

  SUBCASE("dot: printed quarter/twelfth weights") {
    TransferProblem pb;
    pb.model = triple_dot_model(-0.07, -0.14);
    pb.T = 0.5;
    pb.N = 80;
    pb.integration.substeps = 16;
    const Vec8 phi0 = random_phi(rng, 0.05);

    const auto traj =
        integrate_with_sensitivity(pb.model, phi0, pb.T, pb.N, pb.integration);
    const auto controls = pulses_from_trajectory(pb.model, traj);
    const Eigen::MatrixXd gu =
        gradient_wrt_controls(pb.model, controls, pb.rho0, pb.rho_target);

    const double r3 = std::sqrt(3.0);
    Vec8 by_hand = Vec8::Zero();
    for (int l = 0; l < 8; ++l)
      for (int k = 0; k < pb.N; ++k) {
        const double d7 = traj.sensitivity[k](6, l);
        const double d8 = traj.sensitivity[k](7, l);
        by_hand[l] += 0.25 * gu(k, 0) * d7 + 1.0 / (4.0 * r3) * gu(k, 0) * d8 +
                      1.0 / (4.0 * r3) * gu(k, 1) * d7 +
                      5.0 / 12.0 * gu(k, 1) * d8;
      }

    const Vec8 generic = fidelity_gradient_wrt_initial(pb, phi0);
    CHECK((generic - by_hand).norm() / std::max(1e-30, by_hand.norm()) <= 1e-10);
  }
}

TEST_CASE("optimize on a small dot problem") {
  TransferProblem pb = small_dot_problem();
  OptimizerConfig cfg;
  cfg.fidelity_target = 0.8;
  cfg.max_iters = 400;
  cfg.restarts = 2;
  cfg.seed = 5;
  cfg.init_scale = default_init_scale(pb.model.kind);
  cfg.threads = 2;

  const OptimizationResult result = optimize(pb, cfg);
  CHECK(result.fidelity >= 0.8);
  CHECK(result.converged);
  CHECK(result.reason == StopReason::FidelityTarget);
  CHECK(result.controls.slices() == pb.N);
  CHECK(result.fluence > 0.0);

  // History fidelities are monotone under backtracking acceptance.
  for (size_t i = 1; i < result.history.size(); ++i)
    CHECK(result.history[i].fidelity >= result.history[i - 1].fidelity);

  // The reported controls reproduce the reported fidelity.
  const auto rho = propagate(pb.rho0, pb.model, result.controls);
  CHECK(fidelity(rho.back(), pb.rho_target) ==
        doctest::Approx(result.fidelity).epsilon(1e-12));
}

TEST_CASE("determinism: identical seed and config give identical histories") {
  TransferProblem pb = small_dot_problem(32);
  OptimizerConfig cfg;
  cfg.fidelity_target = 0.7;
  cfg.max_iters = 60;
  cfg.restarts = 2;
  cfg.seed = 12;
  cfg.init_scale = 0.05;
  cfg.threads = 2;

  const OptimizationResult a = optimize(pb, cfg);
  const OptimizationResult b = optimize(pb, cfg);
  CHECK(a.restart_index == b.restart_index);
  CHECK(a.fidelity == b.fidelity);
  CHECK(std::memcmp(a.phi0_star.data(), b.phi0_star.data(), 8 * sizeof(double)) ==
        0);
  REQUIRE(a.history.size() == b.history.size());
  for (size_t i = 0; i < a.history.size(); ++i) {
    CHECK(a.history[i].fidelity == b.history[i].fidelity);
    CHECK(a.history[i].gradient_norm == b.history[i].gradient_norm);
    CHECK(a.history[i].step_size == b.history[i].step_size);
  }
}

TEST_CASE("stationarity when converging by gradient tolerance") {
  TransferProblem pb;
  pb.model = donor_chain_model(2.7);
  pb.T = 0.1;
  pb.N = 32;
  pb.integration.substeps = 64;
  OptimizerConfig cfg;
  cfg.fidelity_target = 1.0;  // unreachable, force the gradient criterion
  cfg.grad_tol = 1e-6;
  cfg.max_iters = 20000;
  cfg.restarts = 1;
  cfg.seed = 3;
  cfg.init_scale = 1e-4;
  cfg.threads = 1;

  const OptimizationResult result = optimize(pb, cfg);
  CHECK((result.reason == StopReason::GradientTol ||
         result.reason == StopReason::LineSearchStall));
  if (result.reason == StopReason::GradientTol) {
    CHECK(result.converged);
    CHECK(fidelity_gradient_wrt_initial(pb, result.phi0_star).norm() <=
          cfg.grad_tol);
  }
}

TEST_CASE("warm start and divergence reporting") {
  TransferProblem pb = small_dot_problem(32);
  OptimizerConfig cfg;
  cfg.fidelity_target = 0.5;
  cfg.max_iters = 200;
  cfg.restarts = 1;
  cfg.threads = 1;
  cfg.init_scale = 0.05;

  const OptimizationResult first = optimize(pb, cfg);
  CHECK(first.fidelity >= 0.5);

  OptimizerConfig warm = cfg;
  warm.warm_start = first.phi0_star;
  warm.max_iters = 5;
  const OptimizationResult again = optimize(pb, warm);
  CHECK(again.fidelity >= first.fidelity);

  OptimizerConfig bad = cfg;
  bad.warm_start = Vec8::Constant(1e120);
  bad.restarts = 2;
  CHECK_THROWS_AS(optimize(pb, bad), OptimizationFailed);
}
