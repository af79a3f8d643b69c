#include "shuttle/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <thread>

namespace shuttle {

namespace {

constexpr int max_halvings = 40;
constexpr double step_growth = 1.5;

PiecewiseControls controls_from_phis(const SystemModel& model,
                                     const std::vector<Vec8>& phis, double dt) {
  const int n = static_cast<int>(phis.size()) - 1;
  PiecewiseControls out;
  out.dt = dt;
  out.model_name = model.name;
  out.control_names = model.control_names;
  out.values.resize(n, model.p());
  for (int k = 0; k < n; ++k)
    out.values.row(k) = model.controls_from_momentum(phis[k]).transpose();
  return out;
}

struct Evaluation {
  double fidelity;
  PiecewiseControls controls;
};

Evaluation evaluate(const TransferProblem& pb, const Vec8& phi0) {
  const auto phis =
      integrate_momentum(pb.model, phi0, pb.T, pb.N, pb.integration);
  Evaluation ev;
  ev.controls = controls_from_phis(pb.model, phis, pb.T / pb.N);
  const auto rho = propagate(pb.rho0, pb.model, ev.controls);
  ev.fidelity = fidelity(rho.back(), pb.rho_target);
  return ev;
}

// Uniform in [0, 1) from the generator's raw 64-bit output; spelled out
// so histories are bit-identical across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

RestartRecord run_restart(const TransferProblem& pb, const OptimizerConfig& cfg,
                          int index) {
  RestartRecord rec;
  rec.restart_index = index;
  Vec8 phi;
  if (cfg.warm_start) {
    phi = *cfg.warm_start;
  } else {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(index));
    for (int i = 0; i < 8; ++i)
      phi[i] = cfg.init_scale * (2.0 * uniform01(rng) - 1.0);
  }

  try {
    double f = evaluate(pb, phi).fidelity;
    double eps = cfg.epsilon0;
    rec.phi0 = phi;
    rec.fidelity = f;
    rec.reason = StopReason::MaxIters;

    for (int iter = 1; iter <= cfg.max_iters; ++iter) {
      if (f >= cfg.fidelity_target) {
        rec.reason = StopReason::FidelityTarget;
        break;
      }
      const Vec8 grad = fidelity_gradient_wrt_initial(pb, phi);
      const double gnorm = grad.norm();
      if (gnorm <= cfg.grad_tol) {
        rec.reason = StopReason::GradientTol;
        break;
      }
      // Trust-region cap: never move phi(0) by more than half its scale in
      // one step, so the ascent settles on the nearest extremal family
      // instead of overshooting to high-fluence ones.
      const double cap =
          0.5 * std::max(phi.norm(), cfg.init_scale) / gnorm;
      double step = std::min(eps, cap);
      bool accepted = false;
      bool halved = false;
      for (int half = 0; half <= max_halvings; ++half) {
        const Vec8 trial = phi + step * grad;
        double f_trial;
        try {
          f_trial = evaluate(pb, trial).fidelity;
        } catch (const IntegrationDiverged&) {
          // An overlong trial step blew up the quadratic dynamics; shrink.
          step *= 0.5;
          halved = true;
          continue;
        }
        if (f_trial > f) {
          phi = trial;
          f = f_trial;
          accepted = true;
          break;
        }
        step *= 0.5;
        halved = true;
      }
      if (!accepted) {
        rec.reason = StopReason::LineSearchStall;
        break;
      }
      rec.history.push_back({iter, f, gnorm, step});
      eps = halved ? step : step * step_growth;
      rec.phi0 = phi;
      rec.fidelity = f;
    }
    if (f >= cfg.fidelity_target) rec.reason = StopReason::FidelityTarget;
  } catch (const IntegrationDiverged& e) {
    rec.reason = StopReason::Diverged;
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

double default_init_scale(ModelKind kind) {
  return kind == ModelKind::DonorChain ? 1e-4 : 0.05;
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::FidelityTarget: return "fidelity_target";
    case StopReason::GradientTol: return "grad_tol";
    case StopReason::MaxIters: return "max_iters";
    case StopReason::LineSearchStall: return "line_search_stall";
    case StopReason::Diverged: return "diverged";
  }
  return "unknown";
}

Eigen::MatrixXd du_dphi(const SystemModel& model) {
  return model.momentum_to_canonical;
}

double evaluate_fidelity(const TransferProblem& pb, const Vec8& phi0) {
  return evaluate(pb, phi0).fidelity;
}

Vec8 fidelity_gradient_wrt_initial(const TransferProblem& pb, const Vec8& phi0) {
  const MomentumTrajectory traj =
      integrate_with_sensitivity(pb.model, phi0, pb.T, pb.N, pb.integration);
  const PiecewiseControls controls = pulses_from_trajectory(pb.model, traj);
  const Eigen::MatrixXd grad_u =
      gradient_wrt_controls(pb.model, controls, pb.rho0, pb.rho_target);
  const Eigen::MatrixXd k_map = du_dphi(pb.model);
  Vec8 grad = Vec8::Zero();
  for (int k = 0; k < pb.N; ++k) {
    const Vec8 w = k_map.transpose() * grad_u.row(k).transpose();
    grad.noalias() += traj.sensitivity[k].transpose() * w;
  }
  return grad;
}

OptimizationResult optimize(const TransferProblem& pb,
                            const OptimizerConfig& config) {
  if (config.restarts < 1)
    throw std::invalid_argument("restarts must be >= 1");
  if (!(config.fidelity_target > 0.0 && config.fidelity_target <= 1.0))
    throw std::invalid_argument("fidelity_target must be in (0, 1]");

  std::vector<RestartRecord> records(config.restarts);
  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, config.restarts);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= config.restarts) return;
      records[idx] = run_restart(pb, config, idx);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int best = -1;
  for (int i = 0; i < config.restarts; ++i) {
    if (records[i].reason == StopReason::Diverged) continue;
    if (best < 0 || records[i].fidelity > records[best].fidelity) best = i;
  }
  if (best < 0) {
    std::ostringstream msg;
    msg << "all " << config.restarts << " restarts diverged:";
    for (const auto& r : records)
      msg << " [restart " << r.restart_index << ": " << r.error << "]";
    throw OptimizationFailed(msg.str());
  }

  const RestartRecord& win = records[best];
  OptimizationResult result;
  result.phi0_star = win.phi0;
  result.fidelity = win.fidelity;
  result.history = win.history;
  result.reason = win.reason;
  result.converged = win.reason == StopReason::FidelityTarget ||
                     win.reason == StopReason::GradientTol;
  result.restart_index = best;
  result.restarts = std::move(records);

  const auto phis =
      integrate_momentum(pb.model, result.phi0_star, pb.T, pb.N, pb.integration);
  result.controls = controls_from_phis(pb.model, phis, pb.T / pb.N);
  result.fluence = fluence(pb.model, result.controls);
  return result;
}

}  // namespace shuttle
