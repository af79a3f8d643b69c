#include "shuttle/lie_poisson.hpp"

#include <cmath>
#include <string>

#include "shuttle/constants.hpp"

namespace shuttle {

IntegrationDiverged::IntegrationDiverged(double t_fail)
    : std::runtime_error("momentum integration diverged at t = " +
                         std::to_string(t_fail) + " ns"),
      t(t_fail) {}

namespace {

// Stack-only vectors/matrices sized by the model's control count (p <= 8).
using VecP = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 8, 1>;
using MatP8 = Eigen::Matrix<double, Eigen::Dynamic, 8, Eigen::RowMajor, 8, 8>;

// Per-model contraction tables, assembled once per integration.
struct ModelOps {
  int p;
  Mat8 b_drift;  // (B_drift)_{l,i} = sum_j a_j C_{jl}^i
  // For each active control: entries (l, i, c) contributing u * c to B_{l,i};
  // the same list gives V_{jl} = sum_i C_{jl}^i phi_i = d(phi_dot_l)/d(u_j).
  struct Term {
    int l, i;
    double c;
  };
  std::vector<std::vector<Term>> control_terms;
  MatP8 k_map;  // p x 8, u = K * phi

  explicit ModelOps(const SystemModel& m)
      : p(m.p()), k_map(m.momentum_to_canonical) {
    b_drift.setZero();
    for (const auto& e : su3::structure_nonzeros())
      b_drift(e.l, e.i) += m.drift[e.j] * e.c;
    control_terms.resize(p);
    for (int a = 0; a < p; ++a) {
      const int j = m.active[a] - 1;
      for (const auto& e : su3::structure_nonzeros())
        if (e.j == j) control_terms[a].push_back({e.l, e.i, e.c});
    }
  }

  Mat8 generator(const VecP& u_canonical) const {
    Mat8 b = b_drift;
    for (int a = 0; a < p; ++a) {
      const double u = u_canonical[a];
      for (const auto& t : control_terms[a]) b(t.l, t.i) += u * t.c;
    }
    return b;
  }

  Vec8 control_direction(int a, const Vec8& phi) const {
    Vec8 v = Vec8::Zero();
    for (const auto& t : control_terms[a]) v[t.l] += t.c * phi[t.i];
    return v;
  }
};

struct Derivs {
  Vec8 dphi;
  Mat8 dsens;
};

// Stage derivatives for the coupled system.  In the frozen-controls
// convention, u holds its slice-start value and the sensitivity picks up
// the chain through the slice-start state (m_slice).
inline void stage(const ModelOps& ops, const Vec8& phi, const Mat8& sens,
                  const VecP* u_frozen, const Mat8* m_slice,
                  bool with_sensitivity, Derivs& out) {
  const double inv_hbar = 1.0 / hbar_mev_ns;
  const VecP u = u_frozen ? *u_frozen : VecP(ops.k_map * phi);
  const Mat8 b = ops.generator(u);
  out.dphi = inv_hbar * (b * phi);
  if (!with_sensitivity) return;
  if (!u_frozen) {
    Mat8 ds = b;
    for (int a = 0; a < ops.p; ++a)
      ds.noalias() += ops.control_direction(a, phi) * ops.k_map.row(a);
    out.dsens.noalias() = inv_hbar * (ds * sens);
  } else {
    Mat8 d = b * sens;
    for (int a = 0; a < ops.p; ++a)
      d.noalias() +=
          ops.control_direction(a, phi) * (ops.k_map.row(a) * (*m_slice));
    out.dsens = inv_hbar * d;
  }
}

template <bool WithSens>
void run_integration(const SystemModel& model, const Vec8& phi0, double T, int N,
                     const IntegrationOptions& opts, MomentumTrajectory& out) {
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (opts.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  if (!phi0.allFinite()) throw std::invalid_argument("phi0 must be finite");

  const ModelOps ops(model);
  const double dt = T / N;
  const double h = dt / opts.substeps;

  out.dt = dt;
  out.times.resize(N + 1);
  out.phi.resize(N + 1);
  if (WithSens) out.sensitivity.resize(N + 1);

  Vec8 phi = phi0;
  Mat8 sens = Mat8::Identity();
  out.times[0] = 0.0;
  out.phi[0] = phi;
  if (WithSens) out.sensitivity[0] = sens;

  Derivs k1, k2, k3, k4;
  for (int k = 0; k < N; ++k) {
    VecP u_frozen;
    Mat8 m_slice;
    const VecP* u_ptr = nullptr;
    const Mat8* m_ptr = nullptr;
    if (opts.slice_frozen_controls) {
      u_frozen = ops.k_map * phi;
      m_slice = sens;
      u_ptr = &u_frozen;
      m_ptr = &m_slice;
    }
    for (int s = 0; s < opts.substeps; ++s) {
      stage(ops, phi, sens, u_ptr, m_ptr, WithSens, k1);
      if (WithSens) {
        stage(ops, phi + (0.5 * h) * k1.dphi, sens + (0.5 * h) * k1.dsens, u_ptr,
              m_ptr, true, k2);
        stage(ops, phi + (0.5 * h) * k2.dphi, sens + (0.5 * h) * k2.dsens, u_ptr,
              m_ptr, true, k3);
        stage(ops, phi + h * k3.dphi, sens + h * k3.dsens, u_ptr, m_ptr, true, k4);
        sens += (h / 6.0) *
                (k1.dsens + 2.0 * k2.dsens + 2.0 * k3.dsens + k4.dsens);
      } else {
        stage(ops, phi + (0.5 * h) * k1.dphi, sens, u_ptr, m_ptr, false, k2);
        stage(ops, phi + (0.5 * h) * k2.dphi, sens, u_ptr, m_ptr, false, k3);
        stage(ops, phi + h * k3.dphi, sens, u_ptr, m_ptr, false, k4);
      }
      phi += (h / 6.0) * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
    }
    const double t_next = (k + 1) * dt;
    if (!phi.allFinite() || (WithSens && !sens.allFinite()))
      throw IntegrationDiverged(t_next);
    out.times[k + 1] = t_next;
    out.phi[k + 1] = phi;
    if (WithSens) out.sensitivity[k + 1] = sens;
  }
}

}  // namespace

Vec8 momentum_rhs(const SystemModel& model, const Vec8& phi) {
  const ModelOps ops(model);
  return ops.generator(ops.k_map * phi) * phi;
}

Mat8 momentum_jacobian(const SystemModel& model, const Vec8& phi) {
  const ModelOps ops(model);
  Mat8 ds = ops.generator(ops.k_map * phi);
  for (int a = 0; a < model.p(); ++a)
    ds.noalias() += ops.control_direction(a, phi) * ops.k_map.row(a);
  return ds;
}

Eigen::VectorXd controls_from_momentum(const SystemModel& model, const Vec8& phi) {
  return model.controls_from_momentum(phi);
}

MomentumTrajectory integrate_with_sensitivity(const SystemModel& model,
                                              const Vec8& phi0, double T, int N,
                                              const IntegrationOptions& opts) {
  MomentumTrajectory out;
  run_integration<true>(model, phi0, T, N, opts, out);
  return out;
}

std::vector<Vec8> integrate_momentum(const SystemModel& model, const Vec8& phi0,
                                     double T, int N,
                                     const IntegrationOptions& opts) {
  MomentumTrajectory out;
  run_integration<false>(model, phi0, T, N, opts, out);
  return std::move(out.phi);
}

}  // namespace shuttle
