#ifndef SHUTTLE_SPIN_SIM_HPP
#define SHUTTLE_SPIN_SIM_HPP

#include <array>
#include <string>
#include <vector>

#include "shuttle/propagator.hpp"

namespace shuttle {

// Hyperfine/Zeeman parameters, already converted to meV.
struct SpinConfig {
  double a_mev = 0.0;        // coefficient of sigma_e . sigma_N
  double b_gauss = 0.0;      // magnetic field
  double gamma_e_mev_per_g = 0.0;
  double gamma_n_mev_per_g = 0.0;
};

// Builds a SpinConfig from spectroscopic inputs: the hyperfine splitting
// (MHz) and gyromagnetic precession frequencies (MHz/G).  The observable
// splitting between the sigma.sigma eigenvalues +1 and -3 is 4A, so the
// Hamiltonian coefficient is h*f/4 unless raw_coefficient requests the
// literal h*f.
SpinConfig make_spin_config(double hyperfine_mhz, bool raw_coefficient,
                            double gamma_e_mhz_per_g, double gamma_n_mhz_per_g,
                            double b_gauss);

// Flattened index over |site> (x) |e-spin> (x) |N1> (x) |N2> (x) |N3>,
// site-major; spin arguments are 0 = up, 1 = down.
int hyperfine_index(int site, int es, int n1, int n2, int n3);

inline constexpr int hyperfine_dim = 48;

// One electron-nuclear eigenstate of a single occupied site, expressed in
// the (e-spin, nuclear-spin) basis [uu, ud, du, dd].
struct HyperfineEigenstate {
  std::string label;  // up_up, down_down, anti_plus, anti_minus
  double energy;      // meV
  Eigen::Vector4cd state;
};

// The four single-site eigenpairs, sorted by energy (ties keep the order
// anti_minus, down_down, anti_plus, up_up).  The aligned states are exact
// eigenstates at every field; the anti-aligned pair rotates from an equal
// superposition at B = 0 towards pure states at large B.
std::array<HyperfineEigenstate, 4> single_site_hyperfine_eigenstates(
    const SpinConfig& cfg);

// Full 48x48 Hermitian: donor-chain spatial part plus electron Zeeman,
// nuclear Zeeman and on-site hyperfine couplings.
Eigen::MatrixXcd build_full_hamiltonian(double omega12, double omega23,
                                        const SpinConfig& cfg, double delta);

// |site 1> (x) |pair_state on (e, N1)> (x) |up, up> on nuclei 2 and 3.
Eigen::VectorXcd make_initial_site1_state(const Eigen::Vector4cd& pair_state);

struct SpinTrajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
};

// Slice-wise exact exponential propagation of the 48-dimensional state
// under the given spatial pulses.
SpinTrajectory propagate_spin(const Eigen::VectorXcd& psi0,
                              const PiecewiseControls& controls,
                              const SpinConfig& cfg, double delta);

// Unnormalized site-3 block, partial-traced over nuclei 1 and 2; its trace
// is the site-3 population.
Eigen::Matrix4cd site3_reduced(const Eigen::VectorXcd& psi);

// D = 1 - ||rho_t - rho_hf||_2 (spectral norm).
double distance_measure(const Eigen::Matrix4cd& rho_t,
                        const Eigen::Matrix4cd& rho_hf);

// Total site-3 population.
double spatial_fidelity(const Eigen::VectorXcd& psi);

double site_population(const Eigen::VectorXcd& psi, int site);

// Diagonal of the total spin projection sigma_e^z/2 + sum_i sigma_Ni^z/2.
Eigen::VectorXd total_sz_diagonal();

}  // namespace shuttle

#endif
