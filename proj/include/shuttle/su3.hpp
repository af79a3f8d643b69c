#ifndef SHUTTLE_SU3_HPP
#define SHUTTLE_SU3_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace shuttle {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;
using Matrix3c = Eigen::Matrix3cd;

namespace su3 {

// Skew-Hermitian traceless basis of su(3), a rearrangement of the
// Gell-Mann matrices.  Indices are 1-based throughout this module.
const Matrix3c& basis_matrix(int l);

// C_ij^k, fully antisymmetric in all three indices.
double structure_constant(int i, int j, int k);

// The 8-vector {C_ij^k}_k, so that [X_i, X_j] = sum_k C_ij^k X_k.
Vec8 commutator_coefficients(int i, int j);

// H = -i * sum_l (drift_l + control_l) X_l.  Hermitian and traceless.
Matrix3c assemble_hamiltonian(const Vec8& drift, const Vec8& controls);

struct StructureEntry {
  int j, l, i;  // 0-based
  double c;     // C_{jl}^{i}
};

// Sparse list of all nonzero structure constants (54 entries), laid out
// for contractions of the form sum_{j,i} c_j C_{jl}^i phi_i.
const std::vector<StructureEntry>& structure_nonzeros();

}  // namespace su3
}  // namespace shuttle

#endif
