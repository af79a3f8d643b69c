#include "shuttle/su3.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace shuttle {
namespace su3 {

namespace {

using cd = std::complex<double>;
constexpr cd I{0.0, 1.0};

std::array<Matrix3c, 8> make_basis() {
  std::array<Matrix3c, 8> x;
  for (auto& m : x) m.setZero();
  x[0](0, 1) = I;
  x[0](1, 0) = I;
  x[1](1, 2) = I;
  x[1](2, 1) = I;
  x[2](0, 2) = 1.0;
  x[2](2, 0) = -1.0;
  x[3](0, 1) = 1.0;
  x[3](1, 0) = -1.0;
  x[4](1, 2) = 1.0;
  x[4](2, 1) = -1.0;
  x[5](0, 2) = I;
  x[5](2, 0) = I;
  x[6](0, 0) = I;
  x[6](1, 1) = -I;
  const double s = 1.0 / std::sqrt(3.0);
  x[7](0, 0) = I * s;
  x[7](1, 1) = I * s;
  x[7](2, 2) = -2.0 * I * s;
  return x;
}

struct Table {
  // Dense C[i][j][k], 0-based, generated from the nine base values by
  // closing over full antisymmetry.
  double c[8][8][8] = {};
  std::vector<StructureEntry> nonzeros;

  Table() {
    const double r3 = std::sqrt(3.0);
    const struct {
      int i, j, k;
      double v;
    } base[] = {
        {1, 2, 3, -1.0}, {1, 4, 7, -2.0}, {1, 5, 6, 1.0},
        {2, 4, 6, -1.0}, {2, 5, 7, 1.0},  {2, 5, 8, -r3},
        {3, 4, 5, 1.0},  {3, 6, 7, 1.0},  {3, 6, 8, r3},
    };
    for (const auto& b : base) {
      const int p[3] = {b.i - 1, b.j - 1, b.k - 1};
      // All 6 permutations with their signs.
      const int perm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                              {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
      const double sign[6] = {1, 1, 1, -1, -1, -1};
      for (int n = 0; n < 6; ++n)
        c[p[perm[n][0]]][p[perm[n][1]]][p[perm[n][2]]] = sign[n] * b.v;
    }
    for (int j = 0; j < 8; ++j)
      for (int l = 0; l < 8; ++l)
        for (int i = 0; i < 8; ++i)
          if (c[j][l][i] != 0.0) nonzeros.push_back({j, l, i, c[j][l][i]});
  }
};

const Table& table() {
  static const Table t;
  return t;
}

void check_index(int l) {
  if (l < 1 || l > 8) throw std::out_of_range("su3 basis index out of range [1,8]");
}

}  // namespace

const Matrix3c& basis_matrix(int l) {
  static const std::array<Matrix3c, 8> basis = make_basis();
  check_index(l);
  return basis[l - 1];
}

double structure_constant(int i, int j, int k) {
  check_index(i);
  check_index(j);
  check_index(k);
  return table().c[i - 1][j - 1][k - 1];
}

Vec8 commutator_coefficients(int i, int j) {
  check_index(i);
  check_index(j);
  Vec8 out;
  for (int k = 0; k < 8; ++k) out[k] = table().c[i - 1][j - 1][k];
  return out;
}

Matrix3c assemble_hamiltonian(const Vec8& drift, const Vec8& controls) {
  Matrix3c ih = Matrix3c::Zero();
  for (int l = 0; l < 8; ++l) {
    const double w = drift[l] + controls[l];
    if (w != 0.0) ih += w * basis_matrix(l + 1);
  }
  return cd(0.0, -1.0) * ih;
}

const std::vector<StructureEntry>& structure_nonzeros() { return table().nonzeros; }

}  // namespace su3
}  // namespace shuttle
