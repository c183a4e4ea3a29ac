#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qvor/qdm.hpp"

namespace qvor {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return vec().norm(); }
  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochVector from(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }
};

// Generalized Bloch coordinates of a d-level Hermitian unit-trace matrix.
//
// Layout (1-based, as xi_1 ... xi_{d^2-1}):
//   xi_1 .. xi_{d-1}     diagonal entries 1..d-1, rho_ii = (xi_i + 1) / d;
//                        rho_dd = (1 - sum_i xi_i) / d
//   xi_d, xi_{d+1}, ...  off-diagonal pairs of the upper triangle, taken
//                        row-major: (1,2), (1,3), ..., (1,d), (2,3), ...,
//                        (d-1,d). Pair (a, a+1) sits at entry (j,k), j < k,
//                        as rho_jk = (xi_a - i xi_{a+1}) / 2.
// So (1,2) holds xi_d, xi_{d+1}; (1,d) holds xi_{3d-4}, xi_{3d-3};
// (d-1,d) holds xi_{d^2-2}, xi_{d^2-1}. For d = 2 this is (xi_1, xi_2, xi_3)
// = (z, x, y).
struct GeneralizedBloch {
  int dim = 0;
  std::vector<double> xi;  // xi[i-1] holds xi_i

  explicit GeneralizedBloch(int d);
  GeneralizedBloch(int d, std::vector<double> coords);

  double operator()(int one_based) const { return xi[static_cast<size_t>(one_based - 1)]; }
  double& operator()(int one_based) { return xi[static_cast<size_t>(one_based - 1)]; }
};

// 1-based index of the real part of the off-diagonal pair at (row, col),
// both 1-based with row < col.
int offdiag_xi_index(int d, int row, int col);

DensityMatrix bloch_to_density(const BlochVector& v, const Tolerances& tol = {});
BlochVector density_to_bloch(const CMatrix& rho);

CMatrix xi_to_density(const GeneralizedBloch& g);
GeneralizedBloch density_to_xi(const CMatrix& rho, const Tolerances& tol = {});

bool is_pure(const CMatrix& rho, double tol = 1e-9);

enum class SphereScheme { kFibonacci, kUniformRandom };

SphereScheme parse_sphere_scheme(const std::string& name);
const char* to_string(SphereScheme scheme);

std::vector<BlochVector> sample_sphere(std::size_t n,
                                       SphereScheme scheme = SphereScheme::kFibonacci,
                                       std::uint64_t seed = 0);

// Uniform samples in the ball interior, for diagnostics.
std::vector<BlochVector> sample_ball(std::size_t n, std::uint64_t seed);

BlochVector shrink_to_radius(const BlochVector& v, double r,
                             double unit_tol = 1e-9);

}  // namespace qvor
