#include "qvor/bloch.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qvor {

GeneralizedBloch::GeneralizedBloch(int d)
    : dim(d), xi(static_cast<size_t>(d * d - 1), 0.0) {
  if (d < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
}

GeneralizedBloch::GeneralizedBloch(int d, std::vector<double> coords)
    : dim(d), xi(std::move(coords)) {
  if (d < 2) throw Error(ErrorCode::kInvalidArgument, "dimension must be >= 2");
  if (xi.size() != static_cast<size_t>(d * d - 1)) {
    throw Error(ErrorCode::kDimensionMismatch, "xi must have d^2-1 entries");
  }
}

int offdiag_xi_index(int d, int row, int col) {
  // pairs before row `row`: sum_{j<row} (d - j)
  int pairs_before = 0;
  for (int j = 1; j < row; ++j) pairs_before += d - j;
  const int pair = pairs_before + (col - row - 1);
  return d + 2 * pair;
}

DensityMatrix bloch_to_density(const BlochVector& v, const Tolerances& tol) {
  const double n = v.norm();
  if (n > 1.0 + tol.psd) {
    throw Error(ErrorCode::kOutsideBall, "Bloch vector outside the unit ball",
                n - 1.0);
  }
  CMatrix m(2, 2);
  m(0, 0) = Complex(0.5 * (1.0 + v.z), 0.0);
  m(0, 1) = Complex(0.5 * v.x, -0.5 * v.y);
  m(1, 0) = Complex(0.5 * v.x, 0.5 * v.y);
  m(1, 1) = Complex(0.5 * (1.0 - v.z), 0.0);
  return DensityMatrix::validate(m, tol);
}

BlochVector density_to_bloch(const CMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw Error(ErrorCode::kDimensionMismatch, "Bloch vectors need d = 2");
  }
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

CMatrix xi_to_density(const GeneralizedBloch& g) {
  const int d = g.dim;
  CMatrix m = CMatrix::Zero(d, d);
  double diag_sum = 0.0;
  for (int i = 1; i <= d - 1; ++i) {
    m(i - 1, i - 1) = (g(i) + 1.0) / d;
    diag_sum += g(i);
  }
  m(d - 1, d - 1) = (-diag_sum + 1.0) / d;
  int a = d;
  for (int j = 1; j <= d; ++j) {
    for (int k = j + 1; k <= d; ++k, a += 2) {
      const Complex upper(0.5 * g(a), -0.5 * g(a + 1));
      m(j - 1, k - 1) = upper;
      m(k - 1, j - 1) = std::conj(upper);
    }
  }
  return m;
}

GeneralizedBloch density_to_xi(const CMatrix& rho, const Tolerances& tol) {
  if (rho.rows() != rho.cols()) throw Error(ErrorCode::kNotSquare, "matrix must be square");
  const int d = static_cast<int>(rho.rows());
  const double defect = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (defect > tol.trace) {
    throw Error(ErrorCode::kTraceNotOne, "trace differs from one", defect);
  }
  GeneralizedBloch g(d);
  for (int i = 1; i <= d - 1; ++i) g(i) = d * rho(i - 1, i - 1).real() - 1.0;
  int a = d;
  for (int j = 1; j <= d; ++j) {
    for (int k = j + 1; k <= d; ++k, a += 2) {
      g(a) = 2.0 * rho(j - 1, k - 1).real();
      g(a + 1) = -2.0 * rho(j - 1, k - 1).imag();
    }
  }
  return g;
}

bool is_pure(const CMatrix& rho, double tol) {
  if (rho.rows() == 1) return true;
  const auto eig = hermitian_eig(rho);
  return eig.eigenvalues(1) <= tol;
}

SphereScheme parse_sphere_scheme(const std::string& name) {
  if (name == "fibonacci") return SphereScheme::kFibonacci;
  if (name == "uniform-random" || name == "random") return SphereScheme::kUniformRandom;
  throw Error(ErrorCode::kInvalidArgument, "unknown sampling scheme '" + name + "'");
}

const char* to_string(SphereScheme scheme) {
  return scheme == SphereScheme::kFibonacci ? "fibonacci" : "uniform-random";
}

std::vector<BlochVector> sample_sphere(std::size_t n, SphereScheme scheme,
                                       std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "need at least one point");
  std::vector<BlochVector> pts;
  pts.reserve(n);
  if (scheme == SphereScheme::kFibonacci) {
    const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / dn;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i);
      pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return pts;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (pts.size() < n) {
    const Eigen::Vector3d v(gauss(rng), gauss(rng), gauss(rng));
    const double len = v.norm();
    if (len < 1e-12) continue;
    pts.push_back(BlochVector::from(v / len));
  }
  return pts;
}

std::vector<BlochVector> sample_ball(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto dirs = sample_sphere(n, SphereScheme::kUniformRandom, seed ^ 0x9e3779b97f4a7c15ULL);
  for (auto& v : dirs) {
    const double r = std::cbrt(unit(rng));
    v = BlochVector::from(r * v.vec());
  }
  return dirs;
}

BlochVector shrink_to_radius(const BlochVector& v, double r, double unit_tol) {
  if (!(r >= 0.0 && r <= 1.0)) {
    throw Error(ErrorCode::kRadiusOutOfRange, "shrink radius must lie in [0,1]", r);
  }
  const double n = v.norm();
  if (std::abs(n - 1.0) > unit_tol) {
    throw Error(ErrorCode::kNotUnit, "shrink expects a pure (unit) Bloch vector",
                n - 1.0);
  }
  return BlochVector::from(r * v.vec());
}

}  // namespace qvor
