#include "qvor/sites.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qvor/error.hpp"

namespace qvor {

std::vector<Eigen::Vector3d> example_sites(int id) {
  const double t = 1.0 / std::sqrt(3.0);
  const double w = std::sqrt(2.0 / 3.0);
  switch (id) {
    case 1:
      return {{1, 0, 0}, {-1, 0, 0}};
    case 2:
      return {{0, 0, 1}, {0, 0, -1}};
    case 3:
      return {{t, t, t}, {t, t, -t}, {t, -t, t}, {t, -t, -t},
              {-t, w, 0}, {-t, -w, 0}, {-t, 0, w}, {-t, 0, -w}};
    default:
      throw Error(ErrorCode::kInvalidArgument, "unknown example id " + std::to_string(id));
  }
}

std::vector<Eigen::Vector3d> random_sites(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  while (out.size() < n) {
    const Eigen::Vector3d v(g(rng), g(rng), g(rng));
    if (v.norm() > 1e-6) out.push_back(v.normalized());
  }
  return out;
}

}  // namespace qvor
