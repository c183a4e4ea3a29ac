#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace qvor {

// Built-in site configurations, as unit vectors in the sphere picture used by
// PureStateModel. On a section of level d:
//
//   1: the two diagonal pure states, (xi_1, xi_d, xi_{d+1}) = (d-1, 0, 0) and
//      (-1, 0, 0), i.e. u = (+-1, 0, 0).
//   2: a pair mirrored in xi_{d+1}, u = (0, 0, +-1).
//   3: eight sites, (1, +-1, +-1)/sqrt3, (-1, +-sqrt2, 0)/sqrt3 and
//      (-1, 0, +-sqrt2)/sqrt3.
//
// Throws kInvalidArgument for any other id.
std::vector<Eigen::Vector3d> example_sites(int id);

// Seeded uniform random sites on the unit sphere.
std::vector<Eigen::Vector3d> random_sites(std::size_t n, std::uint64_t seed);

}  // namespace qvor
