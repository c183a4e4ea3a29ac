#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qvor/bloch.hpp"
#include "qvor/parallel.hpp"
#include "qvor/qdm.hpp"

namespace qvor {

struct SEBConfig {
  double gap_tol = 1e-7;       // stop once upper - lower bound <= gap_tol
  int max_iterations = 100000;
  double min_eigenvalue = 1e-9;  // centers must keep every eigenvalue above this
  Execution exec = Execution::kParallel;
};

struct SEBResult {
  explicit SEBResult(DensityMatrix c) : center(std::move(c)) {}

  DensityMatrix center;
  double radius = 0.0;       // max_i D(sigma_i || center), nats
  double lower_bound = 0.0;  // certified lower bound on the optimal radius
  double gap = 0.0;          // radius - lower_bound
  std::vector<std::size_t> support;  // indices within the gap of the radius
  int iterations = 0;
  bool converged = false;
};

// Divergence ball center: minimizes f(rho) = max_i D(sigma_i || rho) over
// states rho with every eigenvalue >= min_eigenvalue. The points sit in the
// first argument of D and may be pure.
//
// f is convex in the generalized Bloch vector of rho, so a central-cut
// ellipsoid method in those d^2-1 coordinates applies. Cuts come from the
// gradient of the farthest point's divergence (the derivative of log rho in
// divided-difference form), or from -lambda_min when an iterate leaves the
// state space. Each objective cut also bounds the optimum from below by
// f(x) - |g|_P over the current ellipsoid, so radius - lower_bound is a
// certificate. The rate depends on d only, not on the number of points.
SEBResult smallest_enclosing_ball(std::span<const DensityMatrix> points,
                                  const SEBConfig& config = {});

// D(sigma_i || rho) for every point, with log rho computed once. The serial
// reference recomputes each divergence through qdm::divergence.
std::vector<double> divergences_to_center(std::span<const DensityMatrix> points,
                                          const CMatrix& center,
                                          Execution exec = Execution::kParallel);
std::vector<double> divergences_to_center_reference(std::span<const DensityMatrix> points,
                                                    const CMatrix& center);

struct GridSpec {
  double spacing = 0.005;     // finest lattice spacing in the Bloch ball
  double tolerance = 0.01;    // requested accuracy of the center location
  double coarse_spacing = 0.08;
  int window = 4;             // half-width, in fine nodes, of each refinement
  Execution exec = Execution::kParallel;
};

struct GridCenter {
  BlochVector center;
  double radius = 0.0;       // max_i D(sigma_i || center) at the best node
  double error_bound = 0.0;  // from the spread to neighbouring nodes
  std::size_t nodes_evaluated = 0;
};

// Qubit D(sigma || rho_c) from Bloch vectors alone:
//   Tr sigma log sigma - log((1-|c|^2)/4)/2 - atanh(|c|) s.c/|c|
double qubit_divergence(const BlochVector& s, const BlochVector& c);

// Grid minimax over the Bloch ball: exhaustive on a coarse lattice, then
// exhaustive windows of successively halved spacing around the best node,
// down to `spacing`. max_i D is convex in the center, so the windows track
// the minimizer. Throws kGridTooCoarse when spacing > tolerance.
GridCenter brute_force_center(std::span<const BlochVector> points, const GridSpec& spec = {});

// Same search with a plain serial node loop; kept to check the kernel.
GridCenter brute_force_center_reference(std::span<const BlochVector> points,
                                        const GridSpec& spec = {});

}  // namespace qvor
