#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Dense>

#include "qvor/bloch.hpp"
#include "qvor/seb.hpp"

namespace qvor {

// One-qubit channel acting on Bloch vectors as v -> M v + b.
struct QubitChannel {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();

  static QubitChannel identity() { return {}; }
  // rho -> (1-p) rho + p I/2
  static QubitChannel depolarizing(double p);
  static QubitChannel rotation(const Eigen::Matrix3d& r) { return {r, Eigen::Vector3d::Zero()}; }

  // {"m": [9 reals, row-major], "b": [3 reals]}
  static QubitChannel from_json(const std::string& text);
  std::string to_json() const;
};

BlochVector apply_channel(const QubitChannel& ch, const BlochVector& v,
                          double tol_psd = 1e-9);

struct CapacityOptions {
  std::size_t samples = 2562;
  SphereScheme scheme = SphereScheme::kFibonacci;
  std::uint64_t seed = 0;
  bool interior = false;  // sample the ball instead of the sphere
  SEBConfig seb;
};

struct CapacityEstimate {
  double value = 0.0;  // nats
  double bits() const;
  std::size_t samples = 0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  BlochVector center;
};

// Sample inputs, push them through the channel, and take the divergence
// radius of the image set.
CapacityEstimate holevo_capacity_estimate(const QubitChannel& ch,
                                          const CapacityOptions& options = {});

}  // namespace qvor
