#include "qvor/channel.hpp"

#include <cmath>
#include <numbers>

#include "qvor/io.hpp"

namespace qvor {

QubitChannel QubitChannel::depolarizing(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "depolarizing probability must lie in [0,1]", p);
  }
  return {(1.0 - p) * Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero()};
}

QubitChannel QubitChannel::from_json(const std::string& text) {
  const auto j = io::parse_json(text, "channel");
  if (!j.is_object() || !j.contains("m") || !j.contains("b")) {
    throw Error(ErrorCode::kInvalidArgument, "channel needs fields \"m\" and \"b\"");
  }
  std::vector<double> m, b;
  try {
    m = j.at("m").get<std::vector<double>>();
    b = j.at("b").get<std::vector<double>>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "\"m\" and \"b\" must be arrays of numbers");
  }
  if (m.size() != 9 || b.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "\"m\" needs 9 reals and \"b\" 3 reals");
  }
  QubitChannel ch;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) ch.m(r, c) = m[static_cast<size_t>(3 * r + c)];
    ch.b(r) = b[static_cast<size_t>(r)];
  }
  return ch;
}

std::string QubitChannel::to_json() const {
  io::Json j;
  std::vector<double> mv;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) mv.push_back(m(r, c));
  j["m"] = mv;
  j["b"] = std::vector<double>{b(0), b(1), b(2)};
  return j.dump();
}

BlochVector apply_channel(const QubitChannel& ch, const BlochVector& v, double tol_psd) {
  const Eigen::Vector3d out = ch.m * v.vec() + ch.b;
  const double n = out.norm();
  if (n > 1.0 + tol_psd) {
    throw Error(ErrorCode::kImageOutsideBall, "channel maps a state outside the Bloch ball",
                n - 1.0);
  }
  return BlochVector::from(out);
}

double CapacityEstimate::bits() const { return value / std::numbers::ln2; }

CapacityEstimate holevo_capacity_estimate(const QubitChannel& ch,
                                          const CapacityOptions& options) {
  if (options.samples < 2) {
    throw Error(ErrorCode::kInvalidArgument, "capacity estimate needs at least two samples");
  }
  const auto inputs = options.interior
                          ? sample_ball(options.samples, options.seed)
                          : sample_sphere(options.samples, options.scheme, options.seed);
  std::vector<DensityMatrix> images;
  images.reserve(inputs.size());
  for (const auto& v : inputs) {
    auto w = apply_channel(ch, v);
    // rounding can leave a pure image a hair outside the ball
    if (w.norm() > 1.0) w = BlochVector::from(w.vec() / w.norm());
    images.push_back(bloch_to_density(w));
  }
  const auto seb = smallest_enclosing_ball(images, options.seb);
  CapacityEstimate est;
  est.value = seb.radius;
  est.samples = inputs.size();
  est.gap = seb.gap;
  est.iterations = seb.iterations;
  est.converged = seb.converged;
  est.center = density_to_bloch(seb.center.matrix());
  return est;
}

}  // namespace qvor
