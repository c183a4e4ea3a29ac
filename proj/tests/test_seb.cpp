#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qvor/bloch.hpp"
#include "qvor/seb.hpp"
#include "test_util.hpp"

using namespace qvor;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a qvor::Error");
  return ErrorCode::kInvalidArgument;
}

std::vector<DensityMatrix> as_states(const std::vector<BlochVector>& vs) {
  std::vector<DensityMatrix> out;
  for (const auto& v : vs) out.push_back(bloch_to_density(v));
  return out;
}

// Mixed and pure qubit points, n of them.
std::vector<BlochVector> random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto dirs = sample_sphere(n, SphereScheme::kUniformRandom, seed);
  std::vector<BlochVector> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = i % 3 == 0 ? 1.0 : std::cbrt(u(rng));
    out.push_back(BlochVector::from(r * dirs[i].vec()));
  }
  return out;
}

}  // namespace

TEST_CASE("single full-rank point is its own center") {
  const std::vector<DensityMatrix> one{bloch_to_density({0.1, 0.2, 0.3})};
  const auto res = smallest_enclosing_ball(one);
  CHECK(res.converged);
  CHECK(std::abs(res.radius) < 1e-12);
  CHECK(test::max_abs(res.center.matrix() - one[0].matrix()) < 1e-12);
  CHECK(res.support == std::vector<std::size_t>{0});
  CHECK(code_of([] { smallest_enclosing_ball(std::span<const DensityMatrix>{}); }) == ErrorCode::kEmptySites);

  // repeated point: certified radius, and Pinsker puts the center within sqrt(2 radius)
  const std::vector<DensityMatrix> twice{one[0], one[0]};
  const auto rep = smallest_enclosing_ball(twice);
  CHECK(rep.converged);
  CHECK(rep.radius <= rep.gap + 1e-15);
  const auto diff = hermitian_eig(rep.center.matrix() - one[0].matrix()).eigenvalues;
  CHECK(diff.cwiseAbs().sum() <= std::sqrt(2.0 * rep.radius) + 1e-12);

  // a pure point: the infimum 0 sits on the boundary of the state space
  const std::vector<DensityMatrix> pure{bloch_to_density({0, 0, 1})};
  const auto edge = smallest_enclosing_ball(pure);
  CHECK(edge.converged);
  CHECK(edge.radius <= 1e-7);
  CHECK(hermitian_eig(edge.center.matrix()).eigenvalues(1) >= 1e-9);
}

TEST_CASE("two orthogonal pure states") {
  const auto pts = as_states({{0, 0, 1}, {0, 0, -1}});
  const auto res = smallest_enclosing_ball(pts);
  CHECK(res.converged);
  CHECK(res.radius == doctest::Approx(std::numbers::ln2).epsilon(1e-9));
  CHECK(test::max_abs(res.center.matrix() - CMatrix::Identity(2, 2) / 2.0) < 1e-9);
  CHECK(res.support.size() == 2);

  // 1-D scan over diag(t, 1-t)
  double best_t = 0.0, best_v = 1e300;
  for (int k = 1; k < 10000; ++k) {
    const double t = k / 10000.0;
    const double v = std::max(-std::log(t), -std::log(1.0 - t));
    if (v < best_v) {
      best_v = v;
      best_t = t;
    }
  }
  CHECK(best_t == doctest::Approx(0.5));
  CHECK(res.radius == doctest::Approx(best_v).epsilon(1e-9));

  const std::vector<BlochVector> bv{{0, 0, 1}, {0, 0, -1}};
  const auto grid = brute_force_center(bv, {.spacing = 0.01, .tolerance = 0.01});
  CHECK(grid.center.norm() <= 0.01);
  CHECK(grid.radius == doctest::Approx(std::numbers::ln2).epsilon(1e-3));
}

TEST_CASE("Fibonacci sphere is centered at I/2 with radius ln 2") {
  const auto pts = as_states(sample_sphere(2562));
  const auto res = smallest_enclosing_ball(pts);
  CHECK(res.converged);
  CHECK(density_to_bloch(res.center.matrix()).norm() < 1e-3);
  CHECK(std::abs(res.radius - std::numbers::ln2) <= 1e-3);
  for (double dv : divergences_to_center(pts, CMatrix::Identity(2, 2) / 2.0)) {
    CHECK(dv == doctest::Approx(std::numbers::ln2).epsilon(1e-12));
  }
}

TEST_CASE("qubit closed form matches the matrix divergence") {
  std::mt19937_64 rng(5);
  const auto cloud = random_cloud(60, 9);
  const auto centers = random_cloud(60, 10);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto c = BlochVector::from(0.95 * centers[i].vec());
    const double closed = qubit_divergence(cloud[i], c);
    const double mat = divergence(bloch_to_density(cloud[i]), bloch_to_density(c));
    CHECK(closed == doctest::Approx(mat).epsilon(1e-10));
  }
  CHECK(qubit_divergence({0, 0, 1}, {0, 0, 0}) == doctest::Approx(std::numbers::ln2));
}

TEST_CASE("grid search: kernel, reference and errors") {
  const auto cloud = random_cloud(8, 4);
  const GridSpec coarse{.spacing = 0.01, .tolerance = 0.02, .coarse_spacing = 0.08};
  const auto a = brute_force_center(cloud, coarse);
  const auto b = brute_force_center_reference(cloud, coarse);
  auto serial = coarse;
  serial.exec = Execution::kSerial;
  const auto c = brute_force_center(cloud, serial);
  CHECK((a.center.vec() - b.center.vec()).norm() < 1e-12);
  CHECK(a.radius == doctest::Approx(b.radius).epsilon(1e-10));
  CHECK(a.center.vec() == c.center.vec());
  CHECK(a.nodes_evaluated == b.nodes_evaluated);

  const std::vector<BlochVector> one{{0.123, -0.2, 0.31}};
  const auto g1 = brute_force_center(one, {.spacing = 0.005});
  for (int k = 0; k < 3; ++k) {
    const double node = std::round(one[0].vec()(k) / 0.005) * 0.005;
    CHECK(g1.center.vec()(k) == doctest::Approx(node));
  }
  CHECK(code_of([&] { brute_force_center(one, {.spacing = 0.05, .tolerance = 0.01}); }) ==
        ErrorCode::kGridTooCoarse);
}

TEST_CASE("solver agrees with the grid oracle on random point sets") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t n = 3 + (seed * 7) % 48;
    const auto cloud = random_cloud(n, seed);
    const auto res = smallest_enclosing_ball(as_states(cloud));
    const auto grid = brute_force_center(cloud);
    CHECK(res.converged);
    CHECK(res.gap <= 1e-7);
    // both are upper bounds on the optimum; the solver also carries a lower bound
    CHECK(grid.radius >= res.lower_bound - 1e-12);
    CHECK(std::abs(res.radius - grid.radius) <= res.gap + grid.error_bound + 1e-9);
    const double dist = (density_to_bloch(res.center.matrix()).vec() - grid.center.vec()).norm();
    CHECK(dist <= 0.05);
  }
}

TEST_CASE("no descent direction at the returned center") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (std::uint64_t seed = 30; seed < 35; ++seed) {
    const auto cloud = random_cloud(20, seed);
    const auto pts = as_states(cloud);
    const auto res = smallest_enclosing_ball(pts);
    const auto c = density_to_bloch(res.center.matrix()).vec();
    for (int probe = 0; probe < 200; ++probe) {
      const Eigen::Vector3d dir = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
      const Eigen::Vector3d moved = c + 1e-4 * dir;
      if (moved.norm() >= 1.0) continue;
      const auto dists = divergences_to_center(pts, bloch_to_density(BlochVector::from(moved)).matrix());
      const double worst = *std::max_element(dists.begin(), dists.end());
      CHECK(worst >= res.radius - res.gap - 1e-12);
    }
  }
}

TEST_CASE("adding a point never shrinks the ball") {
  const auto cloud = random_cloud(30, 12);
  double prev = 0.0;
  for (std::size_t n = 1; n <= cloud.size(); ++n) {
    const std::vector<BlochVector> head(cloud.begin(), cloud.begin() + static_cast<long>(n));
    const auto res = smallest_enclosing_ball(as_states(head));
    CHECK(res.radius >= prev - 2e-7);
    prev = res.radius;
  }
}

TEST_CASE("higher dimensions and the reference divergence row") {
  std::mt19937_64 rng(3);
  for (int d = 3; d <= 4; ++d) {
    std::vector<DensityMatrix> pts;
    for (int i = 0; i < 12; ++i) {
      pts.push_back(DensityMatrix::validate(i % 2 ? test::random_pure(d, rng) : test::random_density(d, rng)));
    }
    const auto res = smallest_enclosing_ball(pts);
    CHECK(res.converged);
    CHECK(res.radius <= std::log(d) + 1e-7);
    const auto row = divergences_to_center(pts, res.center.matrix());
    const auto ref = divergences_to_center_reference(pts, res.center.matrix());
    const auto ser = divergences_to_center(pts, res.center.matrix(), Execution::kSerial);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(row[i] == doctest::Approx(ref[i]).epsilon(1e-10));
      CHECK(row[i] == ser[i]);
      CHECK(row[i] <= res.radius + 1e-12);
    }
    CHECK(hermitian_eig(res.center.matrix()).eigenvalues(d - 1) >= 1e-9 * 0.999);
  }
  std::vector<DensityMatrix> mixed{bloch_to_density({0, 0, 1}),
                                   DensityMatrix::validate(CMatrix::Identity(3, 3) / 3.0)};
  CHECK(code_of([&] { smallest_enclosing_ball(mixed); }) == ErrorCode::kDimensionMismatch);
}

TEST_CASE("iteration cap returns a flagged partial result") {
  const auto pts = as_states(random_cloud(40, 8));
  const auto res = smallest_enclosing_ball(pts, {.gap_tol = 1e-14, .max_iterations = 3});
  CHECK_FALSE(res.converged);
  CHECK(res.iterations <= 3);
  CHECK(res.gap > 0.0);
  CHECK(res.radius >= res.lower_bound);
}
