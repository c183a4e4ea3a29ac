#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qvor/section.hpp"
#include "test_util.hpp"

using namespace qvor;
using namespace qvor::section;
using qvor::test::max_abs;

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

SectionPoint case1(int d) {
  return SectionPoint::general(d, std::vector<double>(static_cast<size_t>(d - 1), -1.0), 0, 0);
}

// Random constrained point with 0 < r < 1, via the sphere map.
SectionPoint random_inner(int d, std::mt19937_64& rng, double rmin = 0.05, double rmax = 0.95) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(rmin, rmax);
  const Eigen::Vector3d dir = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
  return sphere_to_section(d, u(rng) * dir);
}

SectionSite random_pure_site(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return sphere_to_site(d, Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized());
}

std::vector<double> sorted_desc(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

TEST_CASE("section needs d >= 3") {
  CHECK(code_of([] { SectionPoint::constrained_at(2, 0, 0, 0); }) == ErrorCode::kSectionDimension);
}

TEST_CASE("section_density") {
  for (int d = 3; d <= 6; ++d) {
    const auto zero = SectionPoint::general(d, std::vector<double>(static_cast<size_t>(d - 1), 0.0), 0, 0);
    CHECK(max_abs(section_density(zero) - CMatrix::Identity(d, d) / d) < 1e-16);

    std::vector<double> last(static_cast<size_t>(d), 0.0);
    last.back() = 1.0;
    CHECK(max_abs(section_density(case1(d)) - test::diag_state(last)) < 1e-16);
  }
  const auto p = SectionPoint::constrained_at(3, 1.0, 0.0, 0.0);
  CHECK(max_abs(section_density(p) - test::diag_state({2.0 / 3, 1.0 / 3, 0.0})) < 1e-16);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int d = 3; d <= 7; ++d) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> diag(static_cast<size_t>(d - 1));
      for (auto& x : diag) x = g(rng);
      const auto q = SectionPoint::general(d, diag, g(rng), g(rng));
      CHECK(max_abs(section_density(q) - xi_to_density(q.embed())) == 0.0);
    }
  }
}

TEST_CASE("section_eigen examples") {
  const auto flat = SectionPoint::general(4, {0.5, 0.5, 0.2}, 0.0, 0.0);
  const auto e0 = section_eigen(flat);
  CHECK(e0.r == 0.0);
  CHECK(e0.degenerate);
  CHECK(e0.lambda1 == doctest::Approx(1.5 / 4));
  CHECK(e0.lambda2 == doctest::Approx(1.5 / 4));

  const auto p = SectionPoint::general(3, {1.0, 0.0}, 0.0, 0.0);
  const auto e1 = section_eigen(p);
  CHECK(e1.r == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(e1.lambda1 == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(e1.lambda2 == doctest::Approx(1.0 / 3).epsilon(1e-15));
  const auto gen = hermitian_eig(section_density(p));
  CHECK(gen.eigenvalues(0) == doctest::Approx(e1.lambda1).epsilon(1e-14));
  // b = 0 with xi_1 > xi_2 makes R_+ vanish; X must still be the identity-like basis
  CHECK(e1.Rplus == doctest::Approx(0.0));
  CHECK(max_abs(e1.X.adjoint() * e1.X - Eigen::Matrix2cd::Identity()) < 1e-15);

  const auto pure = SectionPoint::constrained_at(3, 1.0, std::sqrt(8.0) / 3.0, 0.0);
  const auto e2 = section_eigen(pure);
  CHECK(e2.r == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e2.lambda1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(e2.lambda2) < 1e-15);
}

TEST_CASE("section_eigen matches the generic eigensolver") {
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  for (int d = 3; d <= 6; ++d) {
    double worst = 0.0, worst_r = 0.0, worst_x = 0.0;
    for (int rep = 0; rep < 500; ++rep) {
      std::vector<double> diag(static_cast<size_t>(d - 1));
      for (auto& x : diag) x = g(rng);
      const auto p = rep % 2 == 0 ? SectionPoint::general(d, diag, g(rng), g(rng))
                                  : random_inner(d, rng);
      const auto e = section_eigen(p);
      std::vector<double> closed{e.lambda1, e.lambda2};
      closed.insert(closed.end(), e.rest.begin(), e.rest.end());
      closed = sorted_desc(closed);
      const auto gen = hermitian_eig(section_density(p));
      for (int i = 0; i < d; ++i) {
        worst = std::max(worst, std::abs(closed[static_cast<size_t>(i)] - gen.eigenvalues(i)));
      }
      const double a = (p.xi2() - p.xi1()) / (2.0 * d);
      worst_r = std::max({worst_r, std::abs(e.Rplus - e.r * (a + e.r / 2)),
                          std::abs(e.Rminus + e.r * (a - e.r / 2))});
      const double r2 = (p.xi1() - p.xi2()) * (p.xi1() - p.xi2()) / (d * d) +
                        p.xid * p.xid + p.xid1 * p.xid1;
      CHECK(std::abs(e.r * e.r - r2) <= 1e-12 * (1 + r2));
      CHECK(e.lambda1 >= e.lambda2);
      CHECK(e.lambda1 + e.lambda2 == doctest::Approx((p.xi1() + p.xi2() + 2) / d));

      // X diagonalizes the leading block
      const CMatrix m = section_density(p);
      const Eigen::Matrix2cd block = m.topLeftCorner(2, 2);
      const Eigen::Matrix2cd rebuilt =
          e.X * Eigen::Vector2d(e.lambda1, e.lambda2).asDiagonal() * e.X.adjoint();
      worst_x = std::max(worst_x, (rebuilt - block).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-9);
    CHECK(worst_r <= 1e-10);
    CHECK(worst_x <= 1e-10);
  }
}

TEST_CASE("rank_one_classify") {
  for (int d = 3; d <= 8; ++d) {
    const auto c = rank_one_classify(case1(d));
    CHECK(c.kind == RankOneClass::Kind::kCase1);
    CHECK(is_pure(section_density(case1(d))));
  }
  for (int d = 3; d <= 6; ++d) {
    const auto id = SectionPoint::general(d, std::vector<double>(static_cast<size_t>(d - 1), 0.0), 0, 0);
    CHECK(rank_one_classify(id).kind == RankOneClass::Kind::kNotRankOne);
  }

  // xi_k = d-3 with the other diagonal entries at -1 leaves weight 2/d in the
  // last row, so the matrix has rank 2. Only xi_k = d-1 empties every other row.
  const auto two_rows = SectionPoint::general(5, {-1, -1, 2, -1}, 0, 0);
  CHECK(rank_one_classify(two_rows).kind == RankOneClass::Kind::kNotRankOne);
  const auto ev = hermitian_eig(section_density(two_rows)).eigenvalues;
  CHECK(ev(0) == doctest::Approx(3.0 / 5));
  CHECK(ev(1) == doctest::Approx(2.0 / 5));

  const auto fixed = SectionPoint::general(5, {-1, -1, 4, -1}, 0, 0);
  const auto c2 = rank_one_classify(fixed);
  CHECK(c2.kind == RankOneClass::Kind::kCase2);
  CHECK(c2.k == 3);
  const auto fixed4 = SectionPoint::general(6, {-1, -1, -1, 5, -1}, 0, 0);
  CHECK(rank_one_classify(fixed4).k == 4);
}

TEST_CASE("rank-1 completeness on constrained points") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.3);
  for (int d = 3; d <= 6; ++d) {
    for (int rep = 0; rep < 200; ++rep) {
      const Eigen::Vector3d dir = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
      // half the points exactly on the pure ellipsoid
      const double rad = rep % 2 == 0 ? 1.0 : u(rng);
      const auto p = sphere_to_section(d, rad * dir);
      const auto site = sphere_to_site(d, rad * dir);
      const auto ev = hermitian_eig(section_density(p)).eigenvalues;
      int rank = 0;
      for (int i = 0; i < d; ++i) rank += std::abs(ev(i)) > 1e-9;
      const auto cls = rank_one_classify(p);
      CHECK((rank == 1) == (cls.kind != RankOneClass::Kind::kNotRankOne));
      const bool on_ellipsoid = std::abs(pure_ellipsoid_residual(site)) <= 1e-9;
      CHECK((cls.kind == RankOneClass::Kind::kCase3) == on_ellipsoid);
      if (cls.kind == RankOneClass::Kind::kCase3) CHECK(ev(0) == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("pure_ellipsoid_residual") {
  for (int d = 3; d <= 7; ++d) {
    CHECK(std::abs(pure_ellipsoid_residual({d, d - 1.0, 0, 0})) < 1e-15);
    const SectionSite ex3{d, (d - 2) / 2.0 + d / (2 * std::sqrt(3.0)), 1 / std::sqrt(3.0),
                          1 / std::sqrt(3.0)};
    CHECK(std::abs(pure_ellipsoid_residual(ex3)) < 1e-15);
    CHECK(is_pure(section_density(ex3.point())));
  }
  CHECK(pure_ellipsoid_residual({4, 0, 0, 0}) == doctest::Approx(-0.75));
}

TEST_CASE("closed-form Tr sigma log rho against the matrix route") {
  std::mt19937_64 rng(99);
  for (int d = 3; d <= 6; ++d) {
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
      const auto p = random_inner(d, rng);
      // sites: pure ones and interior ones
      const SectionSite s = rep % 2 == 0 ? random_pure_site(d, rng) : [&] {
        const auto q = random_inner(d, rng);
        return SectionSite{d, q.xi1(), q.xid, q.xid1};
      }();
      const double closed = trace_sigma_log_rho(s, p);
      const double direct =
          qvor::trace_sigma_log_rho(section_density(s.point()), section_density(p));
      worst = std::max(worst, std::abs(closed - direct));
    }
    CHECK(worst <= 1e-8);
  }

  // sigma = rho: equals Tr rho log rho
  const auto p = sphere_to_section(3, Eigen::Vector3d(0.3, 0.4, 0.0));
  const SectionSite same{3, p.xi1(), p.xid, p.xid1};
  const CMatrix rho = section_density(p);
  CHECK(section::trace_sigma_log_rho(same, p) == doctest::Approx(neg_entropy(rho)).epsilon(1e-12));

  CHECK(code_of([] { section::trace_sigma_log_rho({4, 1, 0, 0}, SectionPoint::constrained_at(4, 1, 0, 0)); }) ==
        ErrorCode::kDegenerateR);
  CHECK(code_of([] { section::trace_sigma_log_rho({3, 1, 0, 0}, SectionPoint::constrained_at(3, 2, 0, 0)); }) ==
        ErrorCode::kPureRho);
  CHECK(code_of([] {
          section::trace_sigma_log_rho({3, 1, 0, 0}, SectionPoint::general(3, {0.2, 0.1}, 0.1, 0));
        }) == ErrorCode::kNotConstrained);
}

TEST_CASE("divergence boundary residual") {
  for (int d = 3; d <= 6; ++d) {
    const SectionSite a{d, d - 1.0, 0, 0};
    const SectionSite b{d, -1.0, 0, 0};
    for (double xi1 : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
      const auto p = SectionPoint::constrained_at(d, xi1, 0.3, -0.2);
      CHECK(divergence_boundary_residual(a, b, p) ==
            doctest::Approx(4.0 * d * (xi1 - (d - 2) / 2.0) / (d * d)));
    }
    CHECK(divergence_boundary_residual(a, b, SectionPoint::constrained_at(d, (d - 2) / 2.0, 0.7, 0.1)) ==
          0.0);
  }
  CHECK(code_of([] {
          const SectionSite a{3, 1, 0, 0};
          divergence_boundary_residual(a, a, a.point());
        }) == ErrorCode::kIdenticalSites);
}

TEST_CASE("mirrored sites put both boundaries on xi_{d+1} = 0") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int d = 3; d <= 5; ++d) {
    for (int rep = 0; rep < 50; ++rep) {
      const double e1 = g(rng), ed = g(rng), h = g(rng);
      const SectionSite a{d, e1, ed, h};
      const SectionSite b{d, e1, ed, -h};
      const auto p = SectionPoint::constrained_at(d, g(rng), g(rng), 0.0);
      CHECK(divergence_boundary_residual(a, b, p) == 0.0);
      CHECK(euclidean_boundary_residual(a, b, p) == 0.0);
      // odd under xi_{d+1} -> -xi_{d+1}
      const auto q = SectionPoint::constrained_at(d, p.xi1(), p.xid, 0.4);
      const auto qm = SectionPoint::constrained_at(d, p.xi1(), p.xid, -0.4);
      CHECK(divergence_boundary_residual(a, b, q) == doctest::Approx(-divergence_boundary_residual(a, b, qm)));
      CHECK(euclidean_boundary_residual(a, b, q) == doctest::Approx(-euclidean_boundary_residual(a, b, qm)));
    }
  }
}

TEST_CASE("euclidean boundary residual equals the coordinate distance gap") {
  std::mt19937_64 rng(12);
  for (int d = 3; d <= 6; ++d) {
    const SectionSite a{d, d - 1.0, 0, 0};
    const SectionSite b{d, -1.0, 0, 0};
    CHECK(coordinate_distance_sq(a.point().embed().xi, b.point().embed().xi) ==
          doctest::Approx(2.0 * d * d));
    for (double xi1 : {-1.0, 0.0, 1.0, 2.5}) {
      const auto p = SectionPoint::constrained_at(d, xi1, 0.1, 0.2);
      CHECK(euclidean_boundary_residual(a, b, p) == doctest::Approx(-4.0 * d * xi1 + 2.0 * (d * d - 2.0 * d)));
    }
    // root at (d-2)/2 for every d, not at 1
    CHECK(euclidean_boundary_residual(a, b, SectionPoint::constrained_at(d, (d - 2) / 2.0, 0, 0)) ==
          doctest::Approx(0.0));

    for (int rep = 0; rep < 50; ++rep) {
      const auto s1 = random_pure_site(d, rng);
      const auto s2 = random_pure_site(d, rng);
      const auto p = random_inner(d, rng, 0.1, 1.0);
      const auto xp = p.embed().xi;
      const double gap = coordinate_distance_sq(s1.point().embed().xi, xp) -
                         coordinate_distance_sq(s2.point().embed().xi, xp);
      CHECK(euclidean_boundary_residual(s1, s2, p) == doctest::Approx(gap).epsilon(1e-10));
    }
  }
}

TEST_CASE("ellipsoid_to_sphere") {
  for (int d = 3; d <= 6; ++d) {
    CHECK((ellipsoid_to_sphere(SectionSite{d, d - 1.0, 0, 0}) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
    CHECK(ellipsoid_to_sphere(SectionSite{d, (d - 2) / 2.0, 0, 0}).norm() == 0.0);
    const double t = 1 / std::sqrt(3.0);
    const SectionSite ex3{d, (d - 2) / 2.0 + d / (2 * std::sqrt(3.0)), t, t};
    CHECK((ellipsoid_to_sphere(ex3) - Eigen::Vector3d(t, t, t)).norm() < 1e-15);

    std::mt19937_64 rng(d);
    for (int rep = 0; rep < 20; ++rep) {
      const auto s = random_pure_site(d, rng);
      CHECK(std::abs(ellipsoid_to_sphere(s).norm() - 1.0) < 1e-14);
      const auto back = sphere_to_site(d, ellipsoid_to_sphere(s));
      CHECK(back.eta1 == doctest::Approx(s.eta1));
    }
  }
}

TEST_CASE("geodesic bisector residual") {
  const Eigen::Vector3d n(0, 0, 1), s(0, 0, -1);
  CHECK(geodesic_bisector_residual(n, s, Eigen::Vector3d(1, 0, 0)) == 0.0);
  CHECK(geodesic_bisector_residual(n, s, Eigen::Vector3d(0.6, 0, 0.8)) > 0.0);
  const Eigen::Vector3d a = Eigen::Vector3d(1, 1, 0).normalized();
  const Eigen::Vector3d b(0, 1, 0);
  CHECK(geodesic_bisector_residual(a, b, a) == doctest::Approx(1.0 - a.dot(b)));
  CHECK(code_of([&] { geodesic_bisector_residual(a, a, b); }) == ErrorCode::kIdenticalSites);
  CHECK(code_of([&] { geodesic_bisector_residual(a, 2 * b, b); }) == ErrorCode::kNotUnit);

  // sites at xi_1 = d-1 and xi_1 = -1 are antipodal; their bisector is xi_1 = (d-2)/2
  for (int d = 3; d <= 6; ++d) {
    const auto ta = ellipsoid_to_sphere(SectionSite{d, d - 1.0, 0, 0});
    const auto tb = ellipsoid_to_sphere(SectionSite{d, -1.0, 0, 0});
    const auto on = sphere_to_site(d, Eigen::Vector3d(0, 0.6, 0.8));
    CHECK(on.eta1 == doctest::Approx((d - 2) / 2.0));
    CHECK(geodesic_bisector_residual(ta, tb, ellipsoid_to_sphere(on)) == 0.0);
  }
}

TEST_CASE("divergence residual is the geodesic residual after the sphere map") {
  std::mt19937_64 rng(31);
  for (int d : {3, 4, 5, 6}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto a = random_pure_site(d, rng);
      const auto b = random_pure_site(d, rng);
      const auto q = random_pure_site(d, rng);
      const double div = divergence_boundary_residual(a, b, q.point());
      const double geo = geodesic_bisector_residual(ellipsoid_to_sphere(a), ellipsoid_to_sphere(b),
                                                    ellipsoid_to_sphere(q));
      CHECK(div == doctest::Approx(geo).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("closed-form residual tracks the matrix divergence gap near the pure limit") {
  for (int d = 3; d <= 5; ++d) {
    // mirrored pure sites: sphere images (0.6, 0, +-0.8)
    const auto a = sphere_to_site(d, Eigen::Vector3d(0.6, 0.0, 0.8));
    const auto b = sphere_to_site(d, Eigen::Vector3d(0.6, 0.0, -0.8));
    const CMatrix sa = section_density(a.point());
    const CMatrix sb = section_density(b.point());
    const Eigen::Vector3d on_plane = Eigen::Vector3d(0.3, 0.9, 0.0).normalized();
    for (double r : {0.9, 0.99, 0.999, 0.9999}) {
      const CMatrix rho = section_density(sphere_to_section(d, r * on_plane));
      const double gap = divergence_on_support(sa, rho) - divergence_on_support(sb, rho);
      CHECK(std::abs(gap) <= 1e-10);
    }
    std::mt19937_64 rng(d);
    for (int rep = 0; rep < 100; ++rep) {
      const auto site_a = random_pure_site(d, rng);
      const auto site_b = random_pure_site(d, rng);
      const auto q = random_pure_site(d, rng);
      const double res = divergence_boundary_residual(site_a, site_b, q.point());
      if (std::abs(res) < 1e-6) continue;
      const CMatrix rho = section_density(sphere_to_section(d, 0.9999 * ellipsoid_to_sphere(q)));
      const double gap = divergence_on_support(section_density(site_a.point()), rho) -
                         divergence_on_support(section_density(site_b.point()), rho);
      // positive residual: a is nearer, so D(a) - D(b) < 0
      CHECK((res > 0) == (gap < 0));
    }
  }
}
