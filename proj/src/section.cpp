#include "qvor/section.hpp"

#include <cmath>

namespace qvor::section {

void require_section_dim(int d) {
  if (d < 3) {
    throw Error(ErrorCode::kSectionDimension,
                "the hyperplane section needs d >= 3, got d = " + std::to_string(d),
                static_cast<double>(d));
  }
}

SectionPoint SectionPoint::constrained_at(int d, double xi1, double xid,
                                          double xid1) {
  require_section_dim(d);
  SectionPoint p;
  p.dim = d;
  p.diagonal.assign(static_cast<size_t>(d - 1), -1.0);
  p.diagonal[0] = xi1;
  p.diagonal[1] = d - 2.0 - xi1;
  p.xid = xid;
  p.xid1 = xid1;
  p.constrained = true;
  return p;
}

SectionPoint SectionPoint::general(int d, std::vector<double> diagonal,
                                   double xid, double xid1) {
  require_section_dim(d);
  if (diagonal.size() != static_cast<size_t>(d - 1)) {
    throw Error(ErrorCode::kDimensionMismatch, "diagonal needs d-1 entries");
  }
  SectionPoint p;
  p.dim = d;
  p.diagonal = std::move(diagonal);
  p.xid = xid;
  p.xid1 = xid1;
  return p;
}

GeneralizedBloch SectionPoint::embed() const {
  GeneralizedBloch g(dim);
  for (int i = 1; i <= dim - 1; ++i) g(i) = diagonal[static_cast<size_t>(i - 1)];
  g(dim) = xid;
  g(dim + 1) = xid1;
  return g;
}

CMatrix section_density(const SectionPoint& p) {
  const int d = p.dim;
  require_section_dim(d);
  CMatrix m = CMatrix::Zero(d, d);
  double sum = 0.0;
  for (int i = 0; i < d - 1; ++i) {
    m(i, i) = (p.diagonal[static_cast<size_t>(i)] + 1.0) / d;
    sum += p.diagonal[static_cast<size_t>(i)];
  }
  m(d - 1, d - 1) = (-sum + 1.0) / d;
  m(0, 1) = Complex(0.5 * p.xid, -0.5 * p.xid1);
  m(1, 0) = Complex(0.5 * p.xid, 0.5 * p.xid1);
  return m;
}

SectionEigen section_eigen(const SectionPoint& p, const Tolerances& tol) {
  const int d = p.dim;
  require_section_dim(d);
  const double xi1 = p.xi1();
  const double xi2 = p.xi2();
  const Complex b(0.5 * p.xid, -0.5 * p.xid1);
  const double b2 = std::norm(b);
  const double a = (xi2 - xi1) / (2.0 * d);

  SectionEigen e;
  e.r = std::sqrt((xi1 - xi2) * (xi1 - xi2) / (d * d) + p.xid * p.xid +
                  p.xid1 * p.xid1);
  const double mean = (xi1 + xi2 + 2.0) / (2.0 * d);
  e.lambda1 = mean + e.r / 2.0;
  e.lambda2 = mean - e.r / 2.0;
  const double a_plus = a + e.r / 2.0;
  const double a_minus = a - e.r / 2.0;
  e.Rplus = b2 + a_plus * a_plus;
  e.Rminus = b2 + a_minus * a_minus;

  double sum = 0.0;
  for (double v : p.diagonal) sum += v;
  for (int i = 3; i <= d - 1; ++i) {
    e.rest.push_back((p.diagonal[static_cast<size_t>(i - 1)] + 1.0) / d);
  }
  e.rest.push_back((-sum + 1.0) / d);

  if (e.r <= tol.rank) {
    e.degenerate = true;
    e.X = Eigen::Matrix2cd::Identity();
    return e;
  }
  // R_+ + R_- = r^2, so at least one form is well conditioned. When one
  // vanishes (b = 0) its column comes from the other row of the 2x2 block,
  // whose norm is the other R.
  const double cutoff = 1e-16 * e.r * e.r;
  if (e.Rplus > cutoff) {
    const double s = std::sqrt(e.Rplus);
    e.X(0, 0) = b / s;
    e.X(1, 0) = a_plus / s;
  } else {
    const double s = std::sqrt(e.Rminus);
    e.X(0, 0) = Complex(-a_minus, 0.0) / s;  // lambda1 - q = r/2 - a
    e.X(1, 0) = std::conj(b) / s;
  }
  if (e.Rminus > cutoff) {
    const double s = std::sqrt(e.Rminus);
    e.X(0, 1) = b / s;
    e.X(1, 1) = a_minus / s;
  } else {
    const double s = std::sqrt(e.Rplus);
    e.X(0, 1) = Complex(-a_plus, 0.0) / s;  // lambda2 - q = -a - r/2
    e.X(1, 1) = std::conj(b) / s;
  }
  return e;
}

RankOneClass rank_one_classify(const SectionPoint& p, double rank_tol) {
  const int d = p.dim;
  const CMatrix m = section_density(p);
  const auto eig = hermitian_eig(m);
  int rank = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (std::abs(eig.eigenvalues(i)) > rank_tol) ++rank;
  }
  RankOneClass out;
  if (rank != 1) return out;

  const double block = std::abs(m(0, 0)) + std::abs(m(1, 1)) + std::abs(m(0, 1));
  if (block > rank_tol) {
    // the surviving eigenvalue belongs to the 2x2 block; since
    // lambda1 >= lambda2 it is lambda1 = 1 with lambda2 = 0
    out.kind = RankOneClass::Kind::kCase3;
    return out;
  }
  for (int j = 3; j <= d; ++j) {
    if (std::abs(m(j - 1, j - 1)) > rank_tol) {
      if (j == d) {
        out.kind = RankOneClass::Kind::kCase1;
      } else {
        out.kind = RankOneClass::Kind::kCase2;
        out.k = j;
      }
      return out;
    }
  }
  return out;
}

double pure_ellipsoid_residual(const SectionSite& s) {
  const double d = s.dim;
  const double t = d - 2.0 - 2.0 * s.eta1;
  return t * t / (d * d) + s.etad * s.etad + s.etad1 * s.etad1 - 1.0;
}

double trace_sigma_log_rho(const SectionSite& s, const SectionPoint& p,
                           const Tolerances& tol) {
  require_section_dim(p.dim);
  if (!p.constrained) {
    throw Error(ErrorCode::kNotConstrained,
                "closed form needs xi_1 + xi_2 = d-2 and xi_3..xi_{d-1} = -1");
  }
  if (s.dim != p.dim) throw Error(ErrorCode::kDimensionMismatch, "site and point dimensions differ");
  const auto e = section_eigen(p, tol);
  if (e.r <= tol.rank) {
    throw Error(ErrorCode::kDegenerateR, "r = 0: log(lambda1/lambda2) vanishes", e.r);
  }
  if (e.lambda2 <= tol.rank) {
    throw Error(ErrorCode::kPureRho, "rho is pure (r >= 1)", e.r);
  }
  const double d = p.dim;
  const double c = (d - 2.0) / 2.0;
  const double coeff = (s.etad * p.xid + s.etad1 * p.xid1) / (2.0 * e.r) +
                       2.0 * (s.eta1 - c) * (p.xi1() - c) / (d * d * e.r);
  return coeff * std::log(e.lambda1 / e.lambda2) +
         0.5 * std::log(e.lambda1 * e.lambda2);
}

namespace {

void require_distinct(const SectionSite& a, const SectionSite& b) {
  if (a.dim != b.dim) throw Error(ErrorCode::kDimensionMismatch, "sites differ in dimension");
  if (a == b) throw Error(ErrorCode::kIdenticalSites, "bisector of a site with itself");
}

}  // namespace

double divergence_boundary_residual(const SectionSite& a, const SectionSite& b,
                                    const SectionPoint& p) {
  require_distinct(a, b);
  const double d = a.dim;
  return (a.etad - b.etad) * p.xid + (a.etad1 - b.etad1) * p.xid1 +
         4.0 * (a.eta1 - b.eta1) * (p.xi1() - (d - 2.0) / 2.0) / (d * d);
}

double euclidean_boundary_residual(const SectionSite& a, const SectionSite& b,
                                   const SectionPoint& p) {
  require_distinct(a, b);
  return -4.0 * (a.eta1 - b.eta1) * p.xi1() - 2.0 * (a.etad - b.etad) * p.xid -
         2.0 * (a.etad1 - b.etad1) * p.xid1 +
         2.0 * (a.eta1 * a.eta1 - b.eta1 * b.eta1) +
         (a.etad * a.etad - b.etad * b.etad) +
         (a.etad1 * a.etad1 - b.etad1 * b.etad1);
}

Eigen::Vector3d ellipsoid_to_sphere(int d, double xi1, double xid, double xid1) {
  return {(xi1 - (d - 2.0) / 2.0) / (d / 2.0), xid, xid1};
}

Eigen::Vector3d ellipsoid_to_sphere(const SectionSite& s) {
  return ellipsoid_to_sphere(s.dim, s.eta1, s.etad, s.etad1);
}

Eigen::Vector3d ellipsoid_to_sphere(const SectionPoint& p) {
  return ellipsoid_to_sphere(p.dim, p.xi1(), p.xid, p.xid1);
}

SectionPoint sphere_to_section(int d, const Eigen::Vector3d& u) {
  return SectionPoint::constrained_at(d, (d - 2.0) / 2.0 + u(0) * d / 2.0, u(1), u(2));
}

SectionSite sphere_to_site(int d, const Eigen::Vector3d& u) {
  require_section_dim(d);
  return {d, (d - 2.0) / 2.0 + u(0) * d / 2.0, u(1), u(2)};
}

double geodesic_bisector_residual(const Eigen::Vector3d& a,
                                  const Eigen::Vector3d& b,
                                  const Eigen::Vector3d& q, double unit_tol) {
  for (const auto* v : {&a, &b, &q}) {
    const double dev = std::abs(v->norm() - 1.0);
    if (dev > unit_tol) throw Error(ErrorCode::kNotUnit, "expected a unit vector", dev);
  }
  if (a == b) throw Error(ErrorCode::kIdenticalSites, "bisector of a site with itself");
  return q.dot(a - b);
}

bool on_bisector(double residual, double site_scale, double tol) {
  return std::abs(residual) <= tol * (1.0 + site_scale);
}

}  // namespace qvor::section
