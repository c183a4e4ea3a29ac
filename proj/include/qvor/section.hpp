#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qvor/bloch.hpp"
#include "qvor/qdm.hpp"

// Closed forms on the three-parameter hyperplane section of a d-level
// (d >= 3) state space: all off-diagonal xi_j with j >= d+2 are zero, so the
// matrix is diagonal apart from the (1,2)/(2,1) pair xi_d, xi_{d+1}.
//
// "Constrained" points additionally satisfy xi_1 + xi_2 = d-2 and
// xi_3 = ... = xi_{d-1} = -1. All their weight then lives in the leading
// 2x2 block (lambda_1 + lambda_2 = 1), and the pure ones form an ellipsoid
// which the affine map
//     x = (xi_1 - (d-2)/2) / (d/2),  y = xi_d,  z = xi_{d+1}
// sends onto the unit sphere.
namespace qvor::section {

struct SectionPoint {
  int dim = 0;
  std::vector<double> diagonal;  // xi_1 .. xi_{d-1}
  double xid = 0.0;              // xi_d
  double xid1 = 0.0;             // xi_{d+1}
  bool constrained = false;

  static SectionPoint constrained_at(int d, double xi1, double xid, double xid1);
  static SectionPoint general(int d, std::vector<double> diagonal, double xid,
                              double xid1);

  double xi1() const { return diagonal[0]; }
  double xi2() const { return diagonal[1]; }
  GeneralizedBloch embed() const;
};

// A site (eta_1, eta_d, eta_{d+1}) with eta_2 = d-2-eta_1 implied.
struct SectionSite {
  int dim = 0;
  double eta1 = 0.0;
  double etad = 0.0;
  double etad1 = 0.0;

  double eta2() const { return dim - 2.0 - eta1; }
  SectionPoint point() const { return SectionPoint::constrained_at(dim, eta1, etad, etad1); }
  bool operator==(const SectionSite&) const = default;
};

struct SectionEigen {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double r = 0.0;
  double Rplus = 0.0;   // |b|^2 + a_+^2, the defining quadratic form
  double Rminus = 0.0;  // |b|^2 + a_-^2
  Eigen::Matrix2cd X = Eigen::Matrix2cd::Identity();
  std::vector<double> rest;  // remaining diagonal entries, index 3..d
  bool degenerate = false;   // r ~ 0: X is not unique, identity returned
};

void require_section_dim(int d);

CMatrix section_density(const SectionPoint& p);

SectionEigen section_eigen(const SectionPoint& p, const Tolerances& tol = {});

struct RankOneClass {
  enum class Kind { kCase1, kCase2, kCase3, kNotRankOne };
  Kind kind = Kind::kNotRankOne;
  int k = 0;  // for kCase2: 1-based index 3..d-1 of the surviving row
};

RankOneClass rank_one_classify(const SectionPoint& p, double rank_tol = 1e-9);

// (d-2-2 eta_1)^2/d^2 + eta_d^2 + eta_{d+1}^2 - 1; zero on the pure ellipsoid.
double pure_ellipsoid_residual(const SectionSite& s);

// Closed form of Tr sigma log rho for constrained sigma (the site) and
// constrained rho with 0 < r < 1.
double trace_sigma_log_rho(const SectionSite& s, const SectionPoint& p,
                           const Tolerances& tol = {});

// Divergence-limit bisector between sites a and b at p. Positive where a is
// the nearer site: D(a||rho) - D(b||rho) = -log(lambda1/lambda2)/(2r) times
// this value.
double divergence_boundary_residual(const SectionSite& a, const SectionSite& b,
                                    const SectionPoint& p);

// d(a,p) - d(b,p) for the squared xi-coordinate distance on the section;
// negative where a is nearer.
double euclidean_boundary_residual(const SectionSite& a, const SectionSite& b,
                                   const SectionPoint& p);

Eigen::Vector3d ellipsoid_to_sphere(int d, double xi1, double xid, double xid1);
Eigen::Vector3d ellipsoid_to_sphere(const SectionSite& s);
Eigen::Vector3d ellipsoid_to_sphere(const SectionPoint& p);

// Inverse map; the result is a constrained point.
SectionPoint sphere_to_section(int d, const Eigen::Vector3d& u);
SectionSite sphere_to_site(int d, const Eigen::Vector3d& u);

// q . (a - b) for unit vectors; zero on the great-circle bisector.
double geodesic_bisector_residual(const Eigen::Vector3d& a,
                                  const Eigen::Vector3d& b,
                                  const Eigen::Vector3d& q,
                                  double unit_tol = 1e-9);

// |r| <= 1e-9 (1 + scale): membership test for residual zero sets.
bool on_bisector(double residual, double site_scale, double tol = 1e-9);

}  // namespace qvor::section
