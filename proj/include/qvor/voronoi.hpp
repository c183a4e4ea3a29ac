#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qvor/parallel.hpp"
#include "qvor/qdm.hpp"

namespace qvor {

// Pure states indexed by unit 3-vectors.
//
// qubit:      u is the Bloch vector itself.
// section(d): u is the image of the pure-state ellipsoid of the d-level
//             hyperplane section under the affine sphere map, i.e.
//             xi_1 = (d-2)/2 + u_x d/2, xi_d = u_y, xi_{d+1} = u_z.
// Vectors with |u| < 1 are the mixed states on the shrunken surface.
class PureStateModel {
 public:
  static PureStateModel qubit();
  static PureStateModel section(int d);

  int level() const { return level_; }
  bool is_qubit() const { return level_ == 2; }

  CMatrix density(const Eigen::Vector3d& u) const;
  // Full generalized Bloch vector (d^2 - 1 entries).
  std::vector<double> coordinates(const Eigen::Vector3d& u) const;
  // (x, y, z) for the qubit, (xi_1, xi_d, xi_{d+1}) on the section.
  Eigen::Vector3d plot_coordinates(const Eigen::Vector3d& u) const;
  Eigen::Vector3d from_plot_coordinates(const Eigen::Vector3d& c) const;

 private:
  explicit PureStateModel(int level) : level_(level) {}
  int level_;
};

struct DistanceKind {
  enum class Type { kDivergenceLimit, kCoordinateEuclidean, kGeodesic, kHilbertSchmidt };
  Type type = Type::kGeodesic;
  double shrink = 0.9999;  // DivergenceLimit only, in (0,1)

  static DistanceKind divergence_limit(double r = 0.9999) { return {Type::kDivergenceLimit, r}; }
  static DistanceKind coordinate_euclidean() { return {Type::kCoordinateEuclidean, 0.0}; }
  static DistanceKind geodesic() { return {Type::kGeodesic, 0.0}; }
  static DistanceKind hilbert_schmidt() { return {Type::kHilbertSchmidt, 0.0}; }

  std::string name() const;
  static DistanceKind parse(const std::string& name, double shrink = 0.9999);
};

struct CellAssignment {
  std::vector<int> site;        // arg-min site, lowest index on ties
  std::vector<double> margin;   // runner-up distance minus best distance
  double boundary_tol = 1e-7;

  std::size_t size() const { return site.size(); }
  bool is_boundary(std::size_t i) const { return margin[i] < boundary_tol; }
};

// Distance rows from a point to every site under one DistanceKind, with the
// per-site work hoisted out of the point loop.
class SiteDistances {
 public:
  SiteDistances(const PureStateModel& model, std::span<const Eigen::Vector3d> sites,
                const DistanceKind& kind, const Tolerances& tol = {});

  std::size_t site_count() const { return sites_.size(); }
  void evaluate(const Eigen::Vector3d& point, std::span<double> out) const;
  double between(const Eigen::Vector3d& point, std::size_t a, std::size_t b) const;

 private:
  PureStateModel model_;
  DistanceKind kind_;
  Tolerances tol_;
  std::vector<Eigen::Vector3d> sites_;
  std::vector<CMatrix> densities_;
  std::vector<double> neg_entropy_;
  std::vector<std::vector<double>> coords_;
};

CellAssignment assign_cells(const PureStateModel& model,
                            std::span<const Eigen::Vector3d> points,
                            std::span<const Eigen::Vector3d> sites,
                            const DistanceKind& kind,
                            double boundary_tol = 1e-7,
                            Execution exec = Execution::kParallel,
                            const Tolerances& tol = {});

// Serial reference: every (point, site) distance recomputed from scratch
// through the plain qdm routines.
CellAssignment assign_cells_reference(const PureStateModel& model,
                                      std::span<const Eigen::Vector3d> points,
                                      std::span<const Eigen::Vector3d> sites,
                                      const DistanceKind& kind,
                                      double boundary_tol = 1e-7,
                                      const Tolerances& tol = {});

struct DiagramComparison {
  std::size_t total = 0;
  std::size_t agree = 0;
  std::size_t disagree = 0;
  std::size_t boundary = 0;  // excluded: flagged in either assignment
  std::vector<std::size_t> witnesses;
};

DiagramComparison compare_diagrams(const CellAssignment& a, const CellAssignment& b);

struct Polyline {
  int site_a = 0;
  int site_b = 0;
  bool closed = false;
  std::vector<Eigen::Vector3d> points;  // unit sphere coordinates
};

struct BoundaryGrid {
  int n_theta = 90;
  int n_phi = 180;
};

struct BoundaryResult {
  std::vector<Polyline> lines;
  double grid_spacing = 0.0;       // largest angular step of the grid
  double crossing_tolerance = 0.0; // bisection bound along grid edges
  double max_abs_gap = 0.0;        // max |d_a - d_b| at polyline points
};

BoundaryResult extract_boundary(const PureStateModel& model,
                                std::span<const Eigen::Vector3d> sites,
                                const DistanceKind& kind,
                                const BoundaryGrid& grid = {},
                                Execution exec = Execution::kParallel,
                                const Tolerances& tol = {});

}  // namespace qvor
