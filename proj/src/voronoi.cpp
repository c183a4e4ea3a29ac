#include "qvor/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <omp.h>

#include "qvor/bloch.hpp"
#include "qvor/section.hpp"

namespace qvor {

int worker_count() { return omp_get_max_threads(); }
void set_worker_count(int n) { omp_set_num_threads(std::max(1, n)); }

PureStateModel PureStateModel::qubit() { return PureStateModel(2); }

PureStateModel PureStateModel::section(int d) {
  section::require_section_dim(d);
  return PureStateModel(d);
}

CMatrix PureStateModel::density(const Eigen::Vector3d& u) const {
  if (is_qubit()) {
    CMatrix m(2, 2);
    m(0, 0) = Complex(0.5 * (1.0 + u(2)), 0.0);
    m(0, 1) = Complex(0.5 * u(0), -0.5 * u(1));
    m(1, 0) = Complex(0.5 * u(0), 0.5 * u(1));
    m(1, 1) = Complex(0.5 * (1.0 - u(2)), 0.0);
    return m;
  }
  return section::section_density(section::sphere_to_section(level_, u));
}

std::vector<double> PureStateModel::coordinates(const Eigen::Vector3d& u) const {
  if (is_qubit()) return {u(2), u(0), u(1)};
  return section::sphere_to_section(level_, u).embed().xi;
}

Eigen::Vector3d PureStateModel::plot_coordinates(const Eigen::Vector3d& u) const {
  if (is_qubit()) return u;
  const double d = level_;
  return {(d - 2.0) / 2.0 + u(0) * d / 2.0, u(1), u(2)};
}

Eigen::Vector3d PureStateModel::from_plot_coordinates(const Eigen::Vector3d& c) const {
  if (is_qubit()) return c;
  return section::ellipsoid_to_sphere(level_, c(0), c(1), c(2));
}

std::string DistanceKind::name() const {
  switch (type) {
    case Type::kDivergenceLimit: return "divergence";
    case Type::kCoordinateEuclidean: return "euclidean";
    case Type::kGeodesic: return "geodesic";
    case Type::kHilbertSchmidt: return "hilbert-schmidt";
  }
  return "unknown";
}

DistanceKind DistanceKind::parse(const std::string& name, double shrink) {
  if (name == "divergence") return divergence_limit(shrink);
  if (name == "euclidean") return coordinate_euclidean();
  if (name == "geodesic") return geodesic();
  if (name == "hilbert-schmidt" || name == "hs") return hilbert_schmidt();
  throw Error(ErrorCode::kInvalidArgument, "unknown distance kind '" + name + "'");
}

namespace {

constexpr double kUnitTol = 1e-9;

double arc(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
  return std::acos(std::clamp(a.dot(b), -1.0, 1.0));
}

void check_sites(std::span<const Eigen::Vector3d> sites, const DistanceKind& kind) {
  if (sites.empty()) throw Error(ErrorCode::kEmptySites, "no Voronoi sites given");
  if (kind.type == DistanceKind::Type::kDivergenceLimit) {
    if (!(kind.shrink > 0.0 && kind.shrink < 1.0)) {
      throw Error(ErrorCode::kRadiusOutOfRange, "shrink radius must lie in (0,1)",
                  kind.shrink);
    }
  }
  if (kind.type == DistanceKind::Type::kDivergenceLimit ||
      kind.type == DistanceKind::Type::kGeodesic) {
    for (const auto& s : sites) {
      const double dev = std::abs(s.norm() - 1.0);
      if (dev > kUnitTol) {
        throw Error(ErrorCode::kImpureSite, "sites must be pure states", dev);
      }
    }
  }
}

void pick_nearest(std::span<const double> row, int& best, double& margin) {
  best = 0;
  double d0 = row[0];
  double d1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < row.size(); ++k) {
    if (row[k] < d0) {
      d1 = d0;
      d0 = row[k];
      best = static_cast<int>(k);
    } else if (row[k] < d1) {
      d1 = row[k];
    }
  }
  margin = d1 - d0;
}

}  // namespace

SiteDistances::SiteDistances(const PureStateModel& model,
                             std::span<const Eigen::Vector3d> sites,
                             const DistanceKind& kind, const Tolerances& tol)
    : model_(model), kind_(kind), tol_(tol), sites_(sites.begin(), sites.end()) {
  check_sites(sites, kind);
  for (const auto& s : sites_) {
    switch (kind_.type) {
      case DistanceKind::Type::kDivergenceLimit:
        densities_.push_back(model_.density(s));
        neg_entropy_.push_back(neg_entropy(densities_.back(), tol_));
        break;
      case DistanceKind::Type::kHilbertSchmidt:
        densities_.push_back(model_.density(s));
        break;
      case DistanceKind::Type::kCoordinateEuclidean:
        coords_.push_back(model_.coordinates(s));
        break;
      case DistanceKind::Type::kGeodesic:
        break;
    }
  }
}

void SiteDistances::evaluate(const Eigen::Vector3d& point, std::span<double> out) const {
  const std::size_t n = sites_.size();
  switch (kind_.type) {
    case DistanceKind::Type::kDivergenceLimit: {
      const CMatrix rho = model_.density(kind_.shrink * point);
      const auto sl = support_log(rho, tol_);
      const bool full_rank = sl.rank == rho.rows();
      for (std::size_t k = 0; k < n; ++k) {
        if (!full_rank) {
          const double leak = trace_product(densities_[k], sl.kernel_projector);
          if (leak > std::sqrt(tol_.rank)) {
            throw Error(ErrorCode::kSingularSecondArgument,
                        "site has weight on the kernel of the evaluation state", leak);
          }
        }
        out[k] = neg_entropy_[k] - trace_product(densities_[k], sl.log);
      }
      break;
    }
    case DistanceKind::Type::kCoordinateEuclidean: {
      const auto c = model_.coordinates(point);
      for (std::size_t k = 0; k < n; ++k) out[k] = coordinate_distance_sq(coords_[k], c);
      break;
    }
    case DistanceKind::Type::kGeodesic: {
      const Eigen::Vector3d q = point.normalized();
      for (std::size_t k = 0; k < n; ++k) out[k] = arc(sites_[k], q);
      break;
    }
    case DistanceKind::Type::kHilbertSchmidt: {
      const CMatrix rho = model_.density(point);
      for (std::size_t k = 0; k < n; ++k) out[k] = (densities_[k] - rho).squaredNorm();
      break;
    }
  }
}

double SiteDistances::between(const Eigen::Vector3d& point, std::size_t a,
                              std::size_t b) const {
  std::vector<double> row(sites_.size());
  evaluate(point, row);
  return row[a] - row[b];
}

CellAssignment assign_cells(const PureStateModel& model,
                            std::span<const Eigen::Vector3d> points,
                            std::span<const Eigen::Vector3d> sites,
                            const DistanceKind& kind, double boundary_tol,
                            Execution exec, const Tolerances& tol) {
  const SiteDistances dist(model, sites, kind, tol);
  CellAssignment out;
  out.boundary_tol = boundary_tol;
  out.site.resize(points.size());
  out.margin.resize(points.size());
  parallel_for(points.size(), exec, [&](std::size_t i) {
    std::vector<double> row(sites.size());
    dist.evaluate(points[i], row);
    pick_nearest(row, out.site[i], out.margin[i]);
  });
  return out;
}

CellAssignment assign_cells_reference(const PureStateModel& model,
                                      std::span<const Eigen::Vector3d> points,
                                      std::span<const Eigen::Vector3d> sites,
                                      const DistanceKind& kind, double boundary_tol,
                                      const Tolerances& tol) {
  check_sites(sites, kind);
  CellAssignment out;
  out.boundary_tol = boundary_tol;
  out.site.resize(points.size());
  out.margin.resize(points.size());
  std::vector<double> row(sites.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    for (std::size_t k = 0; k < sites.size(); ++k) {
      const auto& s = sites[k];
      switch (kind.type) {
        case DistanceKind::Type::kDivergenceLimit:
          row[k] = divergence_on_support(model.density(s), model.density(kind.shrink * p), tol);
          break;
        case DistanceKind::Type::kCoordinateEuclidean:
          row[k] = coordinate_distance_sq(model.coordinates(s), model.coordinates(p));
          break;
        case DistanceKind::Type::kGeodesic:
          row[k] = arc(s, p.normalized());
          break;
        case DistanceKind::Type::kHilbertSchmidt:
          row[k] = hilbert_schmidt_distance_sq(model.density(s), model.density(p));
          break;
      }
    }
    pick_nearest(row, out.site[i], out.margin[i]);
  }
  return out;
}

DiagramComparison compare_diagrams(const CellAssignment& a, const CellAssignment& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kPointSetMismatch, "assignments cover different point sets",
                static_cast<double>(a.size()) - static_cast<double>(b.size()));
  }
  DiagramComparison out;
  out.total = a.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.is_boundary(i) || b.is_boundary(i)) {
      ++out.boundary;
    } else if (a.site[i] == b.site[i]) {
      ++out.agree;
    } else {
      ++out.disagree;
      out.witnesses.push_back(i);
    }
  }
  return out;
}

namespace {

struct Crossing {
  int lo = 0;  // site pair, lo < hi
  int hi = 0;
  Eigen::Vector3d point;
};

// Grid edges are keyed so neighbouring cells find the same crossing.
std::int64_t edge_key(bool vertical, int i, int j, int n_phi, int n_theta) {
  const std::int64_t base = static_cast<std::int64_t>(i) * n_phi + j;
  return vertical ? base + static_cast<std::int64_t>(n_theta + 1) * n_phi : base;
}

}  // namespace

BoundaryResult extract_boundary(const PureStateModel& model,
                                std::span<const Eigen::Vector3d> sites,
                                const DistanceKind& kind, const BoundaryGrid& grid,
                                Execution exec, const Tolerances& tol) {
  if (sites.size() < 2) throw Error(ErrorCode::kEmptySites, "a boundary needs two sites");
  if (grid.n_theta < 2 || grid.n_phi < 3) {
    throw Error(ErrorCode::kInvalidArgument, "boundary grid is too small");
  }
  const SiteDistances dist(model, sites, kind, tol);
  const int nt = grid.n_theta;
  const int np = grid.n_phi;

  // Tilted so that the grid poles avoid the symmetric site placements.
  const Eigen::Matrix3d tilt =
      Eigen::AngleAxisd(0.3141592653589793, Eigen::Vector3d(1.0, 2.0, 3.0).normalized())
          .toRotationMatrix();
  auto node = [&](int i, int j) -> Eigen::Vector3d {
    const double theta = std::numbers::pi * i / nt;
    const double phi = 2.0 * std::numbers::pi * j / np;
    return tilt * Eigen::Vector3d(std::sin(theta) * std::cos(phi),
                                  std::sin(theta) * std::sin(phi), std::cos(theta));
  };

  const std::size_t n_nodes = static_cast<std::size_t>(nt + 1) * np;
  std::vector<int> label(n_nodes);
  parallel_for(n_nodes, exec, [&](std::size_t idx) {
    const int i = static_cast<int>(idx / np);
    const int j = static_cast<int>(idx % np);
    std::vector<double> row(sites.size());
    dist.evaluate(node(i, j), row);
    double margin = 0.0;
    pick_nearest(row, label[idx], margin);
  });
  auto lab = [&](int i, int j) { return label[static_cast<std::size_t>(i) * np + ((j % np) + np) % np]; };

  struct EdgeJob {
    std::int64_t key;
    Eigen::Vector3d from, to;
    int la, lb;
  };
  std::vector<EdgeJob> jobs;
  for (int i = 0; i <= nt; ++i) {
    for (int j = 0; j < np; ++j) {
      if (i > 0 && i < nt && lab(i, j) != lab(i, j + 1)) {
        jobs.push_back({edge_key(false, i, j, np, nt), node(i, j), node(i, (j + 1) % np),
                        lab(i, j), lab(i, j + 1)});
      }
      if (i < nt && lab(i, j) != lab(i + 1, j)) {
        jobs.push_back({edge_key(true, i, j, np, nt), node(i, j), node(i + 1, j),
                        lab(i, j), lab(i + 1, j)});
      }
    }
  }

  constexpr int kBisectSteps = 60;
  std::vector<Crossing> crossing(jobs.size());
  parallel_for(jobs.size(), exec, [&](std::size_t k) {
    const auto& job = jobs[k];
    const auto a = static_cast<std::size_t>(job.la);
    const auto b = static_cast<std::size_t>(job.lb);
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < kBisectSteps; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Eigen::Vector3d q = ((1.0 - mid) * job.from + mid * job.to).normalized();
      if (dist.between(q, a, b) <= 0.0) lo = mid; else hi = mid;
    }
    const double t = 0.5 * (lo + hi);
    crossing[k] = {std::min(job.la, job.lb), std::max(job.la, job.lb),
                   ((1.0 - t) * job.from + t * job.to).normalized()};
  });
  std::map<std::int64_t, std::size_t> at_edge;
  for (std::size_t k = 0; k < jobs.size(); ++k) at_edge[jobs[k].key] = k;

  // Segments per cell, per site pair.
  struct Segment { std::size_t c0, c1; };
  std::map<std::pair<int, int>, std::vector<Segment>> segments;
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const int jn = (j + 1) % np;
      const std::int64_t ring[4] = {edge_key(false, i, j, np, nt), edge_key(true, i, jn, np, nt),
                                    edge_key(false, i + 1, j, np, nt), edge_key(true, i, j, np, nt)};
      std::map<std::pair<int, int>, std::vector<std::size_t>> hits;
      for (auto key : ring) {
        auto it = at_edge.find(key);
        if (it == at_edge.end()) continue;
        const auto& c = crossing[it->second];
        hits[{c.lo, c.hi}].push_back(it->second);
      }
      for (auto& [pair, idx] : hits) {
        if (idx.size() == 2) {
          segments[pair].push_back({idx[0], idx[1]});
        } else if (idx.size() == 4) {
          segments[pair].push_back({idx[0], idx[1]});
          segments[pair].push_back({idx[2], idx[3]});
        }
      }
    }
  }

  BoundaryResult out;
  out.grid_spacing = std::max(std::numbers::pi / nt, 2.0 * std::numbers::pi / np);
  out.crossing_tolerance = out.grid_spacing * std::ldexp(1.0, -kBisectSteps);

  for (auto& [pair, segs] : segments) {
    std::map<std::size_t, std::vector<std::size_t>> touching;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      touching[segs[s].c0].push_back(s);
      touching[segs[s].c1].push_back(s);
    }
    std::vector<bool> used(segs.size(), false);
    auto walk = [&](std::size_t seg, std::size_t start) {
      Polyline line;
      line.site_a = pair.first;
      line.site_b = pair.second;
      line.points.push_back(crossing[start].point);
      std::size_t cur = start;
      std::size_t s = seg;
      while (true) {
        used[s] = true;
        const std::size_t next = segs[s].c0 == cur ? segs[s].c1 : segs[s].c0;
        if (next == start) {
          line.closed = true;
          break;
        }
        line.points.push_back(crossing[next].point);
        cur = next;
        std::size_t follow = segs.size();
        for (auto cand : touching[cur]) {
          if (!used[cand]) {
            follow = cand;
            break;
          }
        }
        if (follow == segs.size()) break;
        s = follow;
      }
      out.lines.push_back(std::move(line));
    };
    // open chains first, starting from their ends
    for (auto& [c, list] : touching) {
      if (list.size() == 1 && !used[list[0]]) walk(list[0], c);
    }
    for (std::size_t s = 0; s < segs.size(); ++s) {
      if (!used[s]) walk(s, segs[s].c0);
    }
  }

  for (const auto& line : out.lines) {
    for (const auto& q : line.points) {
      out.max_abs_gap = std::max(
          out.max_abs_gap,
          std::abs(dist.between(q, static_cast<std::size_t>(line.site_a),
                                static_cast<std::size_t>(line.site_b))));
    }
  }
  return out;
}

}  // namespace qvor
