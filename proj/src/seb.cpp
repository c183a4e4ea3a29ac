#include "qvor/seb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qvor {

namespace {

void divergence_row(std::span<const DensityMatrix> points, std::span<const double> negent,
                    const CMatrix& log_center, Execution exec, std::span<double> out) {
  parallel_for(points.size(), exec, [&](std::size_t i) {
    out[i] = negent[i] - trace_product(points[i].matrix(), log_center);
  });
}

// lowest index wins ties
std::size_t arg_max(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

std::vector<double> divergences_to_center(std::span<const DensityMatrix> points,
                                          const CMatrix& center, Execution exec) {
  std::vector<double> negent(points.size());
  parallel_for(points.size(), exec,
               [&](std::size_t i) { negent[i] = neg_entropy(points[i].matrix()); });
  const CMatrix log_center = matrix_log(center);
  std::vector<double> out(points.size());
  divergence_row(points, negent, log_center, exec, out);
  return out;
}

std::vector<double> divergences_to_center_reference(std::span<const DensityMatrix> points,
                                                    const CMatrix& center) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(divergence(p.matrix(), center));
  return out;
}

namespace {

// Tr(sigma Dlog[rho](B)) = Tr(W B) with W = V (F o V* sigma V) V*, where
// F_ab is the divided difference of log at the eigenvalues of rho.
CMatrix log_derivative_weight(const EigenDecomposition& eig, const CMatrix& sigma) {
  const auto& lam = eig.eigenvalues;
  const auto& v = eig.eigenvectors;
  const int d = static_cast<int>(lam.size());
  CMatrix t = v.adjoint() * sigma * v;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      const double diff = lam(a) - lam(b);
      const double f = std::abs(diff) > 1e-10 * std::max(lam(a), lam(b))
                           ? (std::log(lam(a)) - std::log(lam(b))) / diff
                           : 2.0 / (lam(a) + lam(b));
      t(a, b) *= f;
    }
  }
  return v * t * v.adjoint();
}

}  // namespace

SEBResult smallest_enclosing_ball(std::span<const DensityMatrix> points,
                                  const SEBConfig& config) {
  if (points.empty()) throw Error(ErrorCode::kEmptySites, "no points to enclose");
  const int d = points[0].dim();
  for (const auto& p : points) {
    if (p.dim() != d) throw Error(ErrorCode::kDimensionMismatch, "points differ in dimension");
  }
  const std::size_t n = points.size();
  const int m = d * d - 1;

  if (n == 1 && hermitian_eig(points[0].matrix()).eigenvalues(d - 1) >= config.min_eigenvalue) {
    SEBResult one(points[0]);
    one.support = {0};
    one.converged = true;
    return one;
  }

  std::vector<double> negent(n);
  parallel_for(n, config.exec,
               [&](std::size_t i) { negent[i] = neg_entropy(points[i].matrix()); });

  // rho(x) = I/d + sum_a x_a basis[a], x the generalized Bloch vector
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
  std::vector<CMatrix> basis;
  for (int a = 1; a <= m; ++a) {
    GeneralizedBloch e(d);
    e(a) = 1.0;
    basis.push_back(xi_to_density(e) - mixed);
  }
  auto state = [&](const Eigen::VectorXd& x) {
    CMatrix rho = mixed;
    for (int a = 0; a < m; ++a) rho += x(a) * basis[static_cast<std::size_t>(a)];
    return CMatrix(0.5 * (rho + rho.adjoint()));
  };

  // Every state has |x| below this: diagonal entries lie in [-1, d-1] and
  // off-diagonal ones in [-1, 1].
  const double radius0 = std::sqrt((d - 1.0) * (d - 1.0) * (d - 1.0) + d * (d - 1.0)) + 1.0;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd shape = radius0 * radius0 * Eigen::MatrixXd::Identity(m, m);

  SEBResult out(DensityMatrix::validate(mixed));
  std::vector<double> dist(n), best_dist;
  double upper = std::numeric_limits<double>::infinity();
  double lower = 0.0;  // D >= 0
  Eigen::VectorXd g(m);
  int iter = 0;
  bool converged = false;

  while (true) {
    const CMatrix rho = state(x);
    const auto eig = hermitian_eig(rho);
    const double lam_min = eig.eigenvalues(d - 1);
    double cut_value = 0.0;
    bool objective_cut = false;
    if (lam_min < config.min_eigenvalue) {
      // feasibility cut on -lambda_min
      const Eigen::VectorXcd v = eig.eigenvectors.col(d - 1);
      for (int a = 0; a < m; ++a) {
        g(a) = -(v.adjoint() * basis[static_cast<std::size_t>(a)] * v)(0, 0).real();
      }
    } else {
      RVector logs = eig.eigenvalues.array().log();
      const CMatrix log_rho = eig.eigenvectors * logs.asDiagonal() * eig.eigenvectors.adjoint();
      divergence_row(points, negent, log_rho, config.exec, dist);
      const std::size_t j = arg_max(dist);
      cut_value = dist[j];
      objective_cut = true;
      if (dist[j] < upper) {
        upper = dist[j];
        out.center = DensityMatrix::validate(rho);
        best_dist = dist;
      }
      const CMatrix w = log_derivative_weight(eig, points[j].matrix());
      for (int a = 0; a < m; ++a) g(a) = -trace_product(w, basis[static_cast<std::size_t>(a)]);
    }

    const double gpg = g.dot(shape * g);
    if (objective_cut) lower = std::max(lower, cut_value - std::sqrt(std::max(gpg, 0.0)));
    if (upper - lower <= config.gap_tol) {
      converged = true;
      break;
    }
    if (iter >= config.max_iterations || !(gpg > 0.0)) break;
    ++iter;

    // central cut
    const Eigen::VectorXd pg = shape * g / std::sqrt(gpg);
    const double mm = m;
    x -= pg / (mm + 1.0);
    shape = mm * mm / (mm * mm - 1.0) * (shape - 2.0 / (mm + 1.0) * pg * pg.transpose());
    shape = 0.5 * (shape + shape.transpose());
  }

  if (best_dist.empty()) {
    throw Error(ErrorCode::kNonConvergence, "no feasible center found");
  }
  out.radius = upper;
  out.lower_bound = std::min(lower, upper);
  out.gap = upper - out.lower_bound;
  out.iterations = iter;
  out.converged = converged;
  const double band = std::max(config.gap_tol, out.gap);
  for (std::size_t i = 0; i < n; ++i) {
    if (best_dist[i] >= out.radius - band) out.support.push_back(i);
  }
  return out;
}

double qubit_divergence(const BlochVector& s, const BlochVector& c) {
  const double sn = std::min(1.0, s.norm());
  double neg_entropy_s = 0.0;
  for (double lam : {(1.0 + sn) / 2.0, (1.0 - sn) / 2.0}) {
    if (lam > 0.0) neg_entropy_s += lam * std::log(lam);
  }
  const double cn = c.norm();
  const double dot = s.vec().dot(c.vec());
  const double atanh_ratio = cn < 1e-8 ? 1.0 : std::atanh(cn) / cn;
  return neg_entropy_s - 0.5 * std::log((1.0 - cn * cn) / 4.0) - atanh_ratio * dot;
}

namespace {

using NodeObjective = double (*)(std::span<const BlochVector>, const Eigen::Vector3d&);

double max_closed_form(std::span<const BlochVector> pts, const Eigen::Vector3d& c) {
  const auto cb = BlochVector::from(c);
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : pts) m = std::max(m, qubit_divergence(s, cb));
  return m;
}

double max_matrix_path(std::span<const BlochVector> pts, const Eigen::Vector3d& c) {
  const auto center = bloch_to_density(BlochVector::from(c));
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : pts) {
    const auto sigma = bloch_to_density(BlochVector::from(s.vec() / std::max(1.0, s.norm())));
    m = std::max(m, divergence(sigma, center));
  }
  return m;
}

constexpr double kBallLimit = 1.0 - 1e-9;

GridCenter grid_search(std::span<const BlochVector> points, const GridSpec& spec,
                       NodeObjective objective, Execution exec) {
  if (points.empty()) throw Error(ErrorCode::kEmptySites, "no points to enclose");
  if (!(spec.spacing > 0.0) || spec.spacing > spec.tolerance) {
    throw Error(ErrorCode::kGridTooCoarse,
                "grid spacing exceeds the requested tolerance", spec.spacing);
  }
  int levels = 0;
  while (spec.spacing * std::ldexp(1.0, levels + 1) <= spec.coarse_spacing) ++levels;

  GridCenter out;
  auto search = [&](const Eigen::Vector3i& mid, int half, double h) {
    std::vector<Eigen::Vector3d> nodes;
    for (int i = -half; i <= half; ++i) {
      for (int j = -half; j <= half; ++j) {
        for (int k = -half; k <= half; ++k) {
          const Eigen::Vector3d c = h * (mid + Eigen::Vector3i(i, j, k)).cast<double>();
          if (c.norm() < kBallLimit) nodes.push_back(c);
        }
      }
    }
    std::vector<double> value(nodes.size());
    parallel_for(nodes.size(), exec,
                 [&](std::size_t q) { value[q] = objective(points, nodes[q]); });
    out.nodes_evaluated += nodes.size();
    std::size_t best = 0;
    for (std::size_t q = 1; q < nodes.size(); ++q) {
      if (value[q] < value[best]) best = q;
    }
    return std::pair{nodes[best], value[best]};
  };

  double h = spec.spacing * std::ldexp(1.0, levels);
  auto [c, v] = search(Eigen::Vector3i::Zero(), static_cast<int>(std::ceil(1.0 / h)), h);
  while (levels > 0) {
    --levels;
    h = spec.spacing * std::ldexp(1.0, levels);
    const Eigen::Vector3i mid = (c / h).array().round().cast<int>();
    std::tie(c, v) = search(mid, spec.window, h);
  }
  out.center = BlochVector::from(c);
  out.radius = v;

  double spread = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    for (double sgn : {-1.0, 1.0}) {
      Eigen::Vector3d nb = c;
      nb(axis) += sgn * h;
      if (nb.norm() >= kBallLimit) continue;
      spread = std::max(spread, objective(points, nb) - v);
    }
  }
  out.error_bound = 0.5 * std::sqrt(3.0) * spread;
  return out;
}

}  // namespace

GridCenter brute_force_center(std::span<const BlochVector> points, const GridSpec& spec) {
  return grid_search(points, spec, &max_closed_form, spec.exec);
}

GridCenter brute_force_center_reference(std::span<const BlochVector> points,
                                        const GridSpec& spec) {
  return grid_search(points, spec, &max_matrix_path, Execution::kSerial);
}

}  // namespace qvor
