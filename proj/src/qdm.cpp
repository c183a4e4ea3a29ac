#include "qvor/qdm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qvor {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotSquare: return "NotSquare";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kTraceNotOne: return "TraceNotOne";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::kSingularState: return "SingularState";
    case ErrorCode::kSingularSecondArgument: return "SingularSecondArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kOutsideBall: return "OutsideBall";
    case ErrorCode::kRadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::kNotUnit: return "NotUnit";
    case ErrorCode::kSectionDimension: return "SectionDimension";
    case ErrorCode::kNotConstrained: return "NotConstrained";
    case ErrorCode::kDegenerateR: return "DegenerateR";
    case ErrorCode::kPureRho: return "PureRho";
    case ErrorCode::kIdenticalSites: return "IdenticalSites";
    case ErrorCode::kEmptySites: return "EmptySites";
    case ErrorCode::kImpureSite: return "ImpureSite";
    case ErrorCode::kPointSetMismatch: return "PointSetMismatch";
    case ErrorCode::kNonConvergence: return "NonConvergence";
    case ErrorCode::kGridTooCoarse: return "GridTooCoarse";
    case ErrorCode::kImageOutsideBall: return "ImageOutsideBall";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

namespace {

void require_square(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::kNotSquare, "matrix must be square and non-empty");
  }
}

void require_same_dim(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "state dimensions differ",
                static_cast<double>(a.rows() - b.rows()));
  }
}

double hermitian_defect(const CMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

DensityMatrix DensityMatrix::validate(const CMatrix& m, const Tolerances& tol) {
  require_square(m);
  const double herm = hermitian_defect(m);
  if (herm > tol.herm) {
    throw Error(ErrorCode::kNotHermitian, "a) matrix is not Hermitian", herm);
  }
  const Complex tr = m.trace();
  const double trace_defect = std::abs(tr - Complex(1.0, 0.0));
  if (trace_defect > tol.trace) {
    throw Error(ErrorCode::kTraceNotOne, "b) trace differs from one",
                trace_defect);
  }
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol.psd) {
    throw Error(ErrorCode::kNotPSD, "c) matrix has a negative eigenvalue",
                -min_eig);
  }
  return DensityMatrix(sym);
}

EigenDecomposition hermitian_eig(const CMatrix& m) {
  require_square(m);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kConvergenceFailure,
                "Hermitian eigensolver did not converge");
  }
  const auto n = m.rows();
  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const RVector& vals = es.eigenvalues();
  // descending, ties keep the solver's index order
  std::stable_sort(order.begin(), order.end(),
                   [&](auto i, auto j) { return vals(i) > vals(j); });
  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = vals(order[static_cast<size_t>(k)]);
    out.eigenvectors.col(k) = es.eigenvectors().col(order[static_cast<size_t>(k)]);
  }
  return out;
}

CMatrix hermitian_function(const CMatrix& m,
                           const std::function<double(double)>& f) {
  const auto eig = hermitian_eig(m);
  RVector fv(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.eigenvalues(i));
  return eig.eigenvectors * fv.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix matrix_log(const CMatrix& m, const Tolerances& tol) {
  const auto eig = hermitian_eig(m);
  const double min_eig = eig.eigenvalues.minCoeff();
  if (min_eig <= tol.rank) {
    throw Error(ErrorCode::kSingularState,
                "log undefined: state is not full rank", min_eig);
  }
  RVector lv = eig.eigenvalues.array().log();
  return eig.eigenvectors * lv.asDiagonal() * eig.eigenvectors.adjoint();
}

CMatrix matrix_log(const DensityMatrix& rho, const Tolerances& tol) {
  return matrix_log(rho.matrix(), tol);
}

CMatrix matrix_exp(const CMatrix& m) {
  return hermitian_function(m, [](double x) { return std::exp(x); });
}

SupportLog support_log(const CMatrix& rho, const Tolerances& tol) {
  const auto eig = hermitian_eig(rho);
  const auto n = rho.rows();
  SupportLog out;
  out.log = CMatrix::Zero(n, n);
  out.kernel_projector = CMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lam = eig.eigenvalues(k);
    const auto v = eig.eigenvectors.col(k);
    if (lam > tol.rank) {
      out.log.noalias() += std::log(lam) * (v * v.adjoint());
      ++out.rank;
    } else {
      out.kernel_projector.noalias() += v * v.adjoint();
    }
  }
  return out;
}

double neg_entropy(const CMatrix& sigma, const Tolerances& tol) {
  const auto eig = hermitian_eig(sigma);
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lam = eig.eigenvalues(i);
    if (lam > tol.rank) s += lam * std::log(lam);
  }
  return s;
}

double trace_product(const CMatrix& a, const CMatrix& b) {
  // Tr(ab) = sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum().real();
}

double divergence(const CMatrix& sigma, const CMatrix& rho,
                  const Tolerances& tol) {
  require_same_dim(sigma, rho);
  const auto eig = hermitian_eig(rho);
  const double min_eig = eig.eigenvalues.minCoeff();
  if (min_eig <= tol.rank) {
    throw Error(ErrorCode::kSingularSecondArgument,
                "D(sigma||rho) undefined: rho is not full rank", min_eig);
  }
  RVector lv = eig.eigenvalues.array().log();
  const CMatrix log_rho =
      eig.eigenvectors * lv.asDiagonal() * eig.eigenvectors.adjoint();
  return neg_entropy(sigma, tol) - trace_product(sigma, log_rho);
}

double divergence(const DensityMatrix& sigma, const DensityMatrix& rho,
                  const Tolerances& tol) {
  return divergence(sigma.matrix(), rho.matrix(), tol);
}

double trace_sigma_log_rho(const CMatrix& sigma, const CMatrix& rho,
                           const Tolerances& tol) {
  require_same_dim(sigma, rho);
  const auto sl = support_log(rho, tol);
  if (sl.rank < rho.rows()) {
    const double leak = trace_product(sigma, sl.kernel_projector);
    if (leak > std::sqrt(tol.rank)) {
      throw Error(ErrorCode::kSingularSecondArgument,
                  "sigma has weight on the kernel of rho", leak);
    }
  }
  return trace_product(sigma, sl.log);
}

double divergence_on_support(const CMatrix& sigma, const CMatrix& rho,
                             const Tolerances& tol) {
  return neg_entropy(sigma, tol) - trace_sigma_log_rho(sigma, rho, tol);
}

double coordinate_distance_sq(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "coordinate lengths differ");
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double hilbert_schmidt_distance_sq(const CMatrix& a, const CMatrix& b) {
  require_same_dim(a, b);
  return (a - b).squaredNorm();
}

double classical_kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "distribution lengths differ");
  }
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0) s += p[i] * (std::log(p[i]) - std::log(q[i]));
  }
  return s;
}

}  // namespace qvor
