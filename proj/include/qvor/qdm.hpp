#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qvor/error.hpp"

namespace qvor {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

// Numerical cutoffs for the exact-arithmetic state conditions.
struct Tolerances {
  double herm = 1e-9;
  double trace = 1e-9;
  double psd = 1e-9;
  double rank = 1e-12;
};

// Hermitian, unit-trace, positive semidefinite d x d matrix. Only
// constructible through validation.
class DensityMatrix {
 public:
  static DensityMatrix validate(const CMatrix& m, const Tolerances& tol = {});

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }

 private:
  explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

struct EigenDecomposition {
  RVector eigenvalues;   // descending
  CMatrix eigenvectors;  // columns, unitary
};

EigenDecomposition hermitian_eig(const CMatrix& m);

// X f(diag(lambda)) X* for a Hermitian input.
CMatrix hermitian_function(const CMatrix& m,
                           const std::function<double(double)>& f);

CMatrix matrix_log(const CMatrix& m, const Tolerances& tol = {});
CMatrix matrix_log(const DensityMatrix& rho, const Tolerances& tol = {});
CMatrix matrix_exp(const CMatrix& m);

// log restricted to the support of a rank-deficient state: eigenvalues
// <= tol.rank are treated as the kernel. `kernel_projector` spans it.
struct SupportLog {
  CMatrix log;
  CMatrix kernel_projector;
  int rank = 0;
};
SupportLog support_log(const CMatrix& rho, const Tolerances& tol = {});

// Tr sigma log sigma with the 0 log 0 = 0 convention.
double neg_entropy(const CMatrix& sigma, const Tolerances& tol = {});

// Re Tr(a b) without forming the product.
double trace_product(const CMatrix& a, const CMatrix& b);

// D(sigma || rho) = Tr sigma (log sigma - log rho), in nats. rho must be
// full rank.
double divergence(const DensityMatrix& sigma, const DensityMatrix& rho,
                  const Tolerances& tol = {});
double divergence(const CMatrix& sigma, const CMatrix& rho,
                  const Tolerances& tol = {});

// Tr sigma log rho where log rho is taken on supp(rho). Finite only when
// sigma carries no weight on ker(rho); throws kSingularSecondArgument
// otherwise.
double trace_sigma_log_rho(const CMatrix& sigma, const CMatrix& rho,
                           const Tolerances& tol = {});

// Divergence that accepts rank-deficient rho as long as
// supp(sigma) is contained in supp(rho).
double divergence_on_support(const CMatrix& sigma, const CMatrix& rho,
                             const Tolerances& tol = {});

double coordinate_distance_sq(std::span<const double> a,
                              std::span<const double> b);

// Squared Frobenius norm of a - b.
double hilbert_schmidt_distance_sq(const CMatrix& a, const CMatrix& b);

// Classical Kullback-Leibler divergence in nats; used as a reference.
double classical_kl(std::span<const double> p, std::span<const double> q);

}  // namespace qvor
