#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cstdint>
#include <string>

#include "grusslab/rng.hpp"
#include "grusslab/types.hpp"

namespace grusslab {

// Relative tolerances shared across the library. Hermiticity/PSD checks and
// inequality slacks scale by (1 + norm) so verdicts are scale-free.
inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kRankTol = 1e-10;

/// Singular values in nonincreasing order. Consumers treat s_k = 0 for
/// k > min(rows, cols); the padded tail is never stored.
struct SingularSpectrum {
  RealVector values;

  double largest() const { return values.size() ? values(0) : 0.0; }
};

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  ComplexMatrix vectors;
};

struct PsdVerdict {
  bool psd = false;
  double min_eigenvalue = 0.0;
};

inline SingularSpectrum singular_values(const ComplexMatrix& a) {
  require_finite(a, "singular_values");
  if (a.size() == 0) return {RealVector(0)};
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return {svd.singularValues()};
}

/// Largest singular value; the operator (spectral) norm.
inline double operator_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues()(0);
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) {
  return 0.5 * (a + a.adjoint());
}

inline void require_hermitian(const ComplexMatrix& a, double tol, const char* what) {
  require_square(a, what);
  const double defect = operator_norm(a - a.adjoint());
  if (defect > tol * (1.0 + operator_norm(a)))
    throw ShapeError(std::string(what) + ": matrix is not Hermitian (defect " +
                     std::to_string(defect) + ")");
}

inline HermitianEigen hermitian_eigen(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  return {es.eigenvalues(), es.eigenvectors()};
}

/// PSD test with a min-eigenvalue certificate. Requires the input to be
/// Hermitian within tol*(1+||A||).
inline PsdVerdict is_psd(const ComplexMatrix& a, double tol = kHermitianTol) {
  require_finite(a, "is_psd");
  require_hermitian(a, tol, "is_psd");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a),
                                                  Eigen::EigenvaluesOnly);
  const double lambda_min = es.eigenvalues()(0);
  const double scale = 1.0 + operator_norm(a);
  return {lambda_min >= -tol * scale, lambda_min};
}

/// PSD square root. Eigenvalues in [-tol*(1+||A||), 0) are clamped to zero;
/// anything more negative is out of domain.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& a, double tol = kHermitianTol) {
  require_finite(a, "psd_sqrt");
  require_hermitian(a, tol, "psd_sqrt");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  const double scale = 1.0 + (a.size() ? es.eigenvalues().cwiseAbs().maxCoeff() : 0.0);
  RealVector vals = es.eigenvalues();
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) < -tol * scale)
      throw DomainError("psd_sqrt: matrix is not PSD (min eigenvalue " +
                        std::to_string(vals(i)) + ")");
    vals(i) = vals(i) > 0.0 ? std::sqrt(vals(i)) : 0.0;
  }
  return es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
}

/// Moore-Penrose pseudo-inverse. Singular values below rank_tol * s_1 are
/// treated as zero.
inline ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double rank_tol = kRankTol) {
  require_finite(a, "pseudo_inverse");
  if (a.size() == 0) return ComplexMatrix(a.cols(), a.rows());
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double cutoff = s.size() ? rank_tol * s(0) : 0.0;
  RealVector inv = RealVector::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

template <typename DerivedA, typename DerivedB>
ComplexMatrix kron(const Eigen::MatrixBase<DerivedA>& a,
                   const Eigen::MatrixBase<DerivedB>& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename DerivedA, typename DerivedB>
ComplexMatrix hadamard(const Eigen::MatrixBase<DerivedA>& a,
                       const Eigen::MatrixBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("hadamard: shape mismatch " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                     "x" + std::to_string(b.cols()));
  return a.cwiseProduct(b);
}

template <typename DerivedA, typename DerivedB>
ComplexMatrix direct_sum(const Eigen::MatrixBase<DerivedA>& a,
                         const Eigen::MatrixBase<DerivedB>& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

/// Haar-distributed random unitary: QR of a complex Gaussian matrix with the
/// R diagonal phases folded back into Q. Deterministic per seed.
inline ComplexMatrix random_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw ConfigError("random_unitary: dim must be >= 1");
  SplitMix64 rng(seed);
  ComplexMatrix g = random_complex_matrix(rng, dim, dim);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

struct ContractionFactor {
  ComplexMatrix k;
  bool valid = false;
};

/// Solve X = sqrt(C) K sqrt(D) for K. `valid` means K is a contraction and
/// the factorization reconstructs X, which holds exactly when the block
/// matrix [[C, X], [X*, D]] is PSD.
inline ContractionFactor contraction_factor(const ComplexMatrix& c, const ComplexMatrix& x,
                                            const ComplexMatrix& d,
                                            double tol = kHermitianTol) {
  if (c.rows() != x.rows() || d.rows() != x.cols())
    throw ShapeError("contraction_factor: block [[C, X], [X*, D]] is not conformable");
  const ComplexMatrix sc = psd_sqrt(c, tol);
  const ComplexMatrix sd = psd_sqrt(d, tol);
  ComplexMatrix k = pseudo_inverse(sc) * x * pseudo_inverse(sd);
  const bool contraction = operator_norm(k) <= 1.0 + tol;
  const bool reconstructs =
      operator_norm(sc * k * sd - x) <= tol * (1.0 + operator_norm(x));
  return {std::move(k), contraction && reconstructs};
}

}  // namespace grusslab
