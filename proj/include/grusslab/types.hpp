#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace grusslab {

inline constexpr const char* kVersion = "0.1.0";

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Dimension or conformability violation.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Input outside the mathematical domain of an operation (not PSD, not
/// Hermitian, normalization defect, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Bad user-facing configuration (gauge syntax, flag values, file fields).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// NaN or Inf where a finite entry is required.
struct InvalidInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Requested a Kraus form for a map that has none (not completely positive).
struct NoKrausFormError : DomainError {
  using DomainError::DomainError;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (!a.allFinite())
    throw InvalidInputError(std::string(what) + ": non-finite entries");
}

inline void require_square(const ComplexMatrix& a, const char* what) {
  if (a.rows() != a.cols())
    throw ShapeError(std::string(what) + ": expected a square matrix, got " +
                     std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

}  // namespace grusslab
