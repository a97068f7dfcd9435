#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qcap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Raised when a value fails a validity check; defect() is the measured
// violation (max entry deviation, trace error, ...).
class InvariantError : public Error {
 public:
  InvariantError(const std::string& what, double defect)
      : Error(what), defect_(defect) {}
  double defect() const noexcept { return defect_; }

 private:
  double defect_;
};

struct HermitianEigen {
  RealVector values;  // ascending
  Matrix vectors;     // orthonormal columns
};

/// Eigendecomposition of the Hermitian part of `m`.
HermitianEigen eigh(const Matrix& m);

double max_abs(const Matrix& m);
double hermiticity_defect(const Matrix& m);
Matrix hermitian_part(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// log2 of a PSD matrix on its support. Eigenvalues below `cutoff` contribute
/// zero (subgradient choice at the boundary of the PSD cone).
Matrix log2_psd(const Matrix& m, double cutoff = 1e-12);

Matrix sqrt_psd(const Matrix& m);

/// Pseudo-inverse square root; eigenvalues below `cutoff` are dropped.
Matrix pinv_sqrt_psd(const Matrix& m, double cutoff = 1e-10);

/// Von Neumann entropy in bits of a PSD matrix, eigenvalues clipped to
/// [0, 1] and values below 1e-12 treated as zero. Diagonal input takes the
/// Shannon path directly.
double entropy_bits(const Matrix& m);

/// -x log2 x with 0 log 0 = 0.
double xlog2x_neg(double x);

}  // namespace qcap
