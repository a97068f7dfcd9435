#include "qcap/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qcap {

namespace {
constexpr double kEntropyCutoff = 1e-12;
}

HermitianEigen eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  if (solver.info() != Eigen::Success) {
    throw Error("Hermitian eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

Matrix hermitian_part(const Matrix& m) { return (m + m.adjoint()) * 0.5; }

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

Matrix log2_psd(const Matrix& m, double cutoff) {
  const HermitianEigen e = eigh(m);
  RealVector logs(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k) {
    logs(k) = e.values(k) > cutoff ? std::log2(e.values(k)) : 0.0;
  }
  return e.vectors * logs.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

Matrix sqrt_psd(const Matrix& m) {
  const HermitianEigen e = eigh(m);
  RealVector roots = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

Matrix pinv_sqrt_psd(const Matrix& m, double cutoff) {
  const HermitianEigen e = eigh(m);
  RealVector inv(e.values.size());
  for (Index k = 0; k < e.values.size(); ++k) {
    inv(k) = e.values(k) > cutoff ? 1.0 / std::sqrt(e.values(k)) : 0.0;
  }
  return e.vectors * inv.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

double xlog2x_neg(double x) {
  return x > kEntropyCutoff ? -x * std::log2(x) : 0.0;
}

double entropy_bits(const Matrix& m) {
  bool diagonal = true;
  for (Index j = 0; j < m.cols() && diagonal; ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0, 0.0)) {
        diagonal = false;
        break;
      }
    }
  }
  double h = 0.0;
  if (diagonal) {
    for (Index i = 0; i < m.rows(); ++i) {
      h += xlog2x_neg(std::clamp(m(i, i).real(), 0.0, 1.0));
    }
    return h;
  }
  const RealVector values = eigh(m).values;
  for (Index i = 0; i < values.size(); ++i) {
    h += xlog2x_neg(std::clamp(values(i), 0.0, 1.0));
  }
  return h;
}

}  // namespace qcap
