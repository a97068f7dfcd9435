#pragma once

#include "qcap/channels.hpp"
#include "qcap/quantum.hpp"
#include "qcap/sphere.hpp"

#include <cmath>
#include <numbers>

namespace qcap::test {

inline double h2(double x) {
  return xlog2x_neg(x) + xlog2x_neg(1.0 - x);
}

inline Vector real_vector(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline Matrix random_hermitian(Index d, Rng& rng) {
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  return hermitian_part(m);
}

inline Matrix random_unitary(Index d, Rng& rng) {
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline Ensemble two_state_ensemble(double theta) {
  return channels::uniform_ensemble(channels::two_states(theta));
}

inline double min_eigenvalue(const Matrix& m) { return eigh(m).values(0); }

}  // namespace qcap::test

namespace qcap::test {

/// Rows of a random isometry C^d -> C^k give a random rank-one POVM.
inline Povm random_povm(Index d, Index k, Rng& rng) {
  std::normal_distribution<double> n;
  Matrix g(k, d);
  for (Index i = 0; i < k; ++i)
    for (Index j = 0; j < d; ++j) g(i, j) = Complex(n(rng), n(rng));
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix v = qr.householderQ() * Matrix::Identity(k, d);
  std::vector<double> q;
  std::vector<PureState> w;
  for (Index i = 0; i < k; ++i) {
    Vector row = v.row(i).adjoint();
    q.push_back(row.squaredNorm());
    w.push_back(PureState::normalized(row));
  }
  return Povm(q, w);
}

inline Ensemble random_ensemble(Index d, std::size_t n, Rng& rng) {
  std::vector<DensityMatrix> states;
  for (std::size_t i = 0; i < n; ++i) states.emplace_back(random_density(d, rng));
  return Ensemble(random_dirichlet(n, rng), states);
}

inline QuantumChannel random_qubit_channel(Rng& rng) {
  std::uniform_int_distribution<int> k(1, 4);
  return channels::random_channel(2, 2, k(rng), rng);
}

}  // namespace qcap::test
