#include "qcap/channels.hpp"

#include <cmath>

namespace qcap::channels {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

QuantumChannel identity(Index dim) { return identity_channel(dim); }

QuantumChannel depolarizing(double p) {
  const double a = std::sqrt(1.0 - p);
  const double b = std::sqrt(p / 3.0);
  return validate_channel({a * Matrix::Identity(2, 2), b * pauli_x(),
                           b * pauli_y(), b * pauli_z()});
}

QuantumChannel dephasing(double q) {
  return validate_channel(
      {std::sqrt(1.0 - q) * Matrix::Identity(2, 2), std::sqrt(q) * pauli_z()});
}

QuantumChannel bit_flip(double p) {
  return validate_channel(
      {std::sqrt(1.0 - p) * Matrix::Identity(2, 2), std::sqrt(p) * pauli_x()});
}

QuantumChannel amplitude_damping(double gamma) {
  Matrix a0 = Matrix::Zero(2, 2);
  Matrix a1 = Matrix::Zero(2, 2);
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - gamma);
  a1(0, 1) = std::sqrt(gamma);
  return validate_channel({a0, a1});
}

QuantumChannel bsc_embed(double p) {
  const double s = std::sqrt(1.0 - p);
  const double f = std::sqrt(p);
  std::vector<Matrix> k(4, Matrix::Zero(2, 2));
  k[0](0, 0) = s;
  k[1](1, 1) = s;
  k[2](1, 0) = f;
  k[3](0, 1) = f;
  return validate_channel(std::move(k));
}

QuantumChannel random_channel(Index din, Index dout, int kraus_count, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index rows = dout * kraus_count;
  if (rows < din) throw DimensionError("too few Kraus operators for an isometry");
  Matrix g(rows, din);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < din; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  const Matrix v = g * pinv_sqrt_psd(g.adjoint() * g, 0.0);
  std::vector<Matrix> kraus;
  for (int k = 0; k < kraus_count; ++k) kraus.push_back(v.middleRows(k * dout, dout));
  return validate_channel(std::move(kraus));
}

std::vector<PureState> trine_states() {
  const double h = std::sqrt(3.0) / 2.0;
  Vector v0(2), v1(2), v2(2);
  v0 << 1.0, 0.0;
  v1 << -0.5, h;
  v2 << -0.5, -h;
  return {PureState(v0), PureState(v1), PureState(v2)};
}

std::vector<PureState> two_states(double theta) {
  Vector a(2), b(2);
  a << std::cos(theta / 2.0), std::sin(theta / 2.0);
  b << std::cos(theta / 2.0), -std::sin(theta / 2.0);
  return {PureState(a), PureState(b)};
}

std::vector<PureState> two_copy_trine_states() {
  std::vector<PureState> out;
  for (const auto& v : trine_states()) out.push_back(tensor(v, v));
  return out;
}

Ensemble uniform_ensemble(const std::vector<PureState>& states) {
  std::vector<double> p(states.size(), 1.0 / static_cast<double>(states.size()));
  std::vector<DensityMatrix> s(states.begin(), states.end());
  return Ensemble(std::move(p), std::move(s));
}

}  // namespace qcap::channels
