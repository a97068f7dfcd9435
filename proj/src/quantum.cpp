#include "qcap/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qcap {

namespace {

std::string fmt_defect(const char* what, double defect) {
  std::ostringstream os;
  os << what << " (defect " << defect << ")";
  return os.str();
}

void check_probabilities(const std::vector<double>& p, std::size_t n) {
  if (p.empty()) throw Error("ensemble must not be empty");
  if (p.size() != n) throw DimensionError("probability/state count mismatch");
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw InvariantError("negative probability", -x);
    total += x;
  }
  if (std::abs(total - 1.0) > kTraceTol) {
    throw InvariantError(fmt_defect("probabilities do not sum to 1",
                                    std::abs(total - 1.0)),
                         std::abs(total - 1.0));
  }
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("Hermitian matrix must be square and non-empty");
  }
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw InvariantError(fmt_defect("matrix is not Hermitian", defect), defect);
  }
  m_ = hermitian_part(m);
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(Matrix::Zero(dim, dim));
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(Matrix::Identity(dim, dim));
}

PureState::PureState(const Vector& amplitudes) : v_(amplitudes) {
  if (v_.size() == 0) throw DimensionError("pure state must be non-empty");
  const double defect = std::abs(v_.squaredNorm() - 1.0);
  if (defect > kNormTol) {
    throw InvariantError(fmt_defect("state vector is not normalized", defect),
                         defect);
  }
}

PureState PureState::normalized(const Vector& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw InvariantError("cannot normalize a zero vector", 1.0);
  return PureState(v / n);
}

PureState PureState::basis(Index dim, Index k) {
  Vector v = Vector::Zero(dim);
  v(k) = 1.0;
  return PureState(v);
}

DensityMatrix::DensityMatrix(const Matrix& m) : m_(HermitianMatrix(m).matrix()) {
  const double trace_defect = std::abs(m_.trace().real() - 1.0);
  if (trace_defect > kTraceTol) {
    throw InvariantError(fmt_defect("density matrix trace is not 1",
                                    trace_defect),
                         trace_defect);
  }
  const double min_eig = eigh(m_).values(0);
  if (min_eig < -kPsdTol) {
    throw InvariantError(fmt_defect("density matrix is not PSD", -min_eig),
                         -min_eig);
  }
}

DensityMatrix::DensityMatrix(const PureState& psi) : m_(psi.projector()) {}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  return DensityMatrix(Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

Ensemble::Ensemble(std::vector<double> probabilities,
                   std::vector<DensityMatrix> states)
    : p_(std::move(probabilities)), states_(std::move(states)) {
  check_probabilities(p_, states_.size());
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw DimensionError("ensemble states differ in dimension");
    }
  }
}

Matrix Ensemble::average() const {
  Matrix avg = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < size(); ++i) avg += p_[i] * states_[i].matrix();
  return avg;
}

PureEnsemble::PureEnsemble(std::vector<double> probabilities,
                           std::vector<PureState> states)
    : p_(std::move(probabilities)), states_(std::move(states)) {
  check_probabilities(p_, states_.size());
  for (const auto& s : states_) {
    if (s.dim() != states_.front().dim()) {
      throw DimensionError("ensemble states differ in dimension");
    }
  }
}

Matrix PureEnsemble::average() const {
  Matrix avg = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < size(); ++i) avg += p_[i] * states_[i].projector();
  return avg;
}

Ensemble PureEnsemble::mixed() const {
  std::vector<DensityMatrix> states(states_.begin(), states_.end());
  return Ensemble(p_, std::move(states));
}

Povm::Povm(std::vector<double> weights, std::vector<PureState> directions)
    : q_(std::move(weights)), w_(std::move(directions)) {
  if (q_.empty() || q_.size() != w_.size()) {
    throw DimensionError("POVM needs matching non-empty weights and directions");
  }
  for (const auto& w : w_) {
    if (w.dim() != w_.front().dim()) {
      throw DimensionError("POVM directions differ in dimension");
    }
  }
  for (double q : q_) {
    if (!(q >= 0.0)) throw InvariantError("negative POVM weight", -q);
  }
  const double defect = completeness_defect();
  if (defect > kPovmTol) {
    throw InvariantError(fmt_defect("POVM elements do not sum to I", defect),
                         defect);
  }
}

double Povm::completeness_defect() const {
  Matrix sum = Matrix::Zero(dim(), dim());
  for (std::size_t i = 0; i < size(); ++i) sum += element(i);
  return max_abs(sum - Matrix::Identity(dim(), dim()));
}

QuantumChannel validate_channel(std::vector<Matrix> kraus) {
  if (kraus.empty()) throw Error("channel needs at least one Kraus operator");
  const Index din = kraus.front().cols();
  const Index dout = kraus.front().rows();
  if (din == 0 || dout == 0) throw DimensionError("empty Kraus operator");
  Matrix s = Matrix::Zero(din, din);
  for (const auto& a : kraus) {
    if (a.cols() != din || a.rows() != dout) {
      throw DimensionError("Kraus operators have inconsistent shapes");
    }
    s += a.adjoint() * a;
  }
  const double defect = max_abs(s - Matrix::Identity(din, din));
  if (defect > kChannelTol) {
    throw InvariantError(
        fmt_defect("trace preservation violated: max |sum A^dag A - I|",
                   defect),
        defect);
  }
  // Absorb the residual (<= 1e-9) so the stored set is TP to rounding.
  const Matrix polish = pinv_sqrt_psd(s, 0.0);
  for (auto& a : kraus) a = a * polish;
  return QuantumChannel(din, dout, std::move(kraus));
}

QuantumChannel identity_channel(Index dim) {
  return validate_channel({Matrix::Identity(dim, dim)});
}

Matrix apply_channel(const QuantumChannel& ch, const Matrix& m) {
  if (m.rows() != ch.dim_in() || m.cols() != ch.dim_in()) {
    throw DimensionError("input dimension does not match channel");
  }
  Matrix out = Matrix::Zero(ch.dim_out(), ch.dim_out());
  for (const auto& a : ch.kraus()) out.noalias() += a * m * a.adjoint();
  return out;
}

DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho) {
  return DensityMatrix(apply_channel(ch, rho.matrix()));
}

Matrix apply_adjoint(const QuantumChannel& ch, const Matrix& x) {
  if (x.rows() != ch.dim_out() || x.cols() != ch.dim_out()) {
    throw DimensionError("output dimension does not match channel");
  }
  Matrix out = Matrix::Zero(ch.dim_in(), ch.dim_in());
  for (const auto& a : ch.kraus()) out.noalias() += a.adjoint() * x * a;
  return out;
}

Matrix apply_complementary(const QuantumChannel& ch, const Matrix& m) {
  if (m.rows() != ch.dim_in() || m.cols() != ch.dim_in()) {
    throw DimensionError("input dimension does not match channel");
  }
  const auto& k = ch.kraus();
  const Index n = static_cast<Index>(k.size());
  std::vector<Matrix> am(k.size());
  for (Index i = 0; i < n; ++i) am[i] = k[i] * m;
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      // Tr(A_i m A_j^dag) = sum of (A_i m) .* conj(A_j)
      out(i, j) = (am[i].array() * k[j].array().conjugate()).sum();
    }
  }
  return out;
}

Matrix apply_complementary_adjoint(const QuantumChannel& ch, const Matrix& x) {
  const auto& k = ch.kraus();
  const Index n = static_cast<Index>(k.size());
  if (x.rows() != n || x.cols() != n) {
    throw DimensionError("environment dimension does not match channel");
  }
  Matrix out = Matrix::Zero(ch.dim_in(), ch.dim_in());
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (x(j, i) != Complex(0.0, 0.0)) {
        out.noalias() += x(j, i) * (k[j].adjoint() * k[i]);
      }
    }
  }
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  return PureState::normalized(kron(a.amplitudes(), b.amplitudes()));
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix(kron(a.matrix(), b.matrix()));
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& x : a.kraus()) {
    for (const auto& y : b.kraus()) kraus.push_back(kron(x, y));
  }
  return validate_channel(std::move(kraus));
}

Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, Keep keep) {
  if (dim_a <= 0 || dim_b <= 0 || m.rows() != dim_a * dim_b ||
      m.cols() != m.rows()) {
    throw DimensionError("partial trace: dimension factorization mismatch");
  }
  if (keep == Keep::A) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (Index i = 0; i < dim_a; ++i)
      for (Index j = 0; j < dim_a; ++j)
        for (Index k = 0; k < dim_b; ++k)
          out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return out;
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (Index k = 0; k < dim_a; ++k) {
    out += m.block(k * dim_b, k * dim_b, dim_b, dim_b);
  }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, Index dim_a, Index dim_b,
                            Keep keep) {
  return DensityMatrix(partial_trace(rho.matrix(), dim_a, dim_b, keep));
}

double shannon_entropy(std::span<const double> p) {
  double total = 0.0;
  double h = 0.0;
  for (double x : p) {
    if (x < 0.0) throw InvariantError("negative probability", -x);
    total += x;
    h += xlog2x_neg(x);
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvariantError(
        fmt_defect("probabilities do not sum to 1", std::abs(total - 1.0)),
        std::abs(total - 1.0));
  }
  return h;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return entropy_bits(rho.matrix());
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity: dimension mismatch");
  const Matrix sb = sqrt_psd(b.matrix());
  const Matrix inner = sb * a.matrix() * sb;
  const double f = sqrt_psd(inner).trace().real();
  return std::clamp(f, 0.0, 1.0);
}

double pure_fidelity(const PureState& u, const PureState& v) {
  if (u.dim() != v.dim()) throw DimensionError("fidelity: dimension mismatch");
  return std::norm(u.amplitudes().dot(v.amplitudes()));
}

std::vector<double> povm_probabilities(const Povm& m, const DensityMatrix& rho) {
  if (m.dim() != rho.dim()) {
    throw DimensionError("POVM and state dimensions differ");
  }
  std::vector<double> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Vector& w = m.directions()[i].amplitudes();
    out[i] = std::max(0.0, m.weights()[i] * w.dot(rho.matrix() * w).real());
  }
  return out;
}

PureState purify(const DensityMatrix& rho) {
  const HermitianEigen e = eigh(rho.matrix());
  std::vector<Index> kept;
  for (Index k = e.values.size() - 1; k >= 0; --k) {
    if (e.values(k) > 1e-12) kept.push_back(k);
  }
  const Index d = rho.dim();
  const Index r = static_cast<Index>(kept.size());
  Vector phi = Vector::Zero(d * r);
  for (Index slot = 0; slot < r; ++slot) {
    const Index k = kept[slot];
    Vector f = Vector::Zero(r);
    f(slot) = 1.0;
    phi += std::sqrt(e.values(k)) * kron(Vector(e.vectors.col(k)), f);
  }
  return PureState::normalized(phi);
}

Povm square_root_measurement(const std::vector<PureState>& states) {
  if (states.empty()) throw Error("square-root measurement needs states");
  const Index d = states.front().dim();
  Matrix phi = Matrix::Zero(d, d);
  for (const auto& s : states) {
    if (s.dim() != d) throw DimensionError("states differ in dimension");
    phi += s.projector();
  }
  constexpr double cutoff = 1e-10;
  const Matrix root_inv = pinv_sqrt_psd(phi, cutoff);
  std::vector<double> q;
  std::vector<PureState> w;
  for (const auto& s : states) {
    const Vector u = root_inv * s.amplitudes();
    q.push_back(u.squaredNorm());
    w.push_back(PureState::normalized(u));
  }
  const HermitianEigen e = eigh(phi);
  for (Index k = 0; k < d; ++k) {
    if (e.values(k) <= cutoff) {
      q.push_back(1.0);
      w.push_back(PureState::normalized(e.vectors.col(k)));
    }
  }
  return Povm(std::move(q), std::move(w));
}

RealVector hermitian_coords(const Matrix& m) {
  const Index d = m.rows();
  RealVector c(d * d);
  const double s2 = std::sqrt(2.0);
  Index pos = 0;
  for (Index k = 0; k < d; ++k) c(pos++) = m(k, k).real();
  const Index pairs = d * (d - 1) / 2;
  Index p = 0;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k, ++p) {
      const Complex h = 0.5 * (m(j, k) + std::conj(m(k, j)));
      c(d + p) = s2 * h.real();
      c(d + pairs + p) = s2 * h.imag();
    }
  }
  return c;
}

Matrix hermitian_from_coords(Index d, const RealVector& c) {
  if (c.size() != d * d) throw DimensionError("coordinate vector length != d^2");
  Matrix m = Matrix::Zero(d, d);
  const double inv_s2 = 1.0 / std::sqrt(2.0);
  for (Index k = 0; k < d; ++k) m(k, k) = c(k);
  const Index pairs = d * (d - 1) / 2;
  Index p = 0;
  for (Index j = 0; j < d; ++j) {
    for (Index k = j + 1; k < d; ++k, ++p) {
      const Complex h(c(d + p) * inv_s2, c(d + pairs + p) * inv_s2);
      m(j, k) = h;
      m(k, j) = std::conj(h);
    }
  }
  return m;
}

HermitianCoords hermitian_to_coords(const HermitianMatrix& h) {
  return {h.dim(), hermitian_coords(h.matrix())};
}

HermitianMatrix coords_to_hermitian(const HermitianCoords& c) {
  return HermitianMatrix(hermitian_from_coords(c.dim, c.coords));
}

}  // namespace qcap
