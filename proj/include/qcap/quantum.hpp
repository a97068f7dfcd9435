#pragma once

// States, channels and measurements on finite-dimensional Hilbert spaces.
// All entropies are in bits.

#include "qcap/linalg.hpp"

#include <span>
#include <vector>

namespace qcap {

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormTol = 1e-10;
inline constexpr double kChannelTol = 1e-9;
inline constexpr double kPovmTol = 1e-9;

class HermitianMatrix {
 public:
  /// Throws InvariantError when `m` deviates from its adjoint by more than
  /// 1e-10 (max entry). The stored matrix is exactly Hermitian.
  explicit HermitianMatrix(const Matrix& m);

  static HermitianMatrix zero(Index dim);
  static HermitianMatrix identity(Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

class PureState {
 public:
  /// Throws InvariantError unless | |v|^2 - 1 | <= 1e-10.
  explicit PureState(const Vector& amplitudes);

  static PureState normalized(const Vector& v);
  static PureState basis(Index dim, Index k);

  Index dim() const { return v_.size(); }
  const Vector& amplitudes() const { return v_; }
  Matrix projector() const { return v_ * v_.adjoint(); }

 private:
  Vector v_;
};

class DensityMatrix {
 public:
  /// Hermitian, unit trace and PSD, each within 1e-10.
  explicit DensityMatrix(const Matrix& m);
  DensityMatrix(const PureState& psi);  // NOLINT: a pure state is a density matrix

  static DensityMatrix maximally_mixed(Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  HermitianMatrix hermitian() const { return HermitianMatrix(m_); }

 private:
  Matrix m_;
};

class QuantumChannel {
 public:
  Index dim_in() const { return dim_in_; }
  Index dim_out() const { return dim_out_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

 private:
  friend QuantumChannel validate_channel(std::vector<Matrix> kraus);
  QuantumChannel(Index din, Index dout, std::vector<Matrix> kraus)
      : dim_in_(din), dim_out_(dout), kraus_(std::move(kraus)) {}

  Index dim_in_;
  Index dim_out_;
  std::vector<Matrix> kraus_;
};

/// Weighted list of (possibly mixed) states sharing one dimension.
class Ensemble {
 public:
  Ensemble(std::vector<double> probabilities, std::vector<DensityMatrix> states);

  std::size_t size() const { return p_.size(); }
  Index dim() const { return states_.front().dim(); }
  const std::vector<double>& probabilities() const { return p_; }
  const std::vector<DensityMatrix>& states() const { return states_; }
  Matrix average() const;

 private:
  std::vector<double> p_;
  std::vector<DensityMatrix> states_;
};

class PureEnsemble {
 public:
  PureEnsemble(std::vector<double> probabilities, std::vector<PureState> states);

  std::size_t size() const { return p_.size(); }
  Index dim() const { return states_.front().dim(); }
  const std::vector<double>& probabilities() const { return p_; }
  const std::vector<PureState>& states() const { return states_; }
  Matrix average() const;
  Ensemble mixed() const;

 private:
  std::vector<double> p_;
  std::vector<PureState> states_;
};

/// Rank-one POVM {q_i w_i w_i^dag} with sum equal to the identity.
class Povm {
 public:
  Povm(std::vector<double> weights, std::vector<PureState> directions);

  std::size_t size() const { return q_.size(); }
  Index dim() const { return w_.front().dim(); }
  const std::vector<double>& weights() const { return q_; }
  const std::vector<PureState>& directions() const { return w_; }
  Matrix element(std::size_t i) const { return q_[i] * w_[i].projector(); }
  /// max |sum_i E_i - I| entry.
  double completeness_defect() const;

 private:
  std::vector<double> q_;
  std::vector<PureState> w_;
};

/// Real coordinates of a Hermitian matrix in the orthonormal basis
///   diagonal units e_kk (k = 0..d-1),
///   (e_jk + e_kj)/sqrt2   for j < k in row-major order,
///   i(e_jk - e_kj)/sqrt2  for j < k in row-major order,
/// where e_jk = |j><k|. Tr(AB) equals the dot product of coordinates.
struct HermitianCoords {
  Index dim = 0;
  RealVector coords;
};

// Channels.
QuantumChannel validate_channel(std::vector<Matrix> kraus);
QuantumChannel identity_channel(Index dim);
DensityMatrix apply_channel(const QuantumChannel& ch, const DensityMatrix& rho);
Matrix apply_channel(const QuantumChannel& ch, const Matrix& m);
/// Heisenberg picture: sum_i A_i^dag X A_i.
Matrix apply_adjoint(const QuantumChannel& ch, const Matrix& x);
/// Environment output sum_ij Tr(A_i m A_j^dag)|i><j| of the Stinespring
/// isometry built from the Kraus list.
Matrix apply_complementary(const QuantumChannel& ch, const Matrix& m);
Matrix apply_complementary_adjoint(const QuantumChannel& ch, const Matrix& x);

// Tensor products. Index order is (first, second), first most significant.
PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);

enum class Keep { A, B };
DensityMatrix partial_trace(const DensityMatrix& rho, Index dim_a, Index dim_b,
                            Keep keep);
Matrix partial_trace(const Matrix& m, Index dim_a, Index dim_b, Keep keep);

// Entropies.
double shannon_entropy(std::span<const double> p);
double von_neumann_entropy(const DensityMatrix& rho);

/// Tr sqrt(sqrt(b) a sqrt(b)); symmetric in its arguments.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// |u^dag v|^2, the squared convention for pure states.
double pure_fidelity(const PureState& u, const PureState& v);

std::vector<double> povm_probabilities(const Povm& m, const DensityMatrix& rho);

/// Phi = sum_k sqrt(l_k) e_k (x) f_k over the nonzero eigenpairs of rho
/// (eigenvalues <= 1e-12 dropped); system first, reference second.
PureState purify(const DensityMatrix& rho);

/// Pretty-good measurement for equiprobable pure states. Elements outside
/// the span of the states are completed with an orthonormal basis of the
/// orthogonal complement so that the result is a complete POVM.
Povm square_root_measurement(const std::vector<PureState>& states);

HermitianCoords hermitian_to_coords(const HermitianMatrix& h);
HermitianMatrix coords_to_hermitian(const HermitianCoords& c);
/// Coordinates of an arbitrary matrix's Hermitian part (no validation).
RealVector hermitian_coords(const Matrix& m);
Matrix hermitian_from_coords(Index dim, const RealVector& coords);

}  // namespace qcap
