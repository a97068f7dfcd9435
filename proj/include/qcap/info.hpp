#pragma once

// Classical and quantum information functionals, in bits.

#include "qcap/quantum.hpp"

#include <vector>

namespace qcap {

/// Dense joint distribution P(x, y): rows index x, columns index y.
class JointDistribution {
 public:
  /// Entries within 1e-12 below zero are clamped to 0; anything more negative
  /// throws. Total mass must be 1 within 1e-9.
  explicit JointDistribution(RealMatrix p);

  const RealMatrix& matrix() const { return p_; }
  RealVector row_marginal() const { return p_.rowwise().sum(); }
  RealVector col_marginal() const { return p_.colwise().sum().transpose(); }

 private:
  RealMatrix p_;
};

/// Transition matrix P(y|x), one row per input.
class ClassicalChannel {
 public:
  explicit ClassicalChannel(RealMatrix transition);

  Index inputs() const { return w_.rows(); }
  Index outputs() const { return w_.cols(); }
  const RealMatrix& transition() const { return w_; }

 private:
  RealMatrix w_;
};

double mutual_information(const JointDistribution& j);
/// The H(Y) - H(Y|X) form; agrees with mutual_information to rounding.
double mutual_information_conditional_form(const JointDistribution& j);

double holevo_chi(const Ensemble& ens);

/// I(X;Y) for one fixed measurement: P(i,j) = p_i q_j w_j^dag s_i w_j.
double accessible_information_given(const Ensemble& ens, const Povm& m);
JointDistribution measurement_joint(const Ensemble& ens, const Povm& m);

/// H_vN((N (x) I)(Phi_rho)) evaluated through an explicit purification.
double joint_output_entropy(const QuantumChannel& ch, const DensityMatrix& rho);

double quantum_mutual_information(const QuantumChannel& ch,
                                  const DensityMatrix& rho);
double coherent_information(const QuantumChannel& ch, const DensityMatrix& rho);

struct LimitedEaValue {
  double value = 0.0;
  double avg_entropy = 0.0;  // sum_i p_i H(rho_i), the entanglement budget used
};

LimitedEaValue limited_ea_objective(const QuantumChannel& ch,
                                    const Ensemble& ens);

struct ArimotoBlahutResult {
  double capacity = 0.0;  // I(X;Y) at `input`
  std::vector<double> input;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  int iterations = 0;
  std::vector<double> lower_bounds;  // per iteration
};

ArimotoBlahutResult arimoto_blahut(const ClassicalChannel& c, double tol = 1e-9,
                                   int max_iterations = 1'000'000);

}  // namespace qcap
