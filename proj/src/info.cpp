#include "qcap/info.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace qcap {

JointDistribution::JointDistribution(RealMatrix p) : p_(std::move(p)) {
  if (p_.size() == 0) throw DimensionError("empty joint distribution");
  for (Index i = 0; i < p_.rows(); ++i) {
    for (Index j = 0; j < p_.cols(); ++j) {
      double& x = p_(i, j);
      if (x < 0.0) {
        if (x < -1e-12) throw InvariantError("negative joint probability", -x);
        x = 0.0;
      }
    }
  }
  const double defect = std::abs(p_.sum() - 1.0);
  if (defect > 1e-9) {
    throw InvariantError("joint distribution does not sum to 1", defect);
  }
}

ClassicalChannel::ClassicalChannel(RealMatrix transition)
    : w_(std::move(transition)) {
  if (w_.size() == 0) throw DimensionError("empty classical channel");
  for (Index i = 0; i < w_.rows(); ++i) {
    if ((w_.row(i).array() < 0.0).any()) {
      throw InvariantError("negative transition probability",
                           -w_.row(i).minCoeff());
    }
    const double defect = std::abs(w_.row(i).sum() - 1.0);
    if (defect > 1e-10) {
      throw InvariantError("transition row does not sum to 1", defect);
    }
  }
}

namespace {

double entropy_of(const RealVector& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i) h += xlog2x_neg(p(i));
  return h;
}

double entropy_of(const RealMatrix& p) {
  double h = 0.0;
  for (Index i = 0; i < p.size(); ++i) h += xlog2x_neg(p.data()[i]);
  return h;
}

}  // namespace

double mutual_information(const JointDistribution& j) {
  const double mi = entropy_of(j.row_marginal()) +
                    entropy_of(j.col_marginal()) - entropy_of(j.matrix());
  assert(std::abs(mi - mutual_information_conditional_form(j)) < 1e-9);
  return std::max(0.0, mi);
}

double mutual_information_conditional_form(const JointDistribution& j) {
  const RealMatrix& p = j.matrix();
  const RealVector px = j.row_marginal();
  double h_y_given_x = 0.0;
  for (Index x = 0; x < p.rows(); ++x) {
    if (px(x) <= 0.0) continue;
    h_y_given_x += px(x) * entropy_of(RealVector(p.row(x).transpose() / px(x)));
  }
  return entropy_of(j.col_marginal()) - h_y_given_x;
}

double holevo_chi(const Ensemble& ens) {
  double avg_entropy = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    avg_entropy += ens.probabilities()[i] * von_neumann_entropy(ens.states()[i]);
  }
  return std::max(0.0, entropy_bits(ens.average()) - avg_entropy);
}

JointDistribution measurement_joint(const Ensemble& ens, const Povm& m) {
  if (ens.dim() != m.dim()) {
    throw DimensionError("ensemble and POVM dimensions differ");
  }
  RealMatrix joint(static_cast<Index>(ens.size()), static_cast<Index>(m.size()));
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const Matrix& s = ens.states()[i].matrix();
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Vector& w = m.directions()[k].amplitudes();
      joint(i, k) = ens.probabilities()[i] * m.weights()[k] *
                    std::max(0.0, w.dot(s * w).real());
    }
  }
  // Remove rounding drift from completeness before validation.
  joint /= joint.sum();
  return JointDistribution(std::move(joint));
}

double accessible_information_given(const Ensemble& ens, const Povm& m) {
  return mutual_information(measurement_joint(ens, m));
}

double joint_output_entropy(const QuantumChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) {
    throw DimensionError("state dimension does not match channel input");
  }
  const PureState phi = purify(rho);
  const Index r = phi.dim() / rho.dim();
  const QuantumChannel extended = tensor(ch, identity_channel(r));
  return entropy_bits(apply_channel(extended, phi.projector()));
}

double coherent_information(const QuantumChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.dim_in()) {
    throw DimensionError("state dimension does not match channel input");
  }
  return entropy_bits(apply_channel(ch, rho.matrix())) -
         joint_output_entropy(ch, rho);
}

double quantum_mutual_information(const QuantumChannel& ch,
                                  const DensityMatrix& rho) {
  return von_neumann_entropy(rho) + coherent_information(ch, rho);
}

LimitedEaValue limited_ea_objective(const QuantumChannel& ch,
                                    const Ensemble& ens) {
  if (ens.dim() != ch.dim_in()) {
    throw DimensionError("ensemble dimension does not match channel input");
  }
  LimitedEaValue out;
  double joint = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double p = ens.probabilities()[i];
    out.avg_entropy += p * von_neumann_entropy(ens.states()[i]);
    joint += p * joint_output_entropy(ch, ens.states()[i]);
  }
  out.value = out.avg_entropy + entropy_bits(apply_channel(ch, ens.average())) -
              joint;
  return out;
}

ArimotoBlahutResult arimoto_blahut(const ClassicalChannel& c, double tol,
                                   int max_iterations) {
  if (!(tol > 0.0)) throw Error("arimoto_blahut: tolerance must be positive");
  const RealMatrix& w = c.transition();
  const Index nx = w.rows();
  const Index ny = w.cols();
  RealVector p = RealVector::Constant(nx, 1.0 / static_cast<double>(nx));
  ArimotoBlahutResult res;

  // D(W_x || q) in bits for every input.
  auto divergences = [&](const RealVector& input) {
    const RealVector q = w.transpose() * input;
    RealVector d = RealVector::Zero(nx);
    for (Index x = 0; x < nx; ++x) {
      for (Index y = 0; y < ny; ++y) {
        if (w(x, y) > 0.0) d(x) += w(x, y) * std::log2(w(x, y) / q(y));
      }
    }
    return d;
  };

  for (int it = 1; it <= max_iterations; ++it) {
    const RealVector d = divergences(p);
    RealVector scaled(nx);
    for (Index x = 0; x < nx; ++x) scaled(x) = p(x) * std::exp2(d(x));
    const double total = scaled.sum();
    res.lower_bound = std::log2(total);
    res.upper_bound = d.maxCoeff();
    res.lower_bounds.push_back(res.lower_bound);
    res.iterations = it;
    p = scaled / total;
    if (res.upper_bound - res.lower_bound < tol) break;
  }

  const RealVector d = divergences(p);
  res.capacity = std::max(0.0, p.dot(d));
  res.input.assign(p.data(), p.data() + nx);
  return res;
}

}  // namespace qcap
