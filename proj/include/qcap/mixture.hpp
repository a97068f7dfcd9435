#pragma once

// Concave ascent of F(p) = H(sum_i p_i S_i) - sum_i p_i c_i over the
// probability simplex, for fixed output states S_i and costs c_i. Shared by
// the ensemble masters.

#include "qcap/linalg.hpp"

#include <vector>

namespace qcap {

class MixtureObjective {
 public:
  MixtureObjective(std::vector<Matrix> outputs, std::vector<double> costs);

  Index size() const { return static_cast<Index>(outputs_.size()); }
  Matrix average(const RealVector& p) const;
  double value(const RealVector& p) const;
  /// -Tr(S_i log2 S(p)) - c_i: the gradient up to a common constant.
  RealVector scores(const RealVector& p) const;
  /// max_i score_i - sum_i p_i score_i (Frank-Wolfe gap; >= optimum - value).
  double gap(const RealVector& p) const;

 private:
  std::vector<Matrix> outputs_;
  std::vector<double> costs_;
};

/// Linear side constraint a . p <= bound.
struct Budget {
  RealVector a;
  double bound = 0.0;
};

RealVector project_simplex(const RealVector& y);
/// Euclidean projection onto {p in simplex, a . p <= bound}; the set must be
/// non-empty.
RealVector project_budget(const RealVector& y, const Budget& budget);
/// argmax of g . q over the simplex (or the budget polytope).
RealVector linear_oracle(const RealVector& g, const Budget* budget = nullptr);

/// Frank-Wolfe and projected-gradient candidates with exact line search;
/// stops when the gap is below `tol` or no candidate improves. Never
/// decreases the value. A feasible start stays feasible.
RealVector maximize_mixture(const MixtureObjective& f, RealVector p, double tol,
                            int max_iterations = 2000,
                            const Budget* budget = nullptr);

}  // namespace qcap
