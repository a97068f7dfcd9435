#include "qcap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcap::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

void LinearProgram::add_column(const RealVector& column, double cost) {
  if (A.rows() == 0 && A.cols() == 0) A.resize(column.size(), 0);
  if (column.size() != A.rows()) {
    throw DimensionError("column length does not match constraint count");
  }
  A.conservativeResize(Eigen::NoChange, A.cols() + 1);
  A.col(A.cols() - 1) = column;
  c.conservativeResize(c.size() + 1);
  c(c.size() - 1) = cost;
}

namespace {

// Simplex working state in sign-normalized minimization form. Internal
// variable indices: [0, n) structural, [n, n + m) artificial.
class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opts)
      : opts_(opts), m_(lp.rows()), n_(lp.cols()) {
    sign_ = RealVector::Ones(m_);
    for (Index r = 0; r < m_; ++r) {
      if (lp.b(r) < 0.0) sign_(r) = -1.0;
    }
    a_ = sign_.asDiagonal() * lp.A;
    b_ = sign_.asDiagonal() * lp.b;
    cost_ = lp.sense == Sense::Maximize ? RealVector(-lp.c) : lp.c;
  }

  LpSolution run(const Basis* warm) {
    bool need_phase1 = true;
    if (warm != nullptr && try_warm(*warm)) need_phase1 = false;

    if (need_phase1) {
      basis_.resize(static_cast<std::size_t>(m_));
      for (Index r = 0; r < m_; ++r) basis_[r] = n_ + r;
      const Status s1 = iterate(/*phase1=*/true);
      if (s1 == Status::IterationLimit) return finish(s1);
      const double infeas = artificial_sum();
      if (infeas > opts_.feasibility_tol * (1.0 + b_.lpNorm<Eigen::Infinity>())) {
        return finish(Status::Infeasible);
      }
      drive_out_artificials();
    }
    return finish(iterate(/*phase1=*/false));
  }

 private:
  bool is_artificial(Index j) const { return j >= n_; }

  RealVector column(Index j) const {
    if (!is_artificial(j)) return a_.col(j);
    RealVector e = RealVector::Zero(m_);
    e(j - n_) = 1.0;
    return e;
  }

  double cost(Index j, bool phase1) const {
    if (phase1) return is_artificial(j) ? 1.0 : 0.0;
    return is_artificial(j) ? 0.0 : cost_(j);
  }

  bool factorize() {
    RealMatrix bmat(m_, m_);
    for (Index i = 0; i < m_; ++i) bmat.col(i) = column(basis_[i]);
    lu_.compute(bmat);
    return lu_.isInvertible();
  }

  bool try_warm(const Basis& warm) {
    if (static_cast<Index>(warm.size()) != m_) return false;
    basis_.clear();
    for (long v : warm) {
      const Index j = v >= 0 ? static_cast<Index>(v) : n_ + (-v - 1);
      if (v >= 0 && j >= n_) return false;
      if (v < 0 && j >= n_ + m_) return false;
      basis_.push_back(j);
    }
    if (!factorize()) return false;
    const RealVector xb = lu_.solve(b_);
    for (Index i = 0; i < m_; ++i) {
      if (xb(i) < -opts_.feasibility_tol) return false;
      if (is_artificial(basis_[i]) && std::abs(xb(i)) > opts_.feasibility_tol) {
        return false;
      }
    }
    return true;
  }

  double artificial_sum() {
    factorize();
    const RealVector xb = lu_.solve(b_);
    double s = 0.0;
    for (Index i = 0; i < m_; ++i) {
      if (is_artificial(basis_[i])) s += std::max(0.0, xb(i));
    }
    return s;
  }

  // Pivot zero-level artificials out of the basis where a structural column
  // can replace them; rows where none can are linearly dependent and keep
  // their artificial locked at zero.
  void drive_out_artificials() {
    for (Index i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[i])) continue;
      factorize();
      RealVector ei = RealVector::Zero(m_);
      ei(i) = 1.0;
      const RealVector row = lu_.transpose().solve(ei);
      Index best = -1;
      double best_abs = opts_.pivot_tol;
      for (Index j = 0; j < n_; ++j) {
        if (in_basis(j)) continue;
        const double v = std::abs(row.dot(a_.col(j)));
        if (v > best_abs) {
          best_abs = v;
          best = j;
        }
      }
      if (best >= 0) basis_[i] = best;
    }
  }

  bool in_basis(Index j) const {
    return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
  }

  Status iterate(bool phase1) {
    const long degenerate_limit =
        static_cast<long>(opts_.bland_factor) * static_cast<long>(m_ + n_);
    long degenerate_run = 0;
    std::vector<char> basic(static_cast<std::size_t>(n_ + m_), 0);

    while (true) {
      if (iterations_ >= opts_.max_iterations) return Status::IterationLimit;
      if (!factorize()) return Status::IterationLimit;
      const RealVector xb = lu_.solve(b_);
      RealVector cb(m_);
      for (Index i = 0; i < m_; ++i) cb(i) = cost(basis_[i], phase1);
      const RealVector y = lu_.transpose().solve(cb);

      std::fill(basic.begin(), basic.end(), 0);
      for (Index j : basis_) basic[j] = 1;

      // Artificials never re-enter once they left the basis.
      Index entering = -1;
      double best = -opts_.optimality_tol;
      for (Index j = 0; j < n_; ++j) {
        if (basic[j]) continue;
        const double d = cost(j, phase1) - y.dot(a_.col(j));
        if (bland_) {
          if (d < -opts_.optimality_tol) {
            entering = j;
            break;
          }
        } else if (d < best) {
          best = d;
          entering = j;
        }
      }
      if (entering < 0) return Status::Optimal;

      const RealVector u = lu_.solve(a_.col(entering));
      Index leave = -1;
      double theta = std::numeric_limits<double>::infinity();
      double leave_mag = 0.0;
      for (Index i = 0; i < m_; ++i) {
        double ratio;
        if (!phase1 && is_artificial(basis_[i])) {
          if (std::abs(u(i)) <= opts_.pivot_tol) continue;
          ratio = 0.0;
        } else {
          if (u(i) <= opts_.pivot_tol) continue;
          ratio = std::max(0.0, xb(i)) / u(i);
        }
        const double mag = std::abs(u(i));
        bool take = false;
        if (ratio < theta - 1e-12) {
          take = true;
        } else if (ratio <= theta + 1e-12) {
          take = bland_ ? basis_[i] < basis_[leave] : mag > leave_mag;
        }
        if (take) {
          theta = std::min(theta, ratio);
          leave = i;
          leave_mag = mag;
        }
      }
      if (leave < 0) return Status::Unbounded;

      basis_[leave] = entering;
      ++iterations_;
      if (theta <= 1e-12) {
        if (++degenerate_run >= degenerate_limit && !bland_) {
          bland_ = true;
          used_bland_ = true;
        }
      } else {
        degenerate_run = 0;
      }
    }
  }

  LpSolution finish(Status s) {
    LpSolution out;
    out.status = s;
    out.iterations = iterations_;
    out.used_bland = used_bland_;
    out.x = RealVector::Zero(n_);
    out.y = RealVector::Zero(m_);
    out.basis.clear();
    for (Index j : basis_) {
      out.basis.push_back(is_artificial(j) ? -static_cast<long>(j - n_) - 1
                                           : static_cast<long>(j));
    }
    if (s != Status::Optimal) return out;
    factorize();
    const RealVector xb = lu_.solve(b_);
    RealVector cb(m_);
    for (Index i = 0; i < m_; ++i) {
      cb(i) = cost(basis_[i], false);
      if (!is_artificial(basis_[i])) out.x(basis_[i]) = std::max(0.0, xb(i));
    }
    RealVector y = lu_.transpose().solve(cb);
    y = sign_.asDiagonal() * y;
    out.y = y;
    return out;
  }

  SimplexOptions opts_;
  Index m_;
  Index n_;
  RealVector sign_;
  RealMatrix a_;
  RealVector b_;
  RealVector cost_;
  std::vector<Index> basis_;
  Eigen::FullPivLU<RealMatrix> lu_;
  long iterations_ = 0;
  bool bland_ = false;
  bool used_bland_ = false;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts,
                    const Basis* warm) {
  if (lp.A.cols() != lp.c.size() || lp.A.rows() != lp.b.size()) {
    throw DimensionError("linear program: inconsistent dimensions");
  }
  if (!lp.A.allFinite() || !lp.b.allFinite() || !lp.c.allFinite()) {
    throw Error("linear program: non-finite data");
  }
  if (lp.rows() == 0) throw DimensionError("linear program has no rows");

  Simplex simplex(lp, opts);
  LpSolution sol = simplex.run(warm);
  if (sol.optimal()) {
    sol.objective = lp.c.dot(sol.x);
    if (lp.sense == Sense::Maximize) sol.y = -sol.y;
  }
  return sol;
}

double improving_reduced_cost(const LinearProgram& lp, const LpSolution& sol,
                              const RealVector& column, double cost) {
  const double d = cost - sol.y.dot(column);
  return lp.sense == Sense::Minimize ? d : -d;
}

bool add_unique_column(LinearProgram& lp, const RealVector& column, double cost,
                       double dedup_tol) {
  for (Index j = 0; j < lp.cols(); ++j) {
    if ((lp.A.col(j) - column).lpNorm<Eigen::Infinity>() <= dedup_tol) {
      return false;
    }
  }
  lp.add_column(column, cost);
  return true;
}

ColumnGenerationResult column_generation(LinearProgram master,
                                         std::vector<std::size_t> tags,
                                         const PricingFn& pricing,
                                         const ColumnGenerationOptions& opts) {
  ColumnGenerationResult res;
  if (tags.size() != static_cast<std::size_t>(master.cols())) {
    tags.resize(static_cast<std::size_t>(master.cols()), 0);
  }
  res.solution = solve_lp(master, opts.simplex);
  if (!res.solution.optimal()) {
    throw Error(std::string("column generation: initial master is ") +
                to_string(res.solution.status));
  }
  res.objectives.push_back(res.solution.objective);

  while (true) {
    const PricingOutcome outcome = pricing(res.solution, tags);
    int added = 0;
    for (const auto& col : outcome.columns) {
      const double rc =
          improving_reduced_cost(master, res.solution, col.column, col.cost);
      if (rc >= -opts.tol) continue;
      if (add_unique_column(master, col.column, col.cost, opts.dedup_tol)) {
        tags.push_back(col.tag);
        ++added;
      }
    }
    if (added == 0) {
      res.converged = true;
      break;
    }
    const Basis warm = res.solution.basis;
    LpSolution next = solve_lp(master, opts.simplex, &warm);
    if (!next.optimal()) {
      throw Error(std::string("column generation: master became ") +
                  to_string(next.status));
    }
    res.solution = std::move(next);
    ++res.rounds;
    res.objectives.push_back(res.solution.objective);
    if (res.rounds >= opts.max_rounds) break;
  }
  res.master = std::move(master);
  res.tags = std::move(tags);
  return res;
}

RealVector nnls(const RealMatrix& A, const RealVector& b, double tol,
                int max_iterations) {
  if (A.rows() != b.size()) throw DimensionError("nnls: inconsistent dimensions");
  const Index n = A.cols();
  RealVector x = RealVector::Zero(n);
  std::vector<char> passive(static_cast<std::size_t>(n), 0);

  auto solve_passive = [&]() {
    std::vector<Index> idx;
    for (Index j = 0; j < n; ++j) {
      if (passive[j]) idx.push_back(j);
    }
    RealMatrix ap(A.rows(), static_cast<Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Index>(k)) = A.col(idx[k]);
    const RealVector sp = ap.colPivHouseholderQr().solve(b);
    RealVector s = RealVector::Zero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Index>(k));
    return s;
  };

  for (int it = 0; it < max_iterations; ++it) {
    const RealVector w = A.transpose() * (b - A * x);
    Index enter = -1;
    double best = tol;
    for (Index j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    passive[enter] = 1;
    while (true) {
      if (std::none_of(passive.begin(), passive.end(), [](char c) { return c; })) break;
      const RealVector s = solve_passive();
      double alpha = 1.0;
      bool feasible = true;
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && s(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (feasible) {
        x = s;
        break;
      }
      x += alpha * (s - x);
      for (Index j = 0; j < n; ++j) {
        if (passive[j] && x(j) <= tol) {
          passive[j] = 0;
          x(j) = 0.0;
        }
      }
    }
    // Rank-deficient direction: the entering column could not be kept.
    if (!passive[enter]) break;
  }
  return x;
}

}  // namespace qcap::lp
