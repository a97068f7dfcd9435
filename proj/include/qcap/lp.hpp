#pragma once

// Dense equality-form LP solver (revised simplex, two phases) with dual
// extraction, and a generic column-generation driver on top of it.

#include "qcap/linalg.hpp"

#include <functional>
#include <vector>

namespace qcap::lp {

enum class Sense { Minimize, Maximize };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

/// optimize c.x  subject to  A x = b, x >= 0.
struct LinearProgram {
  RealVector c;
  RealMatrix A;
  RealVector b;
  Sense sense = Sense::Minimize;

  Index rows() const { return A.rows(); }
  Index cols() const { return A.cols(); }
  void add_column(const RealVector& column, double cost);
};

struct SimplexOptions {
  double pivot_tol = 1e-10;
  double feasibility_tol = 1e-8;
  double optimality_tol = 1e-10;
  long max_iterations = 1'000'000;
  // Switch from largest-coefficient pricing to Bland's rule after
  // bland_factor * (m + n) consecutive degenerate pivots.
  int bland_factor = 5;
};

/// One entry per row: >= 0 is a structural column index, a negative value v
/// marks the artificial variable of row (-v - 1).
using Basis = std::vector<long>;

struct LpSolution {
  Status status = Status::Infeasible;
  RealVector x;
  RealVector y;  // duals: c_j - y.A_j >= 0 (min) or <= 0 (max) at optimum
  double objective = 0.0;
  Basis basis;
  long iterations = 0;
  bool used_bland = false;

  bool optimal() const { return status == Status::Optimal; }
};

/// Deterministic for identical input. `warm` is tried first when given and
/// primal feasible; otherwise the solve starts from the artificial basis.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {},
                    const Basis* warm = nullptr);

/// Reduced cost of `column` under duals y, oriented so that negative means
/// improving for either sense.
double improving_reduced_cost(const LinearProgram& lp, const LpSolution& sol,
                              const RealVector& column, double cost);

struct GeneratedColumn {
  RealVector column;
  double cost = 0.0;
  std::size_t tag = 0;
};

struct PricingOutcome {
  std::vector<GeneratedColumn> columns;
  double best_reduced_cost = 0.0;
};

/// Receives the current master solution and the tag of every master column.
using PricingFn = std::function<PricingOutcome(const LpSolution&,
                                               const std::vector<std::size_t>&)>;

struct ColumnGenerationOptions {
  double tol = 1e-7;
  int max_rounds = 200;
  double dedup_tol = 1e-9;
  SimplexOptions simplex;
};

struct ColumnGenerationResult {
  LpSolution solution;
  LinearProgram master;
  std::vector<std::size_t> tags;  // one per master column
  int rounds = 0;
  bool converged = false;
  std::vector<double> objectives;  // master objective after every solve
};

/// Appends a column unless one within dedup_tol (infinity norm) already
/// exists. Returns whether it was added.
bool add_unique_column(LinearProgram& lp, const RealVector& column, double cost,
                       double dedup_tol);

/// Repeats {solve master, price} until pricing offers no column with
/// improving reduced cost below -tol, or max_rounds re-solves happened.
/// Throws Error when the initial master is not optimal.
ColumnGenerationResult column_generation(LinearProgram master,
                                         std::vector<std::size_t> tags,
                                         const PricingFn& pricing,
                                         const ColumnGenerationOptions& opts = {});

/// min ||A x - b||_2 subject to x >= 0 (Lawson-Hanson active set).
RealVector nnls(const RealMatrix& A, const RealVector& b, double tol = 1e-12,
                int max_iterations = 1000);

}  // namespace qcap::lp
