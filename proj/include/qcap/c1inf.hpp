#pragma once

// Holevo (C_{1,inf}) capacity by alternating a fixed-average-state master LP
// over pure signal states, dual pricing of new signals, and an ascent step on
// the average input state.

#include "qcap/lp.hpp"
#include "qcap/quantum.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qcap::c1inf {

struct Options {
  double tol = 1e-7;          // stop when a step improves the value by less
  double pricing_tol = 1e-7;  // columns must have reduced cost below -tol
  int starts = 6;             // random pricing starts per call
  std::uint64_t seed = 1;
  int max_rounds = 200;       // outer (rho) rounds
  int max_pricing_rounds = 60;
  int descent_iterations = 400;
};

struct Problem {
  QuantumChannel channel;
  /// Finite signal set for cq-style channels; pricing is then exact over it
  /// and the average state stays in the signals' convex hull.
  std::optional<std::vector<PureState>> restricted_signals;
  /// Warm start: initial columns and average state.
  std::optional<PureEnsemble> initial_ensemble;
  Options options;
};

enum class Status { Converged, RoundLimit };
const char* to_string(Status s);

enum class StartClass { Random, Support };

struct PricingReport {
  PureState v;
  double reduced_cost = 0.0;  // H(N(vv^dag)) - v^dag tau v
  StartClass start = StartClass::Random;
};

struct DualityCheck {
  double primal = 0.0;  // master objective
  double dual = 0.0;    // Tr(tau rho)
};

struct Result {
  double value = 0.0;
  PureEnsemble ensemble;
  DensityMatrix rho;
  HermitianMatrix tau;
  double dual_gap = 0.0;          // certificate, see c1inf()
  double pricing_residual = 0.0;  // max(0, -min f) over the last pricing pass
  Status status = Status::Converged;
  int rounds = 0;
  std::vector<double> values;             // value after every accepted round
  std::vector<DualityCheck> duality_log;  // every master solve
};

/// min sum_i p_i H(N(v_i v_i^dag))  s.t.  sum_i p_i v_i v_i^dag = rho, p >= 0,
/// expressed as d^2 real rows in Hermitian coordinates.
lp::LinearProgram build_fixed_rho_lp(const QuantumChannel& ch,
                                     const std::vector<PureState>& states,
                                     const DensityMatrix& rho);

/// Dual Hermitian matrix from the master's row duals. Throws if not optimal.
HermitianMatrix dual_tau(const lp::LpSolution& sol, Index dim);

/// f(v) = H(N(vv^dag)) - v^dag tau v and its Euclidean gradient
/// (df = Re<g, dv>, valid off the sphere too).
double reduced_cost(const QuantumChannel& ch, const HermitianMatrix& tau,
                    const Vector& v);
Vector reduced_cost_gradient(const QuantumChannel& ch,
                             const HermitianMatrix& tau, const Vector& v);

/// Distinct local minima of f with f < -tol, from `starts` seeded random
/// points and every support state; sorted by f, ties by amplitudes.
std::vector<PricingReport> pricing_search(const QuantumChannel& ch,
                                          const HermitianMatrix& tau, int starts,
                                          std::uint64_t seed,
                                          const std::vector<PureState>& support,
                                          double tol = 1e-7,
                                          int descent_iterations = 400);

/// All distinct local minima regardless of sign (used for residual reports).
std::vector<PricingReport> pricing_minima(const QuantumChannel& ch,
                                          const HermitianMatrix& tau, int starts,
                                          std::uint64_t seed,
                                          const std::vector<PureState>& support,
                                          int descent_iterations = 400);

/// g(rho) = H(N(rho)) - Tr(rho tau) and its gradient
/// -N^dag(log2 N(rho)) - I/ln2 - tau (the identity term drops out on
/// trace-zero directions).
double rho_objective(const QuantumChannel& ch, const HermitianMatrix& tau,
                     const Matrix& rho);
Matrix rho_objective_gradient(const QuantumChannel& ch,
                              const HermitianMatrix& tau, const Matrix& rho);

/// One ascent step on g: trace-free projected gradient direction, clipped to
/// the PSD cone, step length by 12 rounds of bisection. Never decreases g.
DensityMatrix update_rho(const QuantumChannel& ch, const HermitianMatrix& tau,
                         const DensityMatrix& rho);

Result c1inf(const Problem& problem);

}  // namespace qcap::c1inf
