#pragma once

// Entanglement-assisted capacity, single-letter coherent information, and an
// experimental optimizer for the limited-entanglement formula.

#include "qcap/quantum.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qcap::ea {

/// H(rho) + H(N(rho)) - H(N^c(rho)) via the complementary channel.
double mutual_information(const QuantumChannel& ch, const Matrix& rho);
/// -log2 rho - N^dag(log2 N(rho)) + N^c^dag(log2 N^c(rho)) - I/ln2, so that
/// dI = Tr(G drho). rho must be full rank.
Matrix mutual_information_gradient(const QuantumChannel& ch, const Matrix& rho);

/// H(N(rho)) - H(N^c(rho)).
double coherent_info(const QuantumChannel& ch, const Matrix& rho);
Matrix coherent_info_gradient(const QuantumChannel& ch, const Matrix& rho);

/// Euclidean projection of a Hermitian matrix onto the density matrices.
Matrix project_density(const Matrix& h);

struct Options {
  double tol = 1e-7;  // Frank-Wolfe gap at termination
  int max_iterations = 5000;
  double mixing = 1e-9;  // iterates are (1 - m) rho + m I/d
};

struct CEResult {
  double value = 0.0;
  DensityMatrix rho_star;
  double fw_gap = 0.0;  // value <= C_E <= value + fw_gap
  double gradient_residual = 0.0;  // |P(rho + G) - rho|_F
  int iterations = 0;
  bool converged = false;
  double entanglement_rate = 0.0;  // H(rho_star)
  std::vector<double> values;      // per iteration
};

CEResult c_ea(const QuantumChannel& ch, const Options& opts = {});

struct LocalMaximum {
  double value = 0.0;
  DensityMatrix rho;
  double residual = 0.0;
};

struct CoherentOptions {
  int random_starts = -1;  // per family; -1 means d
  std::uint64_t seed = 1;
  double tol = 1e-8;  // projected-gradient residual
  int max_iterations = 3000;
  double mixing = 1e-9;
};

struct QResult {
  double value = 0.0;
  DensityMatrix rho_star;
  std::vector<LocalMaximum> maxima;  // distinct, best first
};

/// Projected-gradient ascent from I/d, random near-pure and random full-rank
/// starts.
QResult coherent_info_max(const QuantumChannel& ch, const CoherentOptions& opts = {});

struct LimitedOptions {
  double tol = 1e-7;
  int starts = 4;
  std::uint64_t seed = 1;
  int max_rounds = 40;
  /// Feasible warm start; the result never falls below its objective.
  std::optional<Ensemble> warm_start;
};

struct LimitedResult {
  double value = 0.0;
  Ensemble ensemble;
  double avg_entropy = 0.0;
  double multiplier = 0.0;  // price of the entropy budget
  int rounds = 0;
  bool converged = false;
  bool experimental = true;
};

/// Experimental: heuristic column generation over mixed-state ensembles with
/// sum_i p_i H(rho_i) <= B.
LimitedResult limited_ea(const QuantumChannel& ch, double budget,
                         const LimitedOptions& opts = {});

/// Ascending budgets, each warm-started from the previous optimum, so values
/// are non-decreasing.
std::vector<LimitedResult> limited_ea_sweep(const QuantumChannel& ch,
                                            std::vector<double> budgets,
                                            const LimitedOptions& opts = {});

}  // namespace qcap::ea
