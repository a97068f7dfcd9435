#pragma once

// C_{1,1}: product inputs, single-use measurements. Alternates a measurement
// step (LP over rank-one POVM weights with column generation) and an
// ensemble step (C_{1,inf} on the measurement-induced classical channel).

#include "qcap/c1inf.hpp"
#include "qcap/info.hpp"
#include "qcap/lp.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qcap::c11 {

/// c(w) = sum_i p_i a_i log2(a_i / b), a_i = w^dag s_i w, b = w^dag s w,
/// s = sum_i p_i s_i. Zero when b < 1e-14.
double outcome_coefficient(const Ensemble& out_ens, const Vector& w);
/// Euclidean gradient 2 sum_i p_i log2(a_i / b) s_i w (df = Re<g, dw>).
Vector outcome_coefficient_gradient(const Ensemble& out_ens, const Vector& w);

/// maximize sum_j q_j c(w_j)  s.t.  sum_j q_j w_j w_j^dag = I, q >= 0.
lp::LinearProgram measurement_lp(const Ensemble& out_ens,
                                 const std::vector<PureState>& directions);

struct MeasurementPricing {
  std::vector<PureState> directions;  // violation > tol, best first
  std::vector<double> violations;     // c(w) - w^dag lambda w
  double best_violation = 0.0;        // over all local maxima found
};

/// Multistart sphere ascent of c(w) - w^dag lambda w.
MeasurementPricing measurement_pricing(const Ensemble& out_ens,
                                       const HermitianMatrix& lambda, int starts,
                                       std::uint64_t seed, double tol = 1e-7);

struct MeasurementOptions {
  double tol = 1e-7;
  int starts = 6;
  std::uint64_t seed = 1;
  int max_rounds = 100;
  /// Extra seed directions (e.g. the previous POVM); a computational basis is
  /// always included.
  std::vector<PureState> seed_directions;
};

struct MeasurementResult {
  Povm povm;
  double value = 0.0;  // accessible_information_given(out_ens, povm)
  double pricing_residual = 0.0;
  int rounds = 0;
  bool converged = false;
};

MeasurementResult optimize_measurement(const Ensemble& out_ens,
                                       const MeasurementOptions& opts = {});

/// Weights restoring exact completeness for fixed directions: nonnegative
/// least squares followed by a congruence polish S^{-1/2} E_j S^{-1/2}.
Povm refit_povm(const std::vector<PureState>& directions,
                const std::vector<double>& weights);

/// v -> sum_j (q_j w_j^dag N(vv^dag) w_j) |j><j|, Kraus B_jk = |j> sqrt(q_j) w_j^dag A_k.
QuantumChannel induced_classical_channel(const QuantumChannel& ch, const Povm& m);

struct Options {
  int restarts = 8;
  std::uint64_t seed = 1;
  double tol = 1e-7;
  int max_alternations = 100;
  int starts = 6;
};

enum class Status { Converged, AlternationLimit };
const char* to_string(Status s);

struct Restart {
  double value = 0.0;
  std::vector<double> trace;  // value after every alternation
  int alternations = 0;
  Status status = Status::Converged;
  double holevo_gap_min = 0.0;  // min over iterates of chi - I (>= 0)
};

struct Result {
  double value = 0.0;
  Ensemble ensemble;  // output-side states are N(v_i v_i^dag)
  PureEnsemble inputs;
  Povm povm;
  int restarts_used = 0;
  std::size_t best_restart = 0;
  std::vector<Restart> restarts;
  double pricing_residual = 0.0;  // last measurement step of the best restart
  Status status = Status::Converged;
};

Result c11(const QuantumChannel& ch,
           const std::optional<std::vector<PureState>>& restricted_signals,
           const Options& opts = {});

}  // namespace qcap::c11
