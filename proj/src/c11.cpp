#include "qcap/c11.hpp"

#include "qcap/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qcap::c11 {

namespace {

constexpr double kOutcomeFloor = 1e-14;

std::vector<PureState> computational_basis(Index d) {
  std::vector<PureState> out;
  for (Index k = 0; k < d; ++k) out.push_back(PureState::basis(d, k));
  return out;
}

void add_direction(std::vector<PureState>& dirs, const PureState& w) {
  for (const auto& u : dirs) {
    if (same_ray(u.amplitudes(), w.amplitudes(), 1e-14)) return;
  }
  dirs.push_back(w);
}

Ensemble output_ensemble(const QuantumChannel& ch, const PureEnsemble& in) {
  std::vector<DensityMatrix> outs;
  for (const auto& s : in.states()) {
    outs.push_back(DensityMatrix(apply_channel(ch, s.projector())));
  }
  return Ensemble(in.probabilities(), std::move(outs));
}

PureEnsemble random_inputs(Index d, const std::optional<std::vector<PureState>>& signals,
                           Rng& rng, bool uniform) {
  if (signals) {
    const std::size_t n = signals->size();
    std::vector<double> p = uniform ? std::vector<double>(n, 1.0 / n)
                                    : random_dirichlet(n, rng);
    return PureEnsemble(std::move(p), *signals);
  }
  if (uniform) {
    return PureEnsemble(std::vector<double>(d, 1.0 / d), computational_basis(d));
  }
  std::vector<PureState> states;
  for (Index k = 0; k <= d; ++k) states.emplace_back(random_unit_vector(d, rng));
  std::vector<double> p = random_dirichlet(states.size(), rng);
  return PureEnsemble(std::move(p), std::move(states));
}

}  // namespace

const char* to_string(Status s) {
  return s == Status::Converged ? "converged" : "alternation-limit";
}

double outcome_coefficient(const Ensemble& out_ens, const Vector& w) {
  const auto& p = out_ens.probabilities();
  std::vector<double> a(p.size());
  double b = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    a[i] = std::max(0.0, w.dot(out_ens.states()[i].matrix() * w).real());
    b += p[i] * a[i];
  }
  if (b < kOutcomeFloor) return 0.0;
  double c = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (a[i] > 0.0) c += p[i] * a[i] * std::log2(a[i] / b);
  }
  return c;
}

Vector outcome_coefficient_gradient(const Ensemble& out_ens, const Vector& w) {
  const auto& p = out_ens.probabilities();
  std::vector<double> a(p.size());
  double b = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    a[i] = std::max(0.0, w.dot(out_ens.states()[i].matrix() * w).real());
    b += p[i] * a[i];
  }
  Vector g = Vector::Zero(w.size());
  if (b < kOutcomeFloor) return g;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (a[i] > 0.0) {
      g += (2.0 * p[i] * std::log2(a[i] / b)) * (out_ens.states()[i].matrix() * w);
    }
  }
  return g;
}

lp::LinearProgram measurement_lp(const Ensemble& out_ens,
                                 const std::vector<PureState>& directions) {
  const Index d = out_ens.dim();
  lp::LinearProgram lpm;
  lpm.sense = lp::Sense::Maximize;
  lpm.b = hermitian_coords(Matrix::Identity(d, d));
  lpm.A.resize(d * d, 0);
  for (const auto& w : directions) {
    if (w.dim() != d) throw DimensionError("direction dimension differs from ensemble");
    lpm.add_column(hermitian_coords(w.projector()),
                   outcome_coefficient(out_ens, w.amplitudes()));
  }
  return lpm;
}

namespace {

MeasurementPricing price(const Ensemble& out_ens, const HermitianMatrix& lambda,
                         int starts, std::uint64_t seed, double tol,
                         const std::vector<PureState>& support) {
  const Index d = out_ens.dim();
  if (lambda.dim() != d) throw DimensionError("lambda dimension differs from ensemble");
  if (starts < 1) throw Error("pricing needs at least one start");
  SphereFunction f = [&](const Vector& w) {
    const double v = outcome_coefficient(out_ens, w) - w.dot(lambda.matrix() * w).real();
    const Vector g = outcome_coefficient_gradient(out_ens, w) - 2.0 * (lambda.matrix() * w);
    return ValueGradient{-v, -g};
  };
  std::vector<Vector> inits;
  Rng rng(seed);
  for (int k = 0; k < starts; ++k) inits.push_back(random_unit_vector(d, rng));
  for (const auto& s : support) inits.push_back(s.amplitudes());

  struct Found {
    Vector w;
    double violation;
  };
  std::vector<Found> found;
  for (const auto& w0 : inits) {
    const SphereMinimum m = sphere_minimize(f, w0);
    const Vector w = fix_phase(m.v / m.v.norm());
    const double viol = -f(w).value;
    bool dup = false;
    for (auto& x : found) {
      if (same_ray(x.w, w, 1e-10)) {
        if (viol > x.violation) x = {w, viol};
        dup = true;
        break;
      }
    }
    if (!dup) found.push_back({w, viol});
  }
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    if (a.violation != b.violation) return a.violation > b.violation;
    return lex_less(a.w, b.w);
  });
  MeasurementPricing out;
  out.best_violation = found.empty() ? 0.0 : found.front().violation;
  for (const auto& x : found) {
    if (x.violation > tol) {
      out.directions.push_back(PureState::normalized(x.w));
      out.violations.push_back(x.violation);
    }
  }
  return out;
}

}  // namespace

MeasurementPricing measurement_pricing(const Ensemble& out_ens,
                                       const HermitianMatrix& lambda, int starts,
                                       std::uint64_t seed, double tol) {
  return price(out_ens, lambda, starts, seed, tol, {});
}

Povm refit_povm(const std::vector<PureState>& directions,
                const std::vector<double>& weights) {
  if (directions.empty() || directions.size() != weights.size()) {
    throw DimensionError("refit needs matching non-empty directions and weights");
  }
  const Index d = directions.front().dim();
  const Index n = static_cast<Index>(directions.size());
  RealMatrix a(d * d, n);
  for (Index j = 0; j < n; ++j) a.col(j) = hermitian_coords(directions[j].projector());
  const RealVector target = hermitian_coords(Matrix::Identity(d, d));
  RealVector q = lp::nnls(a, target);
  // Keep the LP weights when least squares cannot improve them.
  RealVector q0(n);
  for (Index j = 0; j < n; ++j) q0(j) = std::max(0.0, weights[j]);
  if ((a * q0 - target).norm() <= (a * q - target).norm()) q = q0;

  Matrix s = Matrix::Zero(d, d);
  for (Index j = 0; j < n; ++j) s += q(j) * directions[j].projector();
  const Matrix t = pinv_sqrt_psd(s, 1e-12);
  std::vector<double> qs;
  std::vector<PureState> ws;
  for (Index j = 0; j < n; ++j) {
    if (q(j) <= 0.0) continue;
    const Vector w = t * directions[j].amplitudes();
    const double nrm2 = w.squaredNorm();
    if (nrm2 <= 0.0) continue;
    qs.push_back(q(j) * nrm2);
    ws.push_back(PureState::normalized(w));
  }
  return Povm(std::move(qs), std::move(ws));
}

MeasurementResult optimize_measurement(const Ensemble& out_ens,
                                       const MeasurementOptions& opts) {
  const Index d = out_ens.dim();
  std::vector<PureState> dirs = computational_basis(d);
  for (const auto& w : opts.seed_directions) add_direction(dirs, w);
  {
    const HermitianEigen e = eigh(out_ens.average());
    for (Index k = 0; k < d; ++k) {
      add_direction(dirs, PureState::normalized(fix_phase(e.vectors.col(k))));
    }
  }

  std::vector<std::size_t> tags(dirs.size());
  for (std::size_t j = 0; j < tags.size(); ++j) tags[j] = j;
  std::uint64_t calls = 0;
  double last_best = 0.0;

  auto pricing = [&](const lp::LpSolution& sol, const std::vector<std::size_t>& col_tags) {
    const HermitianMatrix lambda(hermitian_from_coords(d, sol.y));
    std::vector<PureState> support;
    for (Index j = 0; j < sol.x.size(); ++j) {
      if (sol.x(j) > 1e-12) support.push_back(dirs[col_tags[static_cast<std::size_t>(j)]]);
    }
    const MeasurementPricing mp = price(out_ens, lambda, opts.starts,
                                        mix_seed(opts.seed, ++calls), opts.tol, support);
    last_best = mp.best_violation;
    lp::PricingOutcome out;
    out.best_reduced_cost = -mp.best_violation;
    for (const auto& w : mp.directions) {
      dirs.push_back(w);
      out.columns.push_back({hermitian_coords(w.projector()),
                             outcome_coefficient(out_ens, w.amplitudes()),
                             dirs.size() - 1});
    }
    return out;
  };

  lp::ColumnGenerationOptions cg;
  cg.tol = opts.tol;
  cg.max_rounds = opts.max_rounds;
  const lp::ColumnGenerationResult res =
      lp::column_generation(measurement_lp(out_ens, dirs), tags, pricing, cg);

  std::vector<PureState> sup;
  std::vector<double> q;
  for (Index j = 0; j < res.solution.x.size(); ++j) {
    if (res.solution.x(j) > 1e-12) {
      sup.push_back(dirs[res.tags[static_cast<std::size_t>(j)]]);
      q.push_back(res.solution.x(j));
    }
  }
  Povm povm = refit_povm(sup, q);
  const double value = accessible_information_given(out_ens, povm);
  return MeasurementResult{.povm = std::move(povm),
                           .value = value,
                           .pricing_residual = std::max(0.0, last_best),
                           .rounds = res.rounds,
                           .converged = res.converged};
}

QuantumChannel induced_classical_channel(const QuantumChannel& ch, const Povm& m) {
  if (m.dim() != ch.dim_out()) throw DimensionError("POVM dimension differs from channel output");
  const Index n = static_cast<Index>(m.size());
  std::vector<Matrix> kraus;
  for (Index j = 0; j < n; ++j) {
    const Matrix row = std::sqrt(m.weights()[j]) * m.directions()[j].amplitudes().adjoint();
    for (const auto& a : ch.kraus()) {
      Matrix b = Matrix::Zero(n, ch.dim_in());
      b.row(j) = row * a;
      kraus.push_back(std::move(b));
    }
  }
  return validate_channel(std::move(kraus));
}

Result c11(const QuantumChannel& ch,
           const std::optional<std::vector<PureState>>& restricted_signals,
           const Options& opts) {
  if (opts.restarts < 1) throw Error("c11 needs at least one restart");
  const Index d = ch.dim_in();
  if (restricted_signals) {
    if (restricted_signals->empty()) throw Error("restricted signal set is empty");
    for (const auto& s : *restricted_signals) {
      if (s.dim() != d) throw DimensionError("signal dimension differs from channel input");
    }
  }

  struct Best {
    double value = -1.0;
    std::optional<PureEnsemble> inputs;
    std::optional<Povm> povm;
    double residual = 0.0;
  };
  Best best;
  std::vector<Restart> restarts;
  std::size_t best_index = 0;

  for (int r = 0; r < opts.restarts; ++r) {
    Rng rng(mix_seed(opts.seed, static_cast<std::uint64_t>(r)));
    PureEnsemble inputs = random_inputs(d, restricted_signals, rng, r == 0);
    std::optional<Povm> povm;
    Restart rs;
    rs.status = Status::AlternationLimit;
    rs.holevo_gap_min = std::numeric_limits<double>::infinity();
    double value = -1.0;
    double residual = 0.0;

    for (int alt = 0; alt < opts.max_alternations; ++alt) {
      const Ensemble out = output_ensemble(ch, inputs);
      MeasurementOptions mo;
      mo.tol = opts.tol;
      mo.starts = opts.starts;
      mo.seed = mix_seed(opts.seed, 1000003ULL * (r + 1) + alt);
      if (povm) mo.seed_directions = povm->directions();
      MeasurementResult meas = optimize_measurement(out, mo);
      if (povm) {
        const double keep = accessible_information_given(out, *povm);
        if (keep > meas.value) {
          meas.povm = *povm;
          meas.value = keep;
        }
      }
      povm = meas.povm;
      residual = meas.pricing_residual;
      rs.holevo_gap_min = std::min(rs.holevo_gap_min, holevo_chi(out) - meas.value);

      const QuantumChannel induced = induced_classical_channel(ch, *povm);
      c1inf::Problem pb{induced, restricted_signals, inputs, {}};
      pb.options.tol = opts.tol;
      pb.options.starts = opts.starts;
      pb.options.seed = mix_seed(opts.seed, 2000003ULL * (r + 1) + alt);
      const c1inf::Result ens = c1inf::c1inf(pb);
      const Ensemble out_new = output_ensemble(ch, ens.ensemble);
      const double v_new = accessible_information_given(out_new, *povm);
      double v = meas.value;
      if (v_new > v) {
        inputs = ens.ensemble;
        v = v_new;
        rs.holevo_gap_min = std::min(rs.holevo_gap_min, holevo_chi(out_new) - v_new);
      }
      rs.trace.push_back(v);
      ++rs.alternations;
      const double gain = v - value;
      value = std::max(value, v);
      if (gain < opts.tol) {
        rs.status = Status::Converged;
        break;
      }
    }
    rs.value = accessible_information_given(output_ensemble(ch, inputs), *povm);
    if (rs.value > best.value) {
      best = {rs.value, inputs, povm, residual};
      best_index = restarts.size();
    }
    restarts.push_back(std::move(rs));
  }

  const Status status = restarts[best_index].status;
  return Result{.value = best.value,
                .ensemble = output_ensemble(ch, *best.inputs),
                .inputs = *best.inputs,
                .povm = *best.povm,
                .restarts_used = opts.restarts,
                .best_restart = best_index,
                .restarts = std::move(restarts),
                .pricing_residual = best.residual,
                .status = status};
}

}  // namespace qcap::c11
