#include "qcap/ea.hpp"

#include "qcap/c1inf.hpp"
#include "qcap/info.hpp"
#include "qcap/mixture.hpp"
#include "qcap/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcap::ea {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;
constexpr int kPerRound = 2;  // new columns per pricing family and round

Matrix identity(Index d) { return Matrix::Identity(d, d); }

Matrix mix(const Matrix& rho, double m) {
  const Index d = rho.rows();
  return (1.0 - m) * rho + (m / static_cast<double>(d)) * identity(d);
}

Matrix trace_free(const Matrix& g) {
  const Index d = g.rows();
  return g - (g.trace().real() / static_cast<double>(d)) * identity(d);
}

double spectral_norm(const Matrix& h) {
  return eigh(h).values.cwiseAbs().maxCoeff();
}

double inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace().real();
}

RealVector pad(const RealVector& v, Index n) {
  RealVector out = RealVector::Zero(n);
  out.head(v.size()) = v;
  return out;
}

// Hermitian, unit trace, PSD to rounding.
Matrix clean(const Matrix& m) {
  Matrix h = hermitian_part(m);
  return h / h.trace().real();
}

}  // namespace

double mutual_information(const QuantumChannel& ch, const Matrix& rho) {
  return entropy_bits(rho) + coherent_info(ch, rho);
}

Matrix mutual_information_gradient(const QuantumChannel& ch, const Matrix& rho) {
  return hermitian_part(-log2_psd(rho) + coherent_info_gradient(ch, rho) -
                        kInvLn2 * identity(rho.rows()));
}

double coherent_info(const QuantumChannel& ch, const Matrix& rho) {
  return entropy_bits(apply_channel(ch, rho)) -
         entropy_bits(apply_complementary(ch, rho));
}

Matrix coherent_info_gradient(const QuantumChannel& ch, const Matrix& rho) {
  return hermitian_part(
      -apply_adjoint(ch, log2_psd(apply_channel(ch, rho))) +
      apply_complementary_adjoint(ch, log2_psd(apply_complementary(ch, rho))));
}

Matrix project_density(const Matrix& h) {
  const HermitianEigen e = eigh(h);
  const RealVector lam = project_simplex(e.values);
  return hermitian_part(e.vectors * lam.cast<Complex>().asDiagonal() *
                        e.vectors.adjoint());
}

CEResult c_ea(const QuantumChannel& ch, const Options& opts) {
  const Index d = ch.dim_in();
  const double m = opts.mixing;
  auto value_at = [&](const Matrix& r) { return mutual_information(ch, r); };
  // Concave along rho + t dir: bisection on the slope.
  auto line_max = [&](const Matrix& rho, const Matrix& dir) {
    auto slope = [&](double t) {
      const Matrix p = mix(rho + t * dir, m);
      return inner(mutual_information_gradient(ch, p), dir);
    };
    if (slope(1.0) >= 0.0) return 1.0;
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 50; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (slope(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };

  Matrix rho = identity(d) / static_cast<double>(d);
  double value = value_at(rho);
  CEResult res{.rho_star = DensityMatrix(rho), .values = {}};
  double gap = 0.0;
  Matrix g;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    g = mutual_information_gradient(ch, rho);
    const HermitianEigen e = eigh(g);
    gap = e.values(d - 1) - inner(g, rho);
    res.values.push_back(value);
    if (gap <= opts.tol) {
      res.converged = true;
      break;
    }
    const Vector u = e.vectors.col(d - 1);
    const Matrix fw = u * u.adjoint() - rho;
    const Matrix gc = trace_free(g);
    const double scale = 1.0 / std::max(1e-12, spectral_norm(gc));
    Matrix best = rho;
    double best_value = value;
    for (double s : {scale, 10.0 * scale}) {
      const Matrix pg = project_density(rho + s * gc) - rho;
      for (const Matrix* dir : {&pg, &fw}) {
        if (max_abs(*dir) < 1e-15) continue;
        const Matrix q = clean(mix(rho + line_max(rho, *dir) * *dir, m));
        const double v = value_at(q);
        if (v > best_value) {
          best_value = v;
          best = q;
        }
      }
    }
    if (best_value <= value) {
      res.converged = gap <= opts.tol;
      break;
    }
    rho = best;
    value = best_value;
  }
  g = mutual_information_gradient(ch, rho);
  gap = std::max(0.0, eigh(g).values(d - 1) - inner(g, rho));

  res.rho_star = DensityMatrix(rho);
  res.value = quantum_mutual_information(ch, res.rho_star);
  res.fw_gap = gap;
  res.converged = res.converged || gap <= opts.tol;
  res.gradient_residual = (project_density(rho + trace_free(g)) - rho).norm();
  res.iterations = it;
  res.entanglement_rate = von_neumann_entropy(res.rho_star);
  return res;
}

namespace {

double coherent_residual(const QuantumChannel& ch, const Matrix& rho) {
  const Matrix g = trace_free(coherent_info_gradient(ch, rho));
  return (project_density(rho + g) - rho).norm();
}

LocalMaximum coherent_ascent(const QuantumChannel& ch, Matrix rho,
                             const CoherentOptions& opts) {
  rho = mix(rho, opts.mixing);
  double value = coherent_info(ch, rho);
  double step = 1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Matrix g = trace_free(coherent_info_gradient(ch, rho));
    if ((project_density(rho + g) - rho).norm() < opts.tol) break;
    bool moved = false;
    while (step > 1e-14) {
      const Matrix q = mix(project_density(rho + step * g), opts.mixing);
      const double v = coherent_info(ch, q);
      if (v >= value + 1e-4 * inner(g, q - rho) && v > value) {
        rho = q;
        value = v;
        step = std::min(step * 2.0, 1e3);
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  rho = clean(rho);
  return LocalMaximum{.value = coherent_info(ch, rho),
                      .rho = DensityMatrix(rho),
                      .residual = coherent_residual(ch, rho)};
}

}  // namespace

QResult coherent_info_max(const QuantumChannel& ch, const CoherentOptions& opts) {
  const Index d = ch.dim_in();
  const int per_family = opts.random_starts < 0 ? static_cast<int>(d)
                                                 : opts.random_starts;
  std::vector<Matrix> starts{identity(d) / static_cast<double>(d)};
  Rng rng(mix_seed(opts.seed, 0));
  for (int k = 0; k < per_family; ++k) {
    const Vector v = random_unit_vector(d, rng);
    starts.push_back(mix(v * v.adjoint(), 1e-6));
  }
  for (int k = 0; k < per_family; ++k) starts.push_back(random_density(d, rng));

  std::vector<LocalMaximum> maxima;
  for (const Matrix& s : starts) {
    LocalMaximum m = coherent_ascent(ch, s, opts);
    const bool seen = std::any_of(maxima.begin(), maxima.end(), [&](const auto& o) {
      return max_abs(o.rho.matrix() - m.rho.matrix()) <= 1e-4;
    });
    if (!seen) maxima.push_back(std::move(m));
  }
  std::stable_sort(maxima.begin(), maxima.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  return QResult{.value = maxima.front().value,
                 .rho_star = maxima.front().rho,
                 .maxima = std::move(maxima)};
}

namespace {

struct MixedColumn {
  Matrix sigma;
  Matrix out;      // N(sigma)
  double env;      // H(N^c(sigma))
  double entropy;  // H(sigma)
};

class LimitedEngine {
 public:
  LimitedEngine(const QuantumChannel& ch, double budget, const LimitedOptions& opts)
      : ch_(ch), budget_(budget), opts_(opts) {}

  LimitedResult run() {
    const Index d = ch_.dim_in();
    for (Index k = 0; k < d; ++k) add(PureState::basis(d, k).projector());
    add(identity(d) / static_cast<double>(d));
    Rng rng(mix_seed(opts_.seed, 0));
    for (int k = 0; k < opts_.starts; ++k) {
      const Vector v = random_unit_vector(d, rng);
      add(v * v.adjoint());
    }
    RealVector p = RealVector::Zero(size());
    for (Index k = 0; k < d; ++k) p(k) = 1.0 / static_cast<double>(d);
    if (opts_.warm_start) {
      const Ensemble& w = *opts_.warm_start;
      RealVector q = RealVector::Zero(size() + static_cast<Index>(w.size()));
      for (std::size_t i = 0; i < w.size(); ++i) {
        add(w.states()[i].matrix(), true);
        q(size() - 1) = w.probabilities()[i];
      }
      p = pad(p, size());
      if (entropy_of(q) <= budget_ + 1e-12) p = q;
    }

    RealVector best = p;
    double best_value = objective(0.0).value(p);
    LimitedResult out{.ensemble = ensemble(p)};
    int round = 0;
    int stalled = 0;
    for (; round < opts_.max_rounds; ++round) {
      const auto [q, mu] = solve_weights(best);
      const double v = objective(0.0).value(q);
      stalled = v > best_value + 1e-10 ? 0 : stalled + 1;
      if (v > best_value) {
        best_value = v;
        best = q;
      }
      if (stalled == 3) break;
      out.multiplier = mu;
      const std::size_t added = price(q, mu, round);
      if (added == 0) {
        out.converged = true;
        ++round;
        break;
      }
      best = prune(pad(best, size()));
    }
    out.rounds = round;
    out.ensemble = ensemble(best);
    const LimitedEaValue lv = limited_ea_objective(ch_, out.ensemble);
    out.value = lv.value;
    out.avg_entropy = lv.avg_entropy;
    return out;
  }

 private:
  Index size() const { return static_cast<Index>(cols_.size()); }

  bool add(const Matrix& sigma, bool force = false) {
    const Matrix s = clean(sigma);
    if (!force) {
      for (const auto& c : cols_) {
        if (max_abs(c.sigma - s) <= 1e-7) return false;
      }
    }
    double e = entropy_bits(s);
    if (e < 1e-10) e = 0.0;
    cols_.push_back(MixedColumn{s, apply_channel(ch_, s),
                                entropy_bits(apply_complementary(ch_, s)), e});
    return true;
  }

  double entropy_of(const RealVector& p) const {
    double e = 0.0;
    for (Index j = 0; j < p.size(); ++j) e += p(j) * cols_[j].entropy;
    return e;
  }

  // F_mu(p) = H(N(avg)) - sum_i p_i (H(N^c(s_i)) - H(s_i) + mu H(s_i)).
  MixtureObjective objective(double mu) const {
    std::vector<Matrix> outs;
    std::vector<double> costs;
    for (const auto& c : cols_) {
      outs.push_back(c.out);
      costs.push_back(c.env - c.entropy + mu * c.entropy);
    }
    return MixtureObjective(std::move(outs), std::move(costs));
  }

  Budget budget() const {
    RealVector a(size());
    for (Index j = 0; j < size(); ++j) a(j) = cols_[j].entropy;
    return Budget{a, budget_};
  }

  // Optimal weights under the budget, and the budget price mu >= 0 that best
  // certifies them: mu minimizes the Frank-Wolfe gap of F_mu (convex in mu).
  std::pair<RealVector, double> solve_weights(RealVector start) const {
    const Budget bud = budget();
    if (bud.a.dot(start) > budget_) {
      start.setZero();
      for (Index k = 0; k < ch_.dim_in(); ++k) {
        start(k) = 1.0 / static_cast<double>(ch_.dim_in());
      }
    }
    const RealVector p = maximize_mixture(objective(0.0), start, 0.1 * opts_.tol,
                                          2000, &bud);
    if (budget_ - bud.a.dot(p) > 1e-9) return {p, 0.0};
    const RealVector g = objective(0.0).scores(p);
    auto lagrangian_gap = [&](double mu) {
      const RealVector gm = g - mu * bud.a;
      return gm.maxCoeff() - gm.dot(p);
    };
    double lo = 0.0;
    double hi = 1e4;
    for (int i = 0; i < 200; ++i) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (lagrangian_gap(m1) <= lagrangian_gap(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    return {p, 0.5 * (lo + hi)};
  }

  // Drops zero-weight columns beyond the cap; the seed columns stay.
  RealVector prune(const RealVector& p) {
    const Index cap = std::max<Index>(4 * ch_.dim_in() * ch_.dim_in(), 16);
    if (size() <= cap) return p;
    const Index keep_seed = ch_.dim_in() + 1;
    std::vector<bool> keep(size(), false);
    Index count = 0;
    for (Index j = 0; j < size(); ++j) {
      if (j < keep_seed || p(j) > 0.0) {
        keep[j] = true;
        ++count;
      }
    }
    // Most recent zero-weight columns fill the remaining slots.
    for (Index j = size() - 1; j >= keep_seed && count < cap; --j) {
      if (!keep[j]) {
        keep[j] = true;
        ++count;
      }
    }
    std::vector<MixedColumn> kept;
    std::vector<double> w;
    for (Index j = 0; j < size(); ++j) {
      if (keep[j]) {
        kept.push_back(cols_[j]);
        w.push_back(p(j));
      }
    }
    cols_ = std::move(kept);
    return Eigen::Map<const RealVector>(w.data(), static_cast<Index>(w.size()));
  }

  // New pure and mixed columns whose score beats the current level.
  std::size_t price(const RealVector& p, double mu, int round) {
    const Index d = ch_.dim_in();
    const MixtureObjective f = objective(mu);
    const double level = f.scores(p).dot(p);
    const Matrix lg = log2_psd(f.average(p));
    const Matrix pull = apply_adjoint(ch_, lg);
    const std::size_t before = cols_.size();

    std::vector<PureState> pure_support;
    std::vector<Matrix> mixed_support;
    for (Index j = 0; j < size(); ++j) {
      if (p(j) <= 1e-12) continue;
      if (cols_[j].entropy <= 1e-9) {
        pure_support.push_back(PureState(eigh(cols_[j].sigma).vectors.col(d - 1)));
      } else {
        mixed_support.push_back(cols_[j].sigma);
      }
    }

    const HermitianMatrix tau(hermitian_part(-pull - level * identity(d)));
    const auto minima = c1inf::pricing_minima(
        ch_, tau, opts_.starts, mix_seed(opts_.seed, 2 * round + 1), pure_support);
    int taken = 0;
    for (const auto& m : minima) {
      if (taken == kPerRound || m.reduced_cost >= -opts_.tol) break;
      taken += add(m.v.projector()) ? 1 : 0;
    }

    // sigma = M M^dag on the unit Frobenius sphere.
    auto fn = [&](const Vector& x) {
      const Eigen::Map<const Matrix> mm(x.data(), d, d);
      const Matrix sigma = hermitian_part(mm * mm.adjoint());
      const Matrix env = apply_complementary(ch_, sigma);
      ValueGradient vg;
      vg.value = inner(apply_channel(ch_, sigma), lg) + entropy_bits(env) -
                 (1.0 - mu) * entropy_bits(sigma) + level;
      const Matrix g = pull - apply_complementary_adjoint(ch_, log2_psd(env)) +
                       (1.0 - mu) * log2_psd(sigma);
      const Matrix grad = 2.0 * g * mm;
      vg.gradient = Eigen::Map<const Vector>(grad.data(), d * d);
      return vg;
    };
    std::vector<Matrix> starts = mixed_support;
    starts.push_back(identity(d) / static_cast<double>(d));
    Rng rng(mix_seed(opts_.seed, 2 * round + 2));
    for (int k = 0; k < opts_.starts; ++k) starts.push_back(random_density(d, rng));
    std::vector<SphereMinimum> found;
    for (const Matrix& s : starts) {
      const Matrix root = sqrt_psd(s);
      Vector x = Eigen::Map<const Vector>(root.data(), d * d);
      x.normalize();
      SphereMinimum r = sphere_minimize(fn, x);
      if (r.value < -opts_.tol) found.push_back(std::move(r));
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& a, const auto& b) { return a.value < b.value; });
    taken = 0;
    for (const auto& r : found) {
      if (taken == kPerRound) break;
      const Eigen::Map<const Matrix> mm(r.v.data(), d, d);
      taken += add(mm * mm.adjoint()) ? 1 : 0;
    }
    return cols_.size() - before;
  }

  Ensemble ensemble(const RealVector& p) const {
    std::vector<double> probs;
    std::vector<DensityMatrix> states;
    double total = 0.0;
    for (Index j = 0; j < p.size(); ++j) {
      if (p(j) > 1e-12) {
        probs.push_back(p(j));
        states.emplace_back(cols_[j].sigma);
        total += p(j);
      }
    }
    for (auto& x : probs) x /= total;
    return Ensemble(std::move(probs), std::move(states));
  }

  const QuantumChannel& ch_;
  double budget_;
  LimitedOptions opts_;
  std::vector<MixedColumn> cols_;
};

}  // namespace

LimitedResult limited_ea(const QuantumChannel& ch, double budget,
                         const LimitedOptions& opts) {
  if (!(budget >= 0.0)) throw Error("limited_ea: entanglement budget must be >= 0");
  if (opts.warm_start && opts.warm_start->dim() != ch.dim_in()) {
    throw DimensionError("warm start dimension does not match channel input");
  }
  return LimitedEngine(ch, budget, opts).run();
}

std::vector<LimitedResult> limited_ea_sweep(const QuantumChannel& ch,
                                            std::vector<double> budgets,
                                            const LimitedOptions& opts) {
  std::sort(budgets.begin(), budgets.end());
  std::vector<LimitedResult> out;
  LimitedOptions o = opts;
  for (double b : budgets) {
    out.push_back(limited_ea(ch, b, o));
    o.warm_start = out.back().ensemble;
  }
  return out;
}

}  // namespace qcap::ea
