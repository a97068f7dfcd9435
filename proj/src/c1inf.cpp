#include "qcap/c1inf.hpp"

#include "qcap/info.hpp"
#include "qcap/mixture.hpp"
#include "qcap/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qcap::c1inf {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;
constexpr double kSupportTol = 1e-12;

double output_entropy(const QuantumChannel& ch, const Matrix& rho) {
  return entropy_bits(apply_channel(ch, rho));
}

// -Tr X log2 X for PSD X of any trace; only negative eigenvalues are clipped,
// so the value stays smooth off the unit sphere.
double scaled_entropy(const Matrix& x) {
  const RealVector values = eigh(x).values;
  double h = 0.0;
  for (Index i = 0; i < values.size(); ++i) h += xlog2x_neg(std::max(values(i), 0.0));
  return h;
}

// Largest t with rho + t d PSD (bisection on the minimum eigenvalue).
double psd_step_limit(const Matrix& rho, const Matrix& d) {
  const double lmin = eigh(d).values(0);
  if (lmin >= 0.0) return 0.0;
  double lo = 0.0;
  double hi = 1.0 / -lmin + 1e-12;
  if (eigh(rho + hi * d).values(0) >= 0.0) return hi;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (eigh(rho + mid * d).values(0) >= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

Matrix remove_trace(const Matrix& m) {
  const Index d = m.rows();
  return m - (m.trace().real() / static_cast<double>(d)) *
                 Matrix::Identity(d, d);
}

Matrix clean_density(const Matrix& m) {
  Matrix h = hermitian_part(m);
  HermitianEigen e = eigh(h);
  for (Index i = 0; i < e.values.size(); ++i) {
    e.values(i) = std::max(0.0, e.values(i));
  }
  h = e.vectors * e.values.cast<Complex>().asDiagonal() * e.vectors.adjoint();
  return h / h.trace().real();
}

// Ascent direction of g at rho: trace-free gradient, restricted to the
// support face when the full direction leaves the PSD cone immediately.
Matrix ascent_direction(const Matrix& grad, const Matrix& rho) {
  Matrix d = remove_trace(hermitian_part(grad));
  if (psd_step_limit(rho, d) > 1e-12) return d;
  const HermitianEigen e = eigh(rho);
  Matrix p = Matrix::Zero(rho.rows(), rho.cols());
  int rank = 0;
  for (Index i = 0; i < e.values.size(); ++i) {
    if (e.values(i) > 1e-10) {
      p += e.vectors.col(i) * e.vectors.col(i).adjoint();
      ++rank;
    }
  }
  if (rank == 0) return Matrix::Zero(rho.rows(), rho.cols());
  Matrix face = p * d * p;
  face -= (face.trace().real() / rank) * p;
  return face;
}

double directional_derivative(const Matrix& grad, const Matrix& d) {
  return (grad.adjoint() * d).trace().real();
}

std::vector<PureState> eigen_states(const Matrix& rho) {
  const HermitianEigen e = eigh(rho);
  std::vector<PureState> out;
  for (Index i = 0; i < e.vectors.cols(); ++i) {
    out.push_back(PureState::normalized(fix_phase(e.vectors.col(i))));
  }
  return out;
}

struct Column {
  PureState v;
  Matrix out;   // N(vv^dag)
  double cost;  // H(N(vv^dag))
};

class Engine {
 public:
  explicit Engine(const Problem& pb)
      : pb_(pb), ch_(pb.channel), opts_(pb.options) {}

  Result run() {
    const Index d = ch_.dim_in();
    const bool restricted = pb_.restricted_signals.has_value();
    if (restricted) {
      for (const auto& s : *pb_.restricted_signals) add_column(s, true);
    } else {
      for (Index k = 0; k < d; ++k) add_column(PureState::basis(d, k));
      if (pb_.initial_ensemble) {
        for (const auto& s : pb_.initial_ensemble->states()) add_column(s);
        for (const auto& s : eigen_states(pb_.initial_ensemble->average())) {
          add_column(s);
        }
      }
      Rng rng(mix_seed(opts_.seed, 0));
      for (int k = 0; k < opts_.starts; ++k) {
        add_column(PureState(random_unit_vector(d, rng)));
      }
    }
    initial_weights();
    optimize_weights();
    polish();

    std::vector<double> values{chi(p_)};
    Status status = Status::RoundLimit;
    int rounds = 0;
    double residual = 0.0;
    double gap = 0.0;
    HermitianMatrix tau = kkt_tau();

    for (; rounds < opts_.max_rounds; ++rounds) {
      const Matrix rho = average_input();
      std::optional<HermitianMatrix> lp_tau = master_lp(rho);
      tau = kkt_tau();
      duality_log_.push_back({average_cost(), (tau.matrix() * rho).trace().real()});
      gap = weight_gap();

      std::vector<PureState> fresh;
      residual = std::max(0.0, gap);
      if (!restricted) {
        residual = 0.0;
        const auto minima = pricing_minima(ch_, tau, opts_.starts,
                                           mix_seed(opts_.seed, rounds + 1),
                                           support(), opts_.descent_iterations);
        for (const auto& m : minima) {
          residual = std::max(residual, -m.reduced_cost);
          if (m.reduced_cost < -opts_.pricing_tol) fresh.push_back(m.v);
        }
        if (lp_tau) {
          const DensityMatrix moved = update_rho(ch_, *lp_tau, DensityMatrix(rho));
          for (const auto& s : eigen_states(moved.matrix())) {
            if (reduced_cost(ch_, tau, s.amplitudes()) < -opts_.pricing_tol) {
              fresh.push_back(s);
            }
          }
        }
      }

      int added = 0;
      for (const auto& s : fresh) added += add_column(s) ? 1 : 0;
      if (added == 0 && gap <= opts_.tol) {
        status = Status::Converged;
        break;
      }
      const double before = chi(p_);
      optimize_weights();
      polish();
      optimize_weights();
      prune();
      const double after = chi(p_);
      values.push_back(after);
      if (added == 0 && after - before <= 1e-15) {
        // Weights cannot move further at working precision.
        status = Status::Converged;
        ++rounds;
        break;
      }
    }

    reduce_support();

    // Certificates at the final point.
    tau = kkt_tau();
    gap = weight_gap();
    if (restricted) {
      residual = std::max(0.0, gap);
    } else {
      residual = 0.0;
      const auto minima = pricing_minima(ch_, tau, opts_.starts,
                                         mix_seed(opts_.seed, 0xF1A1u), support(),
                                         opts_.descent_iterations);
      for (const auto& m : minima) residual = std::max(residual, -m.reduced_cost);
    }

    PureEnsemble ens = ensemble();
    const double value = ensemble_chi(ens);
    return Result{.value = value,
                  .ensemble = ens,
                  .rho = DensityMatrix(clean_density(ens.average())),
                  .tau = tau,
                  .dual_gap = std::max({0.0, gap, residual}),
                  .pricing_residual = residual,
                  .status = status,
                  .rounds = rounds,
                  .values = std::move(values),
                  .duality_log = std::move(duality_log_)};
  }

 private:
  bool add_column(const PureState& s, bool keep_duplicates = false) {
    if (!keep_duplicates) {
      for (const auto& c : cols_) {
        if (same_ray(c.v.amplitudes(), s.amplitudes(), 1e-14)) return false;
      }
    }
    Matrix out = apply_channel(ch_, s.projector());
    const double cost = entropy_bits(out);
    cols_.push_back({s, std::move(out), cost});
    const Index n = static_cast<Index>(cols_.size());
    p_.conservativeResize(n);
    p_(n - 1) = 0.0;
    return true;
  }

  Index size() const { return static_cast<Index>(cols_.size()); }

  Matrix average_output(const RealVector& p) const {
    Matrix avg = Matrix::Zero(ch_.dim_out(), ch_.dim_out());
    for (Index j = 0; j < size(); ++j) {
      if (p(j) != 0.0) avg += p(j) * cols_[j].out;
    }
    return avg;
  }

  Matrix average_input() const {
    const Index d = ch_.dim_in();
    Matrix avg = Matrix::Zero(d, d);
    for (Index j = 0; j < size(); ++j) {
      if (p_(j) != 0.0) avg += p_(j) * cols_[j].v.projector();
    }
    return avg;
  }

  double average_cost() const {
    double c = 0.0;
    for (Index j = 0; j < size(); ++j) c += p_(j) * cols_[j].cost;
    return c;
  }

  double chi(const RealVector& p) const {
    double c = 0.0;
    for (Index j = 0; j < size(); ++j) c += p(j) * cols_[j].cost;
    return entropy_bits(average_output(p)) - c;
  }

  // D(N(v_j) || N(rho)) for every column; the gradient of chi up to a
  // common constant.
  RealVector divergences(const RealVector& p) const {
    const Matrix lg = log2_psd(average_output(p));
    RealVector g(size());
    for (Index j = 0; j < size(); ++j) {
      g(j) = -(cols_[j].out * lg).trace().real() - cols_[j].cost;
    }
    return g;
  }

  double weight_gap() const {
    const RealVector g = divergences(p_);
    return g.maxCoeff() - g.dot(p_);
  }

  HermitianMatrix kkt_tau() const {
    const Index d = ch_.dim_in();
    const Matrix lg = apply_adjoint(ch_, log2_psd(average_output(p_)));
    return HermitianMatrix(hermitian_part(-lg - chi(p_) * Matrix::Identity(d, d)));
  }

  std::vector<PureState> support() const {
    std::vector<PureState> out;
    for (Index j = 0; j < size(); ++j) {
      if (p_(j) > kSupportTol) out.push_back(cols_[j].v);
    }
    return out;
  }

  void initial_weights() {
    const Index n = size();
    p_ = RealVector::Zero(n);
    if (pb_.initial_ensemble) {
      const auto& ens = *pb_.initial_ensemble;
      for (std::size_t i = 0; i < ens.size(); ++i) {
        for (Index j = 0; j < n; ++j) {
          if (same_ray(ens.states()[i].amplitudes(), cols_[j].v.amplitudes())) {
            p_(j) += ens.probabilities()[i];
            break;
          }
        }
      }
      if (p_.sum() > 0.5) {
        p_ /= p_.sum();
        return;
      }
      p_.setZero();
    }
    if (pb_.restricted_signals) {
      p_.setConstant(1.0 / static_cast<double>(n));
      return;
    }
    // Cheapest decomposition of I/d over the seed columns.
    const Index d = ch_.dim_in();
    const Matrix rho = Matrix::Identity(d, d) / static_cast<double>(d);
    const lp::LpSolution sol = lp::solve_lp(fixed_rho_lp(rho));
    if (sol.optimal()) {
      p_ = sol.x.cwiseMax(0.0);
      p_ /= p_.sum();
    } else {
      for (Index k = 0; k < d; ++k) p_(k) = 1.0 / static_cast<double>(d);
    }
  }

  lp::LinearProgram fixed_rho_lp(const Matrix& rho) const {
    lp::LinearProgram lpm;
    lpm.sense = lp::Sense::Minimize;
    lpm.b = hermitian_coords(rho);
    lpm.A.resize(rho.rows() * rho.rows(), 0);
    for (const auto& c : cols_) {
      lpm.add_column(hermitian_coords(c.v.projector()), c.cost);
    }
    return lpm;
  }

  // Fixed-rho master over the current columns. Adopts its weights when they
  // raise chi and returns the LP dual.
  std::optional<HermitianMatrix> master_lp(const Matrix& rho) {
    const lp::LpSolution sol = lp::solve_lp(fixed_rho_lp(rho));
    if (!sol.optimal()) return std::nullopt;
    const HermitianMatrix t = dual_tau(sol, ch_.dim_in());
    duality_log_.push_back({sol.objective, (t.matrix() * rho).trace().real()});
    RealVector q = sol.x.cwiseMax(0.0);
    if (q.sum() > 0.0) {
      q /= q.sum();
      if (chi(q) > chi(p_)) p_ = q;
    }
    return t;
  }

  MixtureObjective objective() const {
    std::vector<Matrix> outs;
    std::vector<double> costs;
    for (const Column& c : cols_) {
      outs.push_back(c.out);
      costs.push_back(c.cost);
    }
    return MixtureObjective(std::move(outs), std::move(costs));
  }

  void optimize_weights() {
    p_ = maximize_mixture(objective(), p_, 0.1 * opts_.tol);
  }

  // Joint local ascent of chi over the support states and weights. The
  // ensemble is the unit vector u = (sqrt(p_i) v_i)_i, so rho = sum u_i u_i^dag.
  void polish() {
    if (pb_.restricted_signals) return;
    const Index d = ch_.dim_in();
    std::vector<Index> sup;
    for (Index j = 0; j < size(); ++j) {
      if (p_(j) > 1e-9) sup.push_back(j);
    }
    const Index k = static_cast<Index>(sup.size());
    if (k == 0) return;
    Vector u(d * k);
    for (Index i = 0; i < k; ++i) {
      u.segment(i * d, d) = std::sqrt(p_(sup[i])) * cols_[sup[i]].v.amplitudes();
    }
    const double start_value = chi(p_);

    SphereFunction neg_chi = [&](const Vector& x) {
      Matrix avg = Matrix::Zero(ch_.dim_out(), ch_.dim_out());
      std::vector<Matrix> outs(static_cast<std::size_t>(k));
      for (Index i = 0; i < k; ++i) {
        const Vector ui = x.segment(i * d, d);
        outs[i] = apply_channel(ch_, Matrix(ui * ui.adjoint()));
        avg += outs[i];
      }
      const Matrix lavg = apply_adjoint(ch_, log2_psd(avg));
      double value = entropy_bits(avg);
      Vector grad(d * k);
      for (Index i = 0; i < k; ++i) {
        const Vector ui = x.segment(i * d, d);
        const double t = ui.squaredNorm();
        Matrix m = -lavg;
        if (t > 1e-300) {
          value -= t * entropy_bits(outs[i] / t);
          m += apply_adjoint(ch_, log2_psd(outs[i])) -
               std::log2(t) * Matrix::Identity(d, d);
        }
        grad.segment(i * d, d) = -2.0 * (m * ui);
      }
      return ValueGradient{-value, grad};
    };
    SphereDescentOptions so;
    so.max_iterations = 300;
    so.gradient_tol = 1e-11;
    const SphereMinimum m = sphere_minimize(neg_chi, u, so);
    if (-m.value <= start_value) return;

    RealVector q = RealVector::Zero(size());
    std::vector<std::pair<PureState, double>> moved;
    for (Index i = 0; i < k; ++i) {
      const Vector ui = m.v.segment(i * d, d);
      const double t = ui.squaredNorm();
      if (t <= 0.0) continue;
      moved.emplace_back(PureState::normalized(fix_phase(ui)), t);
    }
    const RealVector old = p_;
    p_ = RealVector::Zero(size());
    for (const auto& [state, w] : moved) {
      Index at = -1;
      for (Index j = 0; j < size(); ++j) {
        if (same_ray(cols_[j].v.amplitudes(), state.amplitudes(), 1e-14)) at = j;
      }
      if (at < 0) {
        add_column(state);
        at = size() - 1;
      }
      p_(at) += w;
    }
    p_ /= p_.sum();
    if (chi(p_) <= start_value) {
      p_ = old;
      p_.conservativeResize(size());
      for (Index j = old.size(); j < size(); ++j) p_(j) = 0.0;
    }
  }

  // Bounds the master size: drops zero-weight columns with the smallest
  // divergence.
  void prune() {
    const Index d = ch_.dim_in();
    const Index cap = std::max<Index>(4 * d * d, 32);
    if (pb_.restricted_signals || size() <= cap) return;
    Index positive = 0;
    for (Index j = 0; j < size(); ++j) positive += p_(j) > 0.0 ? 1 : 0;
    const Index keep = std::max(cap, positive);
    if (keep >= size()) return;
    const RealVector g = divergences(p_);
    std::vector<Index> order(static_cast<std::size_t>(size()));
    for (Index j = 0; j < size(); ++j) order[static_cast<std::size_t>(j)] = j;
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
      const bool sa = p_(a) > 0.0;
      const bool sb = p_(b) > 0.0;
      if (sa != sb) return sa;
      return g(a) > g(b);
    });
    order.resize(static_cast<std::size_t>(keep));
    std::sort(order.begin(), order.end());
    std::vector<Column> kept;
    RealVector q(keep);
    for (Index k = 0; k < keep; ++k) {
      kept.push_back(cols_[order[static_cast<std::size_t>(k)]]);
      q(k) = p_(order[static_cast<std::size_t>(k)]);
    }
    cols_ = std::move(kept);
    p_ = q;
  }

  // Caratheodory: move along null directions of (state coordinates, cost)
  // until at most d^2 + 1 weights remain. Average state and chi are unchanged.
  void reduce_support() {
    const Index d = ch_.dim_in();
    const Index rows = d * d + 1;
    for (;;) {
      std::vector<Index> supp;
      for (Index j = 0; j < size(); ++j) {
        if (p_(j) > kSupportTol) supp.push_back(j);
      }
      const Index n = static_cast<Index>(supp.size());
      if (n <= rows) return;
      RealMatrix a(rows, n);
      for (Index k = 0; k < n; ++k) {
        const Column& c = cols_[supp[k]];
        a.col(k).head(d * d) = hermitian_coords(c.v.projector());
        a(d * d, k) = c.cost;
      }
      Eigen::JacobiSVD<RealMatrix> svd(a, Eigen::ComputeFullV);
      RealVector z = svd.matrixV().col(n - 1);
      if (z.maxCoeff() <= 0.0) z = -z;
      double t = std::numeric_limits<double>::infinity();
      Index hit = 0;
      for (Index k = 0; k < n; ++k) {
        if (z(k) > 0.0 && p_(supp[k]) / z(k) < t) {
          t = p_(supp[k]) / z(k);
          hit = k;
        }
      }
      for (Index k = 0; k < n; ++k) p_(supp[k]) = std::max(0.0, p_(supp[k]) - t * z(k));
      p_(supp[hit]) = 0.0;
    }
  }

  PureEnsemble ensemble() const {
    std::vector<double> probs;
    std::vector<PureState> states;
    double total = 0.0;
    for (Index j = 0; j < size(); ++j) {
      if (p_(j) > kSupportTol) {
        probs.push_back(p_(j));
        states.push_back(cols_[j].v);
        total += p_(j);
      }
    }
    for (auto& x : probs) x /= total;
    return PureEnsemble(std::move(probs), std::move(states));
  }

  double ensemble_chi(const PureEnsemble& ens) const {
    double c = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
      c += ens.probabilities()[i] * output_entropy(ch_, ens.states()[i].projector());
    }
    return entropy_bits(apply_channel(ch_, ens.average())) - c;
  }

  const Problem& pb_;
  const QuantumChannel& ch_;
  Options opts_;
  std::vector<Column> cols_;
  RealVector p_;
  std::vector<DualityCheck> duality_log_;
};

std::vector<PricingReport> collect_minima(const QuantumChannel& ch,
                                          const HermitianMatrix& tau, int starts,
                                          std::uint64_t seed,
                                          const std::vector<PureState>& support,
                                          int iterations) {
  const Index d = ch.dim_in();
  if (tau.dim() != d) throw DimensionError("tau dimension differs from channel input");
  SphereFunction f = [&](const Vector& v) {
    return ValueGradient{reduced_cost(ch, tau, v),
                         reduced_cost_gradient(ch, tau, v)};
  };
  SphereDescentOptions so;
  so.max_iterations = iterations;

  std::vector<std::pair<Vector, StartClass>> inits;
  Rng rng(seed);
  for (int k = 0; k < starts; ++k) {
    inits.emplace_back(random_unit_vector(d, rng), StartClass::Random);
  }
  for (const auto& s : support) inits.emplace_back(s.amplitudes(), StartClass::Support);

  std::vector<PricingReport> found;
  for (const auto& [v0, cls] : inits) {
    const SphereMinimum m = sphere_minimize(f, v0, so);
    const Vector v = fix_phase(m.v / m.v.norm());
    bool dup = false;
    for (auto& r : found) {
      if (same_ray(r.v.amplitudes(), v, 1e-10)) {
        if (m.value < r.reduced_cost) {
          r.v = PureState::normalized(v);
          r.reduced_cost = reduced_cost(ch, tau, r.v.amplitudes());
        }
        dup = true;
        break;
      }
    }
    if (dup) continue;
    PureState ps = PureState::normalized(v);
    const double rc = reduced_cost(ch, tau, ps.amplitudes());
    found.push_back({std::move(ps), rc, cls});
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    if (a.reduced_cost != b.reduced_cost) return a.reduced_cost < b.reduced_cost;
    return lex_less(a.v.amplitudes(), b.v.amplitudes());
  });
  return found;
}

}  // namespace

const char* to_string(Status s) {
  return s == Status::Converged ? "converged" : "round-limit";
}

lp::LinearProgram build_fixed_rho_lp(const QuantumChannel& ch,
                                     const std::vector<PureState>& states,
                                     const DensityMatrix& rho) {
  const Index d = ch.dim_in();
  if (rho.dim() != d) throw DimensionError("rho dimension differs from channel input");
  lp::LinearProgram lpm;
  lpm.sense = lp::Sense::Minimize;
  lpm.b = hermitian_coords(rho.matrix());
  lpm.A.resize(d * d, 0);
  for (const auto& s : states) {
    if (s.dim() != d) throw DimensionError("state dimension differs from channel input");
    lpm.add_column(hermitian_coords(s.projector()),
                   output_entropy(ch, s.projector()));
  }
  return lpm;
}

HermitianMatrix dual_tau(const lp::LpSolution& sol, Index dim) {
  if (!sol.optimal()) {
    throw Error(std::string("dual_tau: master is ") + lp::to_string(sol.status));
  }
  if (sol.y.size() != dim * dim) throw DimensionError("dual vector length is not dim^2");
  return HermitianMatrix(hermitian_from_coords(dim, sol.y));
}

double reduced_cost(const QuantumChannel& ch, const HermitianMatrix& tau,
                    const Vector& v) {
  const Matrix proj = v * v.adjoint();
  return scaled_entropy(apply_channel(ch, proj)) - v.dot(tau.matrix() * v).real();
}

Vector reduced_cost_gradient(const QuantumChannel& ch,
                             const HermitianMatrix& tau, const Vector& v) {
  const Matrix out = apply_channel(ch, Matrix(v * v.adjoint()));
  const Matrix lg = apply_adjoint(ch, log2_psd(out));
  const Index d = v.size();
  const Matrix m = -lg - kInvLn2 * Matrix::Identity(d, d) - tau.matrix();
  return 2.0 * (m * v);
}

std::vector<PricingReport> pricing_minima(const QuantumChannel& ch,
                                          const HermitianMatrix& tau, int starts,
                                          std::uint64_t seed,
                                          const std::vector<PureState>& support,
                                          int descent_iterations) {
  if (starts < 1) throw Error("pricing needs at least one start");
  return collect_minima(ch, tau, starts, seed, support, descent_iterations);
}

std::vector<PricingReport> pricing_search(const QuantumChannel& ch,
                                          const HermitianMatrix& tau, int starts,
                                          std::uint64_t seed,
                                          const std::vector<PureState>& support,
                                          double tol, int descent_iterations) {
  auto all = pricing_minima(ch, tau, starts, seed, support, descent_iterations);
  std::vector<PricingReport> out;
  for (auto& r : all) {
    if (r.reduced_cost < -tol) out.push_back(std::move(r));
  }
  return out;
}

double rho_objective(const QuantumChannel& ch, const HermitianMatrix& tau,
                     const Matrix& rho) {
  return output_entropy(ch, rho) - (rho * tau.matrix()).trace().real();
}

Matrix rho_objective_gradient(const QuantumChannel& ch,
                              const HermitianMatrix& tau, const Matrix& rho) {
  const Index d = rho.rows();
  const Matrix lg = apply_adjoint(ch, log2_psd(apply_channel(ch, rho)));
  return -lg - kInvLn2 * Matrix::Identity(d, d) - tau.matrix();
}

DensityMatrix update_rho(const QuantumChannel& ch, const HermitianMatrix& tau,
                         const DensityMatrix& rho) {
  const Matrix& r = rho.matrix();
  const Matrix grad = rho_objective_gradient(ch, tau, r);
  const Matrix dir = ascent_direction(grad, r);
  if (dir.norm() < 1e-9 || directional_derivative(grad, dir) <= 0.0) return rho;
  const double t_max = psd_step_limit(r, dir);
  if (t_max <= 0.0) return rho;

  auto slope = [&](double t) {
    return directional_derivative(rho_objective_gradient(ch, tau, r + t * dir), dir);
  };
  // The slope at t_max is unreliable: the vanishing eigenvalue's log is
  // clipped. Bisect inside, then compare with the boundary point directly.
  double lo = 0.0;
  double hi = t_max;
  for (int i = 0; i < 12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double t = lo;
  const Matrix edge = clean_density(r + t_max * dir);
  if (t <= 0.0 || rho_objective(ch, tau, edge) >
                      rho_objective(ch, tau, clean_density(r + t * dir))) {
    t = t_max;
  }
  const Matrix next = clean_density(r + t * dir);
  if (rho_objective(ch, tau, next) < rho_objective(ch, tau, r)) return rho;
  return DensityMatrix(next);
}

Result c1inf(const Problem& problem) {
  const Options& o = problem.options;
  if (o.starts < 1) throw Error("c1inf needs at least one pricing start");
  if (o.max_rounds < 1) throw Error("c1inf needs max_rounds >= 1");
  if (problem.initial_ensemble &&
      problem.initial_ensemble->dim() != problem.channel.dim_in()) {
    throw DimensionError("initial ensemble dimension differs from channel input");
  }
  if (problem.restricted_signals) {
    if (problem.restricted_signals->empty()) throw Error("restricted signal set is empty");
    for (const auto& s : *problem.restricted_signals) {
      if (s.dim() != problem.channel.dim_in()) {
        throw DimensionError("signal dimension differs from channel input");
      }
    }
  }
  return Engine(problem).run();
}

}  // namespace qcap::c1inf
