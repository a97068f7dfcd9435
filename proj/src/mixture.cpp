#include "qcap/mixture.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace qcap {

MixtureObjective::MixtureObjective(std::vector<Matrix> outputs,
                                   std::vector<double> costs)
    : outputs_(std::move(outputs)), costs_(std::move(costs)) {
  if (outputs_.empty() || outputs_.size() != costs_.size()) {
    throw DimensionError("mixture needs matching non-empty outputs and costs");
  }
}

Matrix MixtureObjective::average(const RealVector& p) const {
  Matrix avg = Matrix::Zero(outputs_.front().rows(), outputs_.front().cols());
  for (Index j = 0; j < size(); ++j) {
    if (p(j) != 0.0) avg += p(j) * outputs_[j];
  }
  return avg;
}

double MixtureObjective::value(const RealVector& p) const {
  double c = 0.0;
  for (Index j = 0; j < size(); ++j) c += p(j) * costs_[j];
  return entropy_bits(average(p)) - c;
}

RealVector MixtureObjective::scores(const RealVector& p) const {
  const Matrix lg = log2_psd(average(p));
  RealVector g(size());
  for (Index j = 0; j < size(); ++j) {
    g(j) = -(outputs_[j] * lg).trace().real() - costs_[j];
  }
  return g;
}

double MixtureObjective::gap(const RealVector& p) const {
  const RealVector g = scores(p);
  return g.maxCoeff() - g.dot(p);
}

RealVector project_simplex(const RealVector& y) {
  std::vector<double> u(y.data(), y.data() + y.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cum += u[k];
    const double t = (cum - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

RealVector project_budget(const RealVector& y, const Budget& budget) {
  RealVector q = project_simplex(y);
  if (budget.a.dot(q) <= budget.bound) return q;
  double lo = 0.0;
  double hi = 1.0;
  while (budget.a.dot(project_simplex(y - hi * budget.a)) > budget.bound &&
         hi < 1e12) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (budget.a.dot(project_simplex(y - mid * budget.a)) > budget.bound) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return project_simplex(y - hi * budget.a);
}

RealVector linear_oracle(const RealVector& g, const Budget* budget) {
  const Index n = g.size();
  RealVector best = RealVector::Zero(n);
  double best_value = -std::numeric_limits<double>::infinity();
  if (budget == nullptr) {
    Index i = 0;
    g.maxCoeff(&i);
    best(i) = 1.0;
    return best;
  }
  // Vertices: single columns within budget, or two columns saturating it.
  const RealVector& a = budget->a;
  const double b = budget->bound;
  Index vi = -1;
  Index vj = -1;
  double theta = 1.0;
  for (Index i = 0; i < n; ++i) {
    if (a(i) <= b && g(i) > best_value) {
      best_value = g(i);
      vi = i;
      vj = -1;
      theta = 1.0;
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (a(i) >= b) continue;
    for (Index j = 0; j < n; ++j) {
      if (a(j) <= b) continue;
      const double t = (a(j) - b) / (a(j) - a(i));
      const double v = t * g(i) + (1.0 - t) * g(j);
      if (v > best_value) {
        best_value = v;
        vi = i;
        vj = j;
        theta = t;
      }
    }
  }
  if (vi < 0) throw Error("budget polytope is empty");
  best(vi) = theta;
  if (vj >= 0) best(vj) = 1.0 - theta;
  return best;
}

namespace {

// Maximizer of a concave function on p + t dir, t in [0, 1].
double line_max(const MixtureObjective& f, const RealVector& p,
                const RealVector& dir) {
  auto slope = [&](double t) { return f.scores(p + t * dir).dot(dir); };
  if (slope(1.0) >= 0.0) return 1.0;
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

RealVector renormalize(const RealVector& q) {
  RealVector r = q.cwiseMax(0.0);
  return r / r.sum();
}

}  // namespace

RealVector maximize_mixture(const MixtureObjective& f, RealVector p, double tol,
                            int max_iterations, const Budget* budget) {
  if (p.size() != f.size()) throw DimensionError("weight vector length mismatch");
  if (budget != nullptr && budget->a.size() != f.size()) {
    throw DimensionError("budget length mismatch");
  }
  p = renormalize(p);
  double value = f.value(p);
  for (int it = 0; it < max_iterations; ++it) {
    const RealVector g = f.scores(p);
    const RealVector vertex = linear_oracle(g, budget);
    if (g.dot(vertex) - g.dot(p) <= tol) break;
    RealVector fw = vertex - p;
    const double scale = 1.0 / std::max(1.0, g.cwiseAbs().maxCoeff());
    const RealVector y = p + scale * g;
    RealVector pg = (budget ? project_budget(y, *budget) : project_simplex(y)) - p;
    RealVector cand = p;
    double cand_value = value;
    for (const RealVector* dir : {&pg, &fw}) {
      if (dir->norm() < 1e-15) continue;
      const RealVector q = renormalize(p + line_max(f, p, *dir) * *dir);
      const double v = f.value(q);
      if (v > cand_value) {
        cand_value = v;
        cand = q;
      }
    }
    if (cand_value <= value) break;
    p = cand;
    value = cand_value;
  }
  return p;
}

}  // namespace qcap
