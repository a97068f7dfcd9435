#include "qcap/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcap::oracles {

namespace {

using Bloch = std::array<double, 3>;

constexpr double kPi = std::numbers::pi;

void require_step(double step) {
  if (!(step > 0.0)) throw Error("oracle grid step must be positive");
}

Bloch bloch_vector(const Matrix& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

Matrix from_bloch(const Bloch& r) {
  Matrix m(2, 2);
  m(0, 0) = 0.5 * (1.0 + r[2]);
  m(1, 1) = 0.5 * (1.0 - r[2]);
  m(0, 1) = Complex(0.5 * r[0], -0.5 * r[1]);
  m(1, 0) = std::conj(m(0, 1));
  return m;
}

double dot(const Bloch& a, const Bloch& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Bloch sphere_point(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi),
          std::cos(theta)};
}

double plogp(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// I(X;Y) for outcome elements q (I + m.sigma) / 2.
class MeasurementScorer {
 public:
  explicit MeasurementScorer(const Ensemble& ens) {
    if (ens.dim() != 2) throw DimensionError("measurement grid oracle needs qubits");
    for (std::size_t i = 0; i < ens.size(); ++i) {
      p_.push_back(ens.probabilities()[i]);
      r_.push_back(bloch_vector(ens.states()[i].matrix()));
    }
  }

  double operator()(const std::vector<Bloch>& m, double q) const {
    double info = 0.0;
    for (const Bloch& mj : m) {
      double py = 0.0;
      double joint = 0.0;
      for (std::size_t i = 0; i < p_.size(); ++i) {
        const double pji = q * 0.5 * (1.0 + dot(mj, r_[i]));
        py += p_[i] * pji;
        joint += p_[i] * plogp(pji);
      }
      info += joint - plogp(py);
    }
    return info;
  }

 private:
  std::vector<double> p_;
  std::vector<Bloch> r_;
};

// Three coplanar unit vectors at 120 degrees; plane normal (theta, phi),
// first vector rotated by alpha inside the plane.
std::vector<Bloch> trine_directions(double theta, double phi, double alpha) {
  const Bloch n = sphere_point(theta, phi);
  const Bloch e1 = {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi),
                    -std::sin(theta)};
  const Bloch e2 = {n[1] * e1[2] - n[2] * e1[1], n[2] * e1[0] - n[0] * e1[2],
                    n[0] * e1[1] - n[1] * e1[0]};
  std::vector<Bloch> out;
  for (int k = 0; k < 3; ++k) {
    const double a = alpha + 2.0 * kPi * k / 3.0;
    out.push_back({std::cos(a) * e1[0] + std::sin(a) * e2[0],
                   std::cos(a) * e1[1] + std::sin(a) * e2[1],
                   std::cos(a) * e1[2] + std::sin(a) * e2[2]});
  }
  return out;
}

struct Candidate {
  double value;
  std::array<double, 3> x;
};

void keep_best(std::vector<Candidate>& best, const Candidate& c, std::size_t k) {
  if (best.size() < k || c.value > best.back().value) {
    auto it = std::upper_bound(best.begin(), best.end(), c,
                               [](const Candidate& a, const Candidate& b) {
                                 return a.value > b.value;
                               });
    best.insert(it, c);
    if (best.size() > k) best.pop_back();
  }
}

// Refines the best points of a 3-parameter search, halving a local grid of
// +-2 cells until the spacing is at most `step`.
template <class F>
Candidate coarse_to_fine(F&& f, std::vector<Candidate> best, double spacing,
                         double step) {
  while (spacing > step) {
    spacing = std::max(step, spacing / 4.0);
    std::vector<Candidate> next;
    for (const Candidate& c : best) {
      for (int a = -8; a <= 8; ++a) {
        for (int b = -8; b <= 8; ++b) {
          for (int e = -8; e <= 8; ++e) {
            const std::array<double, 3> x = {c.x[0] + a * spacing, c.x[1] + b * spacing,
                                             c.x[2] + e * spacing};
            keep_best(next, {f(x), x}, best.size());
          }
        }
      }
    }
    best = std::move(next);
  }
  return best.front();
}

}  // namespace

MeasurementGridResult grid_accessible_info_2d(const Ensemble& ens, double step) {
  require_step(step);
  const MeasurementScorer score(ens);
  MeasurementGridResult res;

  const int nt = static_cast<int>(std::ceil(kPi / step));
  const int np = static_cast<int>(std::ceil(2.0 * kPi / step));
  for (int i = 0; i <= nt; ++i) {
    const double theta = kPi * i / nt;
    for (int j = 0; j < np; ++j) {
      const Bloch n = sphere_point(theta, 2.0 * kPi * j / np);
      const double v = score({n, {-n[0], -n[1], -n[2]}}, 1.0);
      if (v > res.value) {
        res.value = v;
        res.directions = {n, {-n[0], -n[1], -n[2]}};
      }
    }
  }

  auto trine = [&](const std::array<double, 3>& x) {
    return score(trine_directions(x[0], x[1], x[2]), 2.0 / 3.0);
  };
  const double coarse = std::max(step, 0.05);
  std::vector<Candidate> best;
  const int ct = static_cast<int>(std::ceil(kPi / coarse));
  const int cp = static_cast<int>(std::ceil(2.0 * kPi / coarse));
  const int ca = static_cast<int>(std::ceil(2.0 * kPi / 3.0 / coarse));
  for (int i = 0; i <= ct; ++i) {
    for (int j = 0; j < cp; ++j) {
      for (int k = 0; k < ca; ++k) {
        const std::array<double, 3> x = {kPi * i / ct, 2.0 * kPi * j / cp,
                                         2.0 * kPi / 3.0 * k / ca};
        keep_best(best, {trine(x), x}, 8);
      }
    }
  }
  const Candidate t = coarse_to_fine(trine, best, coarse, step);
  if (t.value > res.value) {
    res.value = t.value;
    res.directions = trine_directions(t.x[0], t.x[1], t.x[2]);
    res.trine_family = true;
  }
  return res;
}

DensityObjective parse_density_objective(const std::string& name) {
  if (name == "mutual-information") return DensityObjective::MutualInformation;
  if (name == "coherent-information") return DensityObjective::CoherentInformation;
  if (name == "rho-objective") return DensityObjective::RhoObjective;
  throw Error("unknown objective: " + name);
}

const char* to_string(DensityObjective f) {
  switch (f) {
    case DensityObjective::MutualInformation:
      return "mutual-information";
    case DensityObjective::CoherentInformation:
      return "coherent-information";
    case DensityObjective::RhoObjective:
      return "rho-objective";
  }
  return "?";
}

DensityGridResult grid_density_objective(const QuantumChannel& ch,
                                         DensityObjective f, double step,
                                         const HermitianMatrix* tau) {
  require_step(step);
  if (ch.dim_in() != 2) throw DimensionError("density grid oracle needs a qubit input");
  if (f == DensityObjective::RhoObjective && (tau == nullptr || tau->dim() != 2)) {
    throw Error("rho-objective needs a 2x2 tau");
  }
  auto clamp = [](std::array<double, 3> r) {
    const double len = std::sqrt(r[0] * r[0] + r[1] * r[1] + r[2] * r[2]);
    if (len > 1.0) {
      for (double& x : r) x /= len;
    }
    return r;
  };
  auto eval = [&](const std::array<double, 3>& x) {
    const Matrix rho = from_bloch(clamp(x));
    const double out = entropy_bits(apply_channel(ch, rho));
    switch (f) {
      case DensityObjective::MutualInformation:
        return entropy_bits(rho) + out - entropy_bits(apply_complementary(ch, rho));
      case DensityObjective::CoherentInformation:
        return out - entropy_bits(apply_complementary(ch, rho));
      case DensityObjective::RhoObjective:
        return out - (tau->matrix() * rho).trace().real();
    }
    return 0.0;
  };

  const double coarse = std::max(step, 0.05);
  const int n = static_cast<int>(std::ceil(1.0 / coarse));
  std::vector<Candidate> best;
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      for (int k = -n; k <= n; ++k) {
        const std::array<double, 3> x = {static_cast<double>(i) / n,
                                         static_cast<double>(j) / n,
                                         static_cast<double>(k) / n};
        if (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] > 1.0 + 2.0 * coarse) continue;
        keep_best(best, {eval(x), x}, 8);
      }
    }
  }
  const Candidate c = coarse_to_fine(eval, best, 1.0 / n, step);
  return DensityGridResult{c.value, DensityMatrix(from_bloch(clamp(c.x)))};
}

SimplexGridResult simplex_enumerate_chi(const QuantumChannel& ch,
                                        const std::vector<PureState>& states,
                                        double step) {
  require_step(step);
  if (states.empty() || states.size() > 4) {
    throw Error("simplex oracle takes between 1 and 4 states");
  }
  const int k = static_cast<int>(states.size());
  const int total = std::max(1, static_cast<int>(std::lround(1.0 / step)));
  std::vector<Matrix> outs;
  std::vector<double> ent;
  for (const auto& s : states) {
    if (s.dim() != ch.dim_in()) throw DimensionError("state dimension mismatch");
    outs.push_back(apply_channel(ch, s.projector()));
    ent.push_back(entropy_bits(outs.back()));
  }
  SimplexGridResult res{-1.0, {}};
  std::vector<int> c(k, 0);
  // Enumerate compositions of `total` into k parts.
  auto visit = [&](auto&& self, int idx, int left) -> void {
    if (idx == k - 1) {
      c[idx] = left;
      Matrix avg = Matrix::Zero(outs[0].rows(), outs[0].cols());
      double cond = 0.0;
      std::vector<double> p(k);
      for (int i = 0; i < k; ++i) {
        p[i] = static_cast<double>(c[i]) / total;
        avg += p[i] * outs[i];
        cond += p[i] * ent[i];
      }
      const double v = entropy_bits(avg) - cond;
      if (v > res.value) {
        res.value = v;
        res.p = p;
      }
      return;
    }
    for (int x = 0; x <= left; ++x) {
      c[idx] = x;
      self(self, idx + 1, left - x);
    }
  };
  visit(visit, 0, total);
  return res;
}

}  // namespace qcap::oracles
