#include "qcap/sphere.hpp"

#include <algorithm>
#include <cmath>

namespace qcap {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector random_unit_vector(Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim);
  do {
    for (Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
  } while (v.norm() < 1e-8);
  return fix_phase(v / v.norm());
}

std::vector<double> random_dirichlet(std::size_t n, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto& x : p) {
    x = expo(rng);
    total += x;
  }
  for (auto& x : p) x /= total;
  return p;
}

Matrix random_density(Index dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = Complex(normal(rng), normal(rng));
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

Vector fix_phase(const Vector& v) {
  Index best = 0;
  double mag = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > mag + 1e-12) {
      mag = a;
      best = i;
    }
  }
  if (mag <= 0.0) return v;
  const Complex phase = std::conj(v(best)) / std::abs(v(best));
  Vector out = v * phase;
  out(best) = Complex(std::abs(v(best)), 0.0);
  return out;
}

bool same_ray(const Vector& a, const Vector& b, double tol) {
  return std::norm(a.dot(b)) >= (1.0 - tol) * a.squaredNorm() * b.squaredNorm();
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return a.size() < b.size();
}

Vector tangent_part(const Vector& v, const Vector& g) {
  return g - v.dot(g).real() * v;
}

SphereMinimum sphere_minimize(const SphereFunction& f, const Vector& start,
                              const SphereDescentOptions& opts) {
  SphereMinimum out;
  Vector v = fix_phase(start / start.norm());
  ValueGradient fg = f(v);
  Vector g = tangent_part(v, fg.gradient);
  double step = opts.initial_step;

  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double gn2 = g.squaredNorm();
    if (std::sqrt(gn2) < opts.gradient_tol) break;

    bool accepted = false;
    Vector w;
    ValueGradient fw;
    while (step > 1e-14) {
      w = v - step * g;
      w /= w.norm();
      fw = f(w);
      if (fw.value <= fg.value - 1e-4 * step * gn2) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    // Keep the gauge; the objective is phase invariant so the gradient
    // rotates with the vector.
    const Vector fixed = fix_phase(w);
    const Complex phase = w.dot(fixed);
    const Vector g_new = tangent_part(fixed, phase * fw.gradient);

    // Barzilai-Borwein step for the next iteration.
    const Vector s = fixed - v;
    const Vector y = g_new - g;
    const double sy = s.dot(y).real();
    if (sy > 1e-18) {
      step = std::clamp(s.squaredNorm() / sy, 1e-6, 10.0);
    } else {
      step = std::min(step * 2.0, 10.0);
    }

    v = fixed;
    fg = fw;
    g = g_new;
  }

  out.v = v;
  out.value = fg.value;
  out.gradient_norm = g.norm();
  out.iterations = it;
  return out;
}

}  // namespace qcap
