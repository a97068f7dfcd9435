#pragma once

// Projected-gradient descent on the complex unit sphere, used by the pricing
// searches. Gradients follow the real convention df = Re<g, dv>.

#include "qcap/linalg.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace qcap {

using Rng = std::mt19937_64;

/// splitmix64 of (seed, stream); distinct streams give independent seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

Vector random_unit_vector(Index dim, Rng& rng);
std::vector<double> random_dirichlet(std::size_t n, Rng& rng);
/// Haar-like random density matrix of full rank (Ginibre construction).
Matrix random_density(Index dim, Rng& rng);

/// Rotates the global phase so the largest-magnitude amplitude is real and
/// non-negative (first index wins ties).
Vector fix_phase(const Vector& v);

/// True when |<a,b>|^2 >= 1 - tol, i.e. the same ray.
bool same_ray(const Vector& a, const Vector& b, double tol = 1e-8);

/// Lexicographic comparison of amplitudes (real part, then imaginary).
bool lex_less(const Vector& a, const Vector& b);

struct ValueGradient {
  double value = 0.0;
  Vector gradient;
};

using SphereFunction = std::function<ValueGradient(const Vector&)>;

struct SphereDescentOptions {
  int max_iterations = 400;
  double gradient_tol = 1e-9;
  double initial_step = 0.25;
};

struct SphereMinimum {
  Vector v;
  double value = 0.0;
  double gradient_norm = 0.0;  // tangent component at v
  int iterations = 0;
};

/// Tangent part of a gradient at unit v: g - Re<v, g> v.
Vector tangent_part(const Vector& v, const Vector& g);

SphereMinimum sphere_minimize(const SphereFunction& f, const Vector& start,
                              const SphereDescentOptions& opts = {});

}  // namespace qcap
