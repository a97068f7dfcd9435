#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qcap/lp.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

using namespace qcap;
using namespace qcap::lp;

namespace {

LinearProgram make_lp(RealMatrix a, RealVector b, RealVector c, Sense s = Sense::Minimize) {
  LinearProgram lp;
  lp.A = std::move(a);
  lp.b = std::move(b);
  lp.c = std::move(c);
  lp.sense = s;
  return lp;
}

void check_certificates(const LinearProgram& lp, const LpSolution& sol) {
  REQUIRE(sol.optimal());
  double bnorm = lp.b.cwiseAbs().maxCoeff();
  CHECK((lp.A * sol.x - lp.b).cwiseAbs().maxCoeff() <= 1e-8 * (1 + bnorm));
  CHECK(sol.x.minCoeff() >= -1e-12);
  double cx = lp.c.dot(sol.x);
  CHECK(std::abs(cx - sol.y.dot(lp.b)) <= 1e-7 * (1 + std::abs(cx)));
  double sign = lp.sense == Sense::Minimize ? 1.0 : -1.0;
  for (Index j = 0; j < lp.cols(); ++j) {
    double rc = sign * (lp.c(j) - sol.y.dot(lp.A.col(j)));
    CHECK(rc >= -1e-7);
    CHECK(sol.x(j) * rc <= 1e-7);
  }
}

// Minimum over all feasible bases.
double brute_force(const LinearProgram& lp) {
  const Index m = lp.rows(), n = lp.cols();
  double best = std::numeric_limits<double>::infinity();
  std::vector<Index> pick(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) pick[static_cast<std::size_t>(i)] = i;
  while (true) {
    RealMatrix b(m, m);
    for (Index i = 0; i < m; ++i) b.col(i) = lp.A.col(pick[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<RealMatrix> lu(b);
    if (lu.isInvertible()) {
      RealVector xb = lu.solve(lp.b);
      if (xb.minCoeff() >= -1e-10) {
        double obj = 0;
        for (Index i = 0; i < m; ++i) obj += lp.c(pick[static_cast<std::size_t>(i)]) * xb(i);
        best = std::min(best, obj);
      }
    }
    Index k = m - 1;
    while (k >= 0 && pick[static_cast<std::size_t>(k)] == n - m + k) --k;
    if (k < 0) break;
    ++pick[static_cast<std::size_t>(k)];
    for (Index i = k + 1; i < m; ++i)
      pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("solve_lp small programs") {
  RealMatrix a(1, 1);
  a << 1;
  RealVector b(1), c(1);
  b << 1;
  c << 1;
  auto lp = make_lp(a, b, c);
  auto sol = solve_lp(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.x(0) == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.y(0) == doctest::Approx(1.0));

  RealMatrix a2(1, 2);
  a2 << 1, 1;
  RealVector c2(2);
  c2 << -1, -1;
  auto lp2 = make_lp(a2, b, c2);
  auto s2 = solve_lp(lp2);
  REQUIRE(s2.optimal());
  CHECK(s2.objective == doctest::Approx(-1.0));
  CHECK(s2.y(0) == doctest::Approx(-1.0));
  check_certificates(lp2, s2);

  auto lp3 = make_lp(a2, b, -c2, Sense::Maximize);
  auto s3 = solve_lp(lp3);
  CHECK(s3.objective == doctest::Approx(1.0));
  check_certificates(lp3, s3);
}

TEST_CASE("solve_lp reports infeasible and unbounded") {
  RealMatrix a(2, 2);
  a << 1, 1, 1, 1;
  RealVector b(2), c(2);
  b << 1, 2;
  c << 1, 1;
  CHECK(solve_lp(make_lp(a, b, c)).status == Status::Infeasible);

  RealMatrix a2(1, 2);
  a2 << 1, -1;
  RealVector b2(1), c2(2);
  b2 << 0;
  c2 << -1, 0;
  CHECK(solve_lp(make_lp(a2, b2, c2)).status == Status::Unbounded);
}

TEST_CASE("solve_lp matches vertex enumeration") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 30; ++trial) {
    RealMatrix a(5, 12);
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 12; ++j) a(i, j) = n(rng);
    RealVector x0(12), c(12);
    for (Index j = 0; j < 12; ++j) {
      x0(j) = u(rng);
      c(j) = u(rng);
    }
    auto lp = make_lp(a, a * x0, c);
    auto sol = solve_lp(lp);
    check_certificates(lp, sol);
    CHECK(sol.objective == doctest::Approx(brute_force(lp)).epsilon(1e-8));

    auto again = solve_lp(lp);
    CHECK(again.x == sol.x);
    CHECK(again.basis == sol.basis);
  }
}

TEST_CASE("solve_lp terminates on Klee-Minty") {
  const int n = 8;
  RealMatrix a = RealMatrix::Zero(n, 2 * n);
  RealVector b(n), c = RealVector::Zero(2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) a(i, j) = std::pow(2.0, i - j + 1);
    a(i, i) = 1;
    a(i, n + i) = 1;
    b(i) = std::pow(5.0, i + 1);
    c(i) = std::pow(2.0, n - 1 - i);
  }
  auto lp = make_lp(a, b, c, Sense::Maximize);
  auto sol = solve_lp(lp);
  REQUIRE(sol.optimal());
  CHECK(sol.iterations < 1'000'000);
  CHECK(sol.objective == doctest::Approx(std::pow(5.0, n)));
  check_certificates(lp, sol);
}

TEST_CASE("solve_lp warm start") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n;
  RealMatrix a(4, 10);
  for (Index i = 0; i < 4; ++i)
    for (Index j = 0; j < 10; ++j) a(i, j) = n(rng);
  RealVector x0 = RealVector::Constant(10, 0.5), c = RealVector::LinSpaced(10, 1, 3);
  auto lp = make_lp(a, a * x0, c);
  auto cold = solve_lp(lp);
  auto warm = solve_lp(lp, {}, &cold.basis);
  CHECK(warm.objective == doctest::Approx(cold.objective).epsilon(1e-12));
  CHECK(warm.iterations <= cold.iterations);
}

TEST_CASE("nnls") {
  RealMatrix a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  RealVector b(3);
  b << 1, 2, 3;
  RealVector x = nnls(a, b);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(2.0));

  b << -1, 2, 1;
  x = nnls(a, b);
  CHECK(x.minCoeff() >= 0);
  CHECK(x(0) == 0.0);
  CHECK(x(1) == doctest::Approx(1.5));
}

TEST_CASE("column_generation with nothing to price") {
  RealMatrix a(1, 2);
  a << 1, 1;
  RealVector b(1), c(2);
  b << 1;
  c << 2, 3;
  PricingFn none = [](const LpSolution&, const std::vector<std::size_t>&) {
    return PricingOutcome{};
  };
  auto r = column_generation(make_lp(a, b, c), {0, 1}, none);
  CHECK(r.converged);
  CHECK(r.rounds == 0);
  CHECK(r.solution.objective == doctest::Approx(2.0));

  RealMatrix bad(1, 1);
  bad << 1;
  RealVector neg(1), c1(1);
  neg << -1;
  c1 << 1;
  CHECK_THROWS_AS(column_generation(make_lp(bad, neg, c1), {0}, none), Error);
}

TEST_CASE("column_generation solves cutting stock") {
  const int roll = 10;
  const std::vector<int> width{3, 4, 5};
  RealVector demand(3);
  demand << 8, 6, 5;

  // Patterns a with sum w_i a_i <= roll; surplus columns turn >= into =.
  auto patterns = [&] {
    std::vector<RealVector> out;
    for (int x = 0; x * 3 <= roll; ++x)
      for (int y = 0; x * 3 + y * 4 <= roll; ++y)
        for (int z = 0; x * 3 + y * 4 + z * 5 <= roll; ++z) {
          if (x + y + z == 0) continue;
          RealVector p(3);
          p << x, y, z;
          out.push_back(p);
        }
    return out;
  }();

  LinearProgram full;
  full.A.resize(3, 0);
  full.b = demand;
  full.c.resize(0);
  for (int i = 0; i < 3; ++i) full.add_column(-RealVector::Unit(3, i), 0.0);
  for (const auto& p : patterns) full.add_column(p, 1.0);
  auto exact = solve_lp(full);
  REQUIRE(exact.optimal());

  LinearProgram master;
  master.A.resize(3, 0);
  master.b = demand;
  master.c.resize(0);
  std::vector<std::size_t> tags;
  for (int i = 0; i < 3; ++i) {
    master.add_column(-RealVector::Unit(3, i), 0.0);
    tags.push_back(0);
  }
  for (int i = 0; i < 3; ++i) {
    master.add_column(RealVector::Unit(3, i) * (roll / width[static_cast<std::size_t>(i)]), 1.0);
    tags.push_back(1);
  }
  PricingFn knapsack = [&](const LpSolution& sol, const std::vector<std::size_t>&) {
    PricingOutcome out;
    double best = std::numeric_limits<double>::infinity();
    const RealVector* arg = nullptr;
    for (const auto& p : patterns) {
      double rc = 1.0 - sol.y.dot(p);
      if (rc < best) {
        best = rc;
        arg = &p;
      }
    }
    out.best_reduced_cost = best;
    if (best < -1e-9) out.columns.push_back({*arg, 1.0, 1});
    return out;
  };
  auto r = column_generation(master, tags, knapsack);
  CHECK(r.converged);
  CHECK(r.solution.objective == doctest::Approx(exact.objective).epsilon(1e-8));
  for (std::size_t k = 1; k < r.objectives.size(); ++k)
    CHECK(r.objectives[k] <= r.objectives[k - 1] + 1e-9);
  check_certificates(r.master, r.solution);
  CHECK(r.tags.size() == static_cast<std::size_t>(r.master.cols()));
}

TEST_CASE("add_unique_column deduplicates") {
  LinearProgram lp;
  lp.A.resize(2, 0);
  lp.b = RealVector::Ones(2);
  lp.c.resize(0);
  RealVector col(2);
  col << 1, 2;
  CHECK(add_unique_column(lp, col, 1.0, 1e-9));
  CHECK_FALSE(add_unique_column(lp, col + RealVector::Constant(2, 1e-10), 1.0, 1e-9));
  CHECK(add_unique_column(lp, col + RealVector::Constant(2, 1e-6), 1.0, 1e-9));
  CHECK(lp.cols() == 2);
}
