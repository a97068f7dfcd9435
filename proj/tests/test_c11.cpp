#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "qcap/c11.hpp"
#include "qcap/channels.hpp"
#include "qcap/info.hpp"

#include <set>

using namespace qcap;
using namespace qcap::c11;
using qcap::test::h2;
using qcap::test::real_vector;

namespace {

const double kTrineC11 = 0.64542109733473;
const double kLog3m1 = 0.5849625007211561;

std::vector<PureState> anti_trine_directions() {
  std::vector<PureState> w;
  for (const auto& v : channels::trine_states()) {
    const Vector& a = v.amplitudes();
    w.emplace_back(real_vector({-a(1).real(), a(0).real()}));
  }
  return w;
}

std::vector<PureState> symmetric_basis() {
  double s = 1 / std::sqrt(2.0);
  return {PureState(real_vector({s, s})), PureState(real_vector({s, -s}))};
}

HermitianMatrix duals_to_hermitian(const lp::LpSolution& sol, Index d) {
  return coords_to_hermitian(HermitianCoords{d, sol.y});
}

void check_c11(const QuantumChannel& ch, const Result& r) {
  CHECK(r.povm.completeness_defect() <= 1e-9);
  CHECK(std::abs(r.value - accessible_information_given(r.ensemble, r.povm)) < 1e-8);
  CHECK(r.value <= holevo_chi(r.ensemble) + 1e-8);
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    auto out = apply_channel(ch, DensityMatrix(r.inputs.states()[i]));
    CHECK(max_abs(out.matrix() - r.ensemble.states()[i].matrix()) < 1e-12);
  }
  for (const auto& rs : r.restarts) {
    CHECK(rs.holevo_gap_min >= -1e-9);
    for (std::size_t k = 1; k < rs.trace.size(); ++k) CHECK(rs.trace[k] >= rs.trace[k - 1] - 1e-9);
  }
}

}  // namespace

TEST_CASE("measurement_lp") {
  auto two = test::two_state_ensemble(std::numbers::pi / 3);
  std::vector<PureState> basis{PureState::basis(2, 0), PureState::basis(2, 1)};
  auto lb = lp::solve_lp(measurement_lp(two, basis));
  REQUIRE(lb.optimal());
  CHECK(lb.x(0) == doctest::Approx(1.0));
  CHECK(lb.x(1) == doctest::Approx(1.0));
  Povm pb({1.0, 1.0}, basis);
  CHECK(lb.objective == doctest::Approx(accessible_information_given(two, pb)).epsilon(1e-10));

  auto ls = lp::solve_lp(measurement_lp(two, symmetric_basis()));
  REQUIRE(ls.optimal());
  CHECK(ls.objective == doctest::Approx(kTrineC11).epsilon(1e-10));

  auto trine = channels::uniform_ensemble(channels::trine_states());
  auto dirs = anti_trine_directions();
  dirs.insert(dirs.end(), basis.begin(), basis.end());
  auto lt = lp::solve_lp(measurement_lp(trine, dirs));
  REQUIRE(lt.optimal());
  CHECK(lt.objective == doctest::Approx(kLog3m1).epsilon(1e-10));
  for (Index j = 0; j < 3; ++j) CHECK(lt.x(j) == doctest::Approx(2.0 / 3).epsilon(1e-9));
  for (Index j = 3; j < 5; ++j) CHECK(std::abs(lt.x(j)) < 1e-9);

  auto span = lp::solve_lp(measurement_lp(two, {PureState::basis(2, 0)}));
  CHECK(span.status == lp::Status::Infeasible);
}

TEST_CASE("outcome coefficient gradient matches finite differences") {
  Rng rng(1);
  const double h = 1e-5;
  std::normal_distribution<double> n;
  for (int k = 0; k < 100; ++k) {
    Index d = 2 + k % 2;
    auto ens = test::random_ensemble(d, 3, rng);
    Vector w = random_unit_vector(d, rng);
    Vector dir(d);
    for (Index i = 0; i < d; ++i) dir(i) = Complex(n(rng), n(rng));
    double fd = (outcome_coefficient(ens, w + h * dir) - outcome_coefficient(ens, w - h * dir)) / (2 * h);
    double an = outcome_coefficient_gradient(ens, w).dot(dir).real();
    CHECK(std::abs(fd - an) <= 1e-5 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("measurement_pricing") {
  auto trine = channels::uniform_ensemble(channels::trine_states());
  CHECK(measurement_pricing(trine, HermitianMatrix(Matrix(10.0 * Matrix::Identity(2, 2))), 8, 1)
            .directions.empty());
  auto zero = measurement_pricing(trine, HermitianMatrix::zero(2), 8, 1);
  CHECK_FALSE(zero.directions.empty());
  for (std::size_t k = 0; k < zero.directions.size(); ++k) {
    CHECK(zero.violations[k] > 1e-7);
    if (k > 0) CHECK(zero.violations[k] <= zero.violations[k - 1]);
  }

  auto dirs = anti_trine_directions();
  dirs.push_back(PureState::basis(2, 0));
  dirs.push_back(PureState::basis(2, 1));
  auto sol = lp::solve_lp(measurement_lp(trine, dirs));
  auto lambda = duals_to_hermitian(sol, 2);
  auto opt = measurement_pricing(trine, lambda, 16, 2);
  CHECK(opt.directions.empty());
  CHECK(opt.best_violation <= 1e-7);

  // Dense angle grid over real directions confirms the certificate.
  double worst = -1.0;
  for (int k = 0; k < 31416; ++k) {
    double a = k * 1e-4;
    Vector w = real_vector({std::cos(a), std::sin(a)});
    double v = outcome_coefficient(trine, w) - (w.adjoint() * lambda.matrix() * w)(0).real();
    worst = std::max(worst, v);
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("optimize_measurement") {
  for (double theta : {std::numbers::pi / 6, std::numbers::pi / 4, std::numbers::pi / 3}) {
    auto r = optimize_measurement(test::two_state_ensemble(theta));
    CHECK(r.converged);
    CHECK(r.povm.completeness_defect() <= 1e-9);
    CHECK(r.value == doctest::Approx(1 - h2(0.5 - std::sin(theta) / 2)).epsilon(1e-4));
  }

  auto trine = optimize_measurement(channels::uniform_ensemble(channels::trine_states()));
  CHECK(std::abs(trine.value - kLog3m1) < 1e-4);

  auto states = channels::two_copy_trine_states();
  auto ens = channels::uniform_ensemble(states);
  double srm = accessible_information_given(ens, square_root_measurement(states));
  auto two = optimize_measurement(ens);
  CHECK(two.povm.completeness_defect() <= 1e-9);
  CHECK(std::abs(two.value - 1.369) < 2e-3);
  CHECK(two.value >= srm - 1e-6);
}

TEST_CASE("refit_povm restores completeness") {
  Rng rng(4);
  auto m = test::random_povm(3, 6, rng);
  auto w = m.weights();
  for (auto& q : w) q *= 1.0 + 1e-5;
  auto fixed = refit_povm(m.directions(), w);
  CHECK(fixed.completeness_defect() <= 1e-9);
}

TEST_CASE("induced_classical_channel") {
  std::vector<PureState> basis{PureState::basis(2, 0), PureState::basis(2, 1)};
  auto ind = induced_classical_channel(channels::identity(2), Povm({1.0, 1.0}, basis));
  for (Index k = 0; k < 2; ++k) {
    auto out = apply_channel(ind, DensityMatrix(PureState::basis(2, k)));
    CHECK(max_abs(out.matrix() - PureState::basis(2, k).projector()) < 1e-14);
  }

  Povm anti({2.0 / 3, 2.0 / 3, 2.0 / 3}, anti_trine_directions());
  auto trine = induced_classical_channel(channels::identity(2), anti);
  auto out = apply_channel(trine, DensityMatrix(channels::trine_states()[0])).matrix();
  CHECK(std::abs(out(0, 0)) < 1e-12);
  CHECK(out(1, 1).real() == doctest::Approx(0.5));
  CHECK(out(2, 2).real() == doctest::Approx(0.5));
  CHECK(max_abs(out - Matrix(out.diagonal().asDiagonal())) < 1e-14);

  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    auto ch = channels::random_channel(2, 2, 2, rng);
    auto m = test::random_povm(2, 3, rng);
    auto ens = test::random_ensemble(2, 3, rng);
    std::vector<DensityMatrix> outs, diag;
    for (const auto& s : ens.states()) {
      outs.push_back(apply_channel(ch, s));
      diag.push_back(apply_channel(induced_classical_channel(ch, m), s));
    }
    double chi = holevo_chi(Ensemble(ens.probabilities(), diag));
    double mi = accessible_information_given(Ensemble(ens.probabilities(), outs), m);
    CHECK(std::abs(chi - mi) < 1e-10);
  }

  CHECK_THROWS_AS(induced_classical_channel(channels::identity(3), anti), DimensionError);
}

TEST_CASE("c11 on the trine") {
  Options o;
  o.restarts = 8;
  o.seed = 7;
  auto ch = channels::identity(2);
  auto r = c11::c11(ch, channels::trine_states(), o);
  CHECK(r.value == doctest::Approx(kTrineC11).epsilon(5e-4));
  check_c11(ch, r);
  std::set<long> distinct;
  for (const auto& rs : r.restarts) distinct.insert(std::lround(rs.value * 1e4));
  CHECK(distinct.size() >= 2);
  CHECK(r.restarts_used == 8);
}

TEST_CASE("c11 on two states and the identity") {
  double theta = std::numbers::pi / 3;
  auto ch = channels::identity(2);
  Options o;
  o.restarts = 3;
  auto two = c11::c11(ch, channels::two_states(theta), o);
  CHECK(two.value == doctest::Approx(1 - h2(0.5 - std::sin(theta) / 2)).epsilon(1e-6));
  check_c11(ch, two);
  for (double p : two.inputs.probabilities()) CHECK(p == doctest::Approx(0.5).epsilon(1e-4));

  auto id = c11::c11(ch, std::nullopt, o);
  CHECK(id.value == doctest::Approx(1.0).epsilon(1e-6));
  check_c11(ch, id);
}
