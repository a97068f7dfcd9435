#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "qcap/channels.hpp"
#include "qcap/info.hpp"

using namespace qcap;
using qcap::test::h2;
using qcap::test::real_vector;

namespace {

JointDistribution joint(std::initializer_list<std::initializer_list<double>> rows) {
  RealMatrix p(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (auto r : rows) {
    Index j = 0;
    for (double x : r) p(i, j++) = x;
    ++i;
  }
  return JointDistribution(p);
}

Povm anti_trine() {
  std::vector<PureState> w;
  for (const auto& v : channels::trine_states()) {
    const Vector& a = v.amplitudes();
    w.emplace_back(real_vector({-a(1).real(), a(0).real()}));
  }
  return Povm({2.0 / 3, 2.0 / 3, 2.0 / 3}, w);
}

}  // namespace

TEST_CASE("mutual_information") {
  CHECK(mutual_information(joint({{0.5, 0}, {0, 0.5}})) == doctest::Approx(1.0));
  CHECK(std::abs(mutual_information(joint({{0.12, 0.28}, {0.18, 0.42}}))) < 1e-12);
  double f = 0.11;
  auto bsc = joint({{(1 - f) / 2, f / 2}, {f / 2, (1 - f) / 2}});
  CHECK(mutual_information(bsc) == doctest::Approx(1 - h2(f)).epsilon(1e-12));

  Rng rng(1);
  for (int n = 0; n < 100; ++n) {
    RealMatrix p(3, 4);
    auto w = random_dirichlet(12, rng);
    for (Index k = 0; k < 12; ++k) p(k / 4, k % 4) = w[static_cast<std::size_t>(k)];
    JointDistribution j(p);
    CHECK(std::abs(mutual_information(j) - mutual_information_conditional_form(j)) < 1e-10);
  }

  RealMatrix bad(1, 2);
  bad << 1.1, -0.1;
  CHECK_THROWS_AS(JointDistribution{bad}, InvariantError);
}

TEST_CASE("holevo_chi") {
  Ensemble orth({0.5, 0.5}, {DensityMatrix(PureState::basis(2, 0)),
                             DensityMatrix(PureState::basis(2, 1))});
  CHECK(holevo_chi(orth) == doctest::Approx(1.0));
  Ensemble single({1.0}, {DensityMatrix::maximally_mixed(2)});
  CHECK(std::abs(holevo_chi(single)) < 1e-12);
  CHECK(holevo_chi(test::two_state_ensemble(std::numbers::pi / 3)) ==
        doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("accessible_information_given") {
  auto trine = channels::uniform_ensemble(channels::trine_states());
  CHECK(accessible_information_given(trine, anti_trine()) ==
        doctest::Approx(std::log2(3.0) - 1).epsilon(1e-12));

  double s = 1 / std::sqrt(2.0);
  Povm sym({1.0, 1.0}, {PureState(real_vector({s, s})), PureState(real_vector({s, -s}))});
  for (double theta : {0.3, std::numbers::pi / 4, std::numbers::pi / 3, 1.2}) {
    double want = 1 - h2(0.5 - std::sin(theta) / 2);
    CHECK(accessible_information_given(test::two_state_ensemble(theta), sym) ==
          doctest::Approx(want).epsilon(1e-12));
  }

  Povm trivial({1.0}, {PureState::basis(1, 0)});
  Ensemble scalar({0.5, 0.5}, {DensityMatrix(PureState::basis(1, 0)),
                               DensityMatrix(PureState::basis(1, 0))});
  CHECK(std::abs(accessible_information_given(scalar, trivial)) < 1e-12);

  Rng rng_dim(1);
  CHECK_THROWS_AS(accessible_information_given(trine, test::random_povm(3, 3, rng_dim)),
                  DimensionError);
}

TEST_CASE("Holevo bound") {
  Rng rng(500);
  for (int n = 0; n < 500; ++n) {
    Index d = 2 + n % 2;
    auto ens = test::random_ensemble(d, 2 + n % 3, rng);
    auto m = test::random_povm(d, d + n % 4, rng);
    REQUIRE(accessible_information_given(ens, m) <= holevo_chi(ens) + 1e-9);
  }
}

TEST_CASE("commuting ensembles reach chi in the common basis") {
  Rng rng(2);
  for (int n = 0; n < 20; ++n) {
    std::vector<DensityMatrix> states;
    for (int i = 0; i < 3; ++i) {
      auto w = random_dirichlet(3, rng);
      Matrix m = Matrix::Zero(3, 3);
      for (Index k = 0; k < 3; ++k) m(k, k) = w[static_cast<std::size_t>(k)];
      states.emplace_back(m);
    }
    Ensemble ens(random_dirichlet(3, rng), states);
    Povm basis({1, 1, 1}, {PureState::basis(3, 0), PureState::basis(3, 1), PureState::basis(3, 2)});
    CHECK(std::abs(accessible_information_given(ens, basis) - holevo_chi(ens)) < 1e-6);
  }
}

TEST_CASE("quantum mutual and coherent information") {
  auto id = channels::identity(2);
  auto mixed = DensityMatrix::maximally_mixed(2);
  CHECK(quantum_mutual_information(id, mixed) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(coherent_information(id, mixed) == doctest::Approx(1.0).epsilon(1e-12));

  auto dep = channels::depolarizing(0.3);
  auto pure = DensityMatrix(channels::trine_states()[1]);
  CHECK(std::abs(quantum_mutual_information(dep, pure)) < 1e-9);
  CHECK(std::abs(coherent_information(dep, pure)) < 1e-9);

  auto full = channels::depolarizing(0.75);
  CHECK(coherent_information(full, mixed) == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(quantum_mutual_information(dep, mixed) == doctest::Approx(0.6432203505529603).epsilon(1e-10));

  Rng rng(3);
  for (int n = 0; n < 50; ++n) {
    auto ch = channels::random_channel(2, 2 + n % 2, 1 + n % 4, rng);
    DensityMatrix rho(random_density(2, rng));
    double qmi = quantum_mutual_information(ch, rho);
    CHECK(std::abs(qmi - coherent_information(ch, rho) - von_neumann_entropy(rho)) < 1e-12);

    DensityMatrix r1(random_density(2, rng)), r2(random_density(2, rng));
    DensityMatrix mid(Matrix((r1.matrix() + r2.matrix()) / 2.0));
    double avg = (quantum_mutual_information(ch, r1) + quantum_mutual_information(ch, r2)) / 2;
    CHECK(quantum_mutual_information(ch, mid) >= avg - 1e-9);
  }

  CHECK_THROWS_AS(quantum_mutual_information(id, DensityMatrix::maximally_mixed(3)),
                  DimensionError);
}

TEST_CASE("limited_ea_objective") {
  Rng rng(4);
  auto ch = channels::amplitude_damping(0.3);
  DensityMatrix rho(random_density(2, rng));
  auto single = limited_ea_objective(ch, Ensemble({1.0}, {rho}));
  CHECK(single.value == doctest::Approx(quantum_mutual_information(ch, rho)).epsilon(1e-12));
  CHECK(single.avg_entropy == doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-12));

  PureEnsemble pe({0.2, 0.5, 0.3}, channels::trine_states());
  std::vector<DensityMatrix> outs;
  for (const auto& s : pe.states()) outs.push_back(apply_channel(ch, DensityMatrix(s)));
  double chi = holevo_chi(Ensemble(pe.probabilities(), outs));
  auto pure = limited_ea_objective(ch, pe.mixed());
  CHECK(pure.value == doctest::Approx(chi).epsilon(1e-9));
  CHECK(std::abs(pure.avg_entropy) < 1e-12);

  auto id = limited_ea_objective(channels::identity(2),
                                 Ensemble({1.0}, {DensityMatrix::maximally_mixed(2)}));
  CHECK(id.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(id.avg_entropy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("arimoto_blahut") {
  double f = 0.11;
  RealMatrix bsc(2, 2);
  bsc << 1 - f, f, f, 1 - f;
  auto r = arimoto_blahut(ClassicalChannel(bsc));
  CHECK(r.capacity == doctest::Approx(1 - h2(f)).epsilon(1e-9));
  CHECK(r.input[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(r.upper_bound - r.lower_bound < 1e-9);

  for (Index n : {2, 3, 5}) {
    auto c = arimoto_blahut(ClassicalChannel(RealMatrix::Identity(n, n)));
    CHECK(c.capacity == doctest::Approx(std::log2(static_cast<double>(n))).epsilon(1e-9));
  }

  RealMatrix erasure(2, 3);
  erasure << 0.75, 0.25, 0, 0, 0.25, 0.75;
  auto e = arimoto_blahut(ClassicalChannel(erasure));
  CHECK(e.capacity == doctest::Approx(0.75).epsilon(1e-9));

  RealMatrix skew(3, 3);
  skew << 0.7, 0.2, 0.1, 0.05, 0.9, 0.05, 0.3, 0.3, 0.4;
  auto s = arimoto_blahut(ClassicalChannel(skew));
  for (std::size_t k = 1; k < s.lower_bounds.size(); ++k)
    CHECK(s.lower_bounds[k] >= s.lower_bounds[k - 1] - 1e-15);

  RealMatrix bad(1, 2);
  bad << 0.5, 0.6;
  CHECK_THROWS_AS(ClassicalChannel{bad}, InvariantError);
}
