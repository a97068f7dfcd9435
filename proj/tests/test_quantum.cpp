#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "support.hpp"

#include "qcap/channels.hpp"
#include "qcap/quantum.hpp"

using namespace qcap;
using qcap::test::h2;
using qcap::test::real_vector;

namespace {

const double kS3 = std::sqrt(3.0);

Matrix naive_keep_a(const Matrix& rho, Index da, Index db) {
  Matrix out = Matrix::Zero(da, da);
  for (Index i = 0; i < da; ++i)
    for (Index j = 0; j < da; ++j)
      for (Index k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
  return out;
}

Matrix naive_keep_b(const Matrix& rho, Index da, Index db) {
  Matrix out = Matrix::Zero(db, db);
  for (Index i = 0; i < db; ++i)
    for (Index j = 0; j < db; ++j)
      for (Index k = 0; k < da; ++k) out(i, j) += rho(k * db + i, k * db + j);
  return out;
}

}  // namespace

TEST_CASE("validate_channel") {
  CHECK_NOTHROW(validate_channel({Matrix::Identity(2, 2)}));
  CHECK_NOTHROW(channels::depolarizing(0.3));

  try {
    validate_channel({Matrix::Identity(2, 2), Matrix::Identity(2, 2)});
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(e.defect() == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(validate_channel({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}),
                  DimensionError);
  CHECK_THROWS_AS(validate_channel({}), Error);
}

TEST_CASE("apply_channel") {
  Rng rng(11);
  DensityMatrix rho(random_density(2, rng));

  auto id = identity_channel(2);
  CHECK(max_abs(apply_channel(id, rho).matrix() - rho.matrix()) < 1e-14);

  // p = 1 depolarizing: (1 - 4p/3) rho + (2p/3) I.
  auto dep = channels::depolarizing(1.0);
  Matrix want = -rho.matrix() / 3.0 + (2.0 / 3.0) * Matrix::Identity(2, 2);
  CHECK(max_abs(apply_channel(dep, rho).matrix() - want) < 1e-12);

  auto flip = validate_channel({channels::pauli_x()});
  auto out = apply_channel(flip, DensityMatrix(PureState::basis(2, 0)));
  CHECK(max_abs(out.matrix() - PureState::basis(2, 1).projector()) < 1e-15);

  CHECK_THROWS_AS(apply_channel(id, DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST_CASE("apply_channel preserves trace and positivity") {
  Rng rng(2024);
  for (int n = 0; n < 1000; ++n) {
    Index din = 2 + n % 3;
    Index dout = 2 + (n / 3) % 3;
    int k = 1 + (n / 9) % 4;
    if (k * dout < din) k = static_cast<int>((din + dout - 1) / dout);
    auto ch = channels::random_channel(din, dout, k, rng);
    Matrix out = apply_channel(ch, Matrix(random_density(din, rng)));
    REQUIRE(std::abs(out.trace().real() - 1.0) < 1e-10);
    REQUIRE(test::min_eigenvalue(out) >= -1e-9);
  }
}

TEST_CASE("tensor") {
  auto e = tensor(PureState::basis(2, 0), PureState::basis(2, 1));
  CHECK(max_abs(e.amplitudes() - PureState::basis(4, 1).amplitudes()) < 1e-15);

  auto v1 = channels::trine_states()[1];
  auto vv = tensor(v1, v1);
  Vector want = real_vector({0.25, -kS3 / 4, -kS3 / 4, 0.75});
  CHECK(max_abs(vv.amplitudes() - want) < 1e-15);

  auto id4 = tensor(identity_channel(2), identity_channel(2));
  CHECK(id4.dim_in() == 4);
  CHECK(id4.dim_out() == 4);
  Rng rng(3);
  Matrix rho = random_density(4, rng);
  CHECK(max_abs(apply_channel(id4, rho) - rho) < 1e-14);
}

TEST_CASE("partial_trace") {
  Vector epr = real_vector({1, 0, 0, 1}) / std::sqrt(2.0);
  DensityMatrix bell{PureState(epr)};
  for (Keep keep : {Keep::A, Keep::B}) {
    auto r = partial_trace(bell, 2, 2, keep);
    CHECK(max_abs(r.matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-15);
  }

  Rng rng(5);
  DensityMatrix a(random_density(2, rng));
  DensityMatrix b(random_density(3, rng));
  auto ab = tensor(a, b);
  CHECK(max_abs(partial_trace(ab, 2, 3, Keep::A).matrix() - a.matrix()) < 1e-14);
  CHECK(max_abs(partial_trace(ab, 2, 3, Keep::B).matrix() - b.matrix()) < 1e-14);

  Matrix rho = random_density(6, rng);
  auto ka = partial_trace(DensityMatrix(rho), 2, 3, Keep::A);
  auto kb = partial_trace(DensityMatrix(rho), 2, 3, Keep::B);
  CHECK(max_abs(ka.matrix() - naive_keep_a(rho, 2, 3)) < 1e-14);
  CHECK(max_abs(kb.matrix() - naive_keep_b(rho, 2, 3)) < 1e-14);
  CHECK(std::abs(ka.matrix().trace().real() - 1.0) < 1e-12);
  CHECK(test::min_eigenvalue(kb.matrix()) >= -1e-12);

  CHECK_THROWS_AS(partial_trace(DensityMatrix(rho), 2, 2, Keep::A), DimensionError);
}

TEST_CASE("partial_trace is linear") {
  Rng rng(6);
  for (int n = 0; n < 20; ++n) {
    Matrix x = random_density(6, rng), y = random_density(6, rng);
    double t = 0.37;
    Matrix lhs = partial_trace(Matrix(t * x + (1 - t) * y), 3, 2, Keep::B);
    Matrix rhs = t * partial_trace(x, 3, 2, Keep::B) + (1 - t) * partial_trace(y, 3, 2, Keep::B);
    CHECK(max_abs(lhs - rhs) < 1e-14);
  }
}

TEST_CASE("shannon_entropy") {
  std::vector<double> half{0.5, 0.5}, det{1.0, 0.0};
  CHECK(shannon_entropy(half) == doctest::Approx(1.0));
  CHECK(shannon_entropy(det) == 0.0);
  std::vector<double> p{0.5 - kS3 / 4, 0.5 + kS3 / 4};
  CHECK(shannon_entropy(p) == doctest::Approx(1.0 - 0.64542109733473).epsilon(1e-12));
  std::vector<double> bad{1.5, -0.5};
  CHECK_THROWS_AS(shannon_entropy(bad), InvariantError);
}

TEST_CASE("von_neumann_entropy") {
  CHECK(von_neumann_entropy(DensityMatrix::maximally_mixed(2)) == doctest::Approx(1.0));
  CHECK(von_neumann_entropy(DensityMatrix(PureState::basis(3, 2))) == 0.0);

  double theta = std::numbers::pi / 3;
  DensityMatrix rho(test::two_state_ensemble(theta).average());
  CHECK(von_neumann_entropy(rho) == doctest::Approx(h2(0.5 - std::cos(theta) / 2)).epsilon(1e-12));
  CHECK(von_neumann_entropy(rho) == doctest::Approx(0.8112781244591328).epsilon(1e-12));
}

TEST_CASE("von_neumann_entropy properties") {
  Rng rng(7);
  for (int n = 0; n < 50; ++n) {
    DensityMatrix a(random_density(2, rng)), b(random_density(3, rng));
    double joint = von_neumann_entropy(tensor(a, b));
    CHECK(std::abs(joint - von_neumann_entropy(a) - von_neumann_entropy(b)) < 1e-9);

    Matrix u = test::random_unitary(3, rng);
    DensityMatrix rot(Matrix(u * b.matrix() * u.adjoint()));
    CHECK(std::abs(von_neumann_entropy(rot) - von_neumann_entropy(b)) < 1e-9);
  }
}

TEST_CASE("fidelity") {
  Rng rng(8);
  DensityMatrix r(random_density(3, rng)), s(random_density(3, rng));
  CHECK(fidelity(r, r) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(fidelity(r, s) - fidelity(s, r)) < 1e-9);

  auto e0 = PureState::basis(2, 0), e1 = PureState::basis(2, 1);
  CHECK(std::abs(fidelity(e0, e1)) < 1e-7);

  double theta = std::numbers::pi / 3;
  PureState v(real_vector({std::cos(theta), std::sin(theta)}));
  CHECK(fidelity(e0, v) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(pure_fidelity(e0, v) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("povm_probabilities") {
  auto srm = square_root_measurement(channels::trine_states());
  auto v0 = channels::trine_states()[0];
  std::vector<double> q = povm_probabilities(srm, v0);
  CHECK(q.size() == 3);
  double total = q[0] + q[1] + q[2];
  CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

  // Anti-trine POVM: w_i orthogonal to v_i, weights 2/3.
  std::vector<PureState> w;
  for (const auto& v : channels::trine_states()) {
    const Vector& a = v.amplitudes();
    w.emplace_back(real_vector({-a(1).real(), a(0).real()}));
  }
  Povm anti({2.0 / 3, 2.0 / 3, 2.0 / 3}, w);
  auto p = povm_probabilities(anti, v0);
  CHECK(std::abs(p[0]) < 1e-12);
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-12));

  Povm basis({1.0, 1.0}, {PureState::basis(2, 0), PureState::basis(2, 1)});
  Matrix diag = Matrix::Zero(2, 2);
  diag(0, 0) = 0.3;
  diag(1, 1) = 0.7;
  auto pd = povm_probabilities(basis, DensityMatrix(diag));
  CHECK(pd[0] == doctest::Approx(0.3));
  CHECK(pd[1] == doctest::Approx(0.7));

  CHECK_THROWS_AS(povm_probabilities(basis, DensityMatrix::maximally_mixed(3)), DimensionError);
}

TEST_CASE("purify") {
  auto phi = purify(DensityMatrix::maximally_mixed(2));
  CHECK(phi.dim() == 4);
  DensityMatrix pp(phi);
  CHECK(max_abs(partial_trace(pp, 2, 2, Keep::A).matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-14);
  CHECK(max_abs(partial_trace(pp, 2, 2, Keep::B).matrix() - Matrix::Identity(2, 2) / 2.0) < 1e-14);

  auto v = channels::trine_states()[1];
  auto pv = purify(DensityMatrix(v));
  CHECK(pv.dim() == 2);
  CHECK(pure_fidelity(pv, v) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(9);
  for (int n = 0; n < 20; ++n) {
    Index d = 2 + n % 3;
    DensityMatrix rho(random_density(d, rng));
    auto psi = purify(rho);
    Index r = psi.dim() / d;
    auto back = partial_trace(DensityMatrix(psi), d, r, Keep::A);
    CHECK(max_abs(back.matrix() - rho.matrix()) < 1e-9);
  }
}

TEST_CASE("joint output entropy does not depend on the reference basis") {
  Rng rng(10);
  auto ch = channels::amplitude_damping(0.3);
  DensityMatrix rho(random_density(2, rng));
  auto psi = purify(rho);
  Matrix u = test::random_unitary(2, rng);
  PureState rotated(Vector(kron(Matrix(Matrix::Identity(2, 2)), u) * psi.amplitudes()));
  auto big = tensor(ch, identity_channel(2));
  double a = von_neumann_entropy(apply_channel(big, DensityMatrix(psi)));
  double b = von_neumann_entropy(apply_channel(big, DensityMatrix(rotated)));
  CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("square_root_measurement") {
  std::vector<PureState> basis{PureState::basis(3, 0), PureState::basis(3, 2),
                               PureState::basis(3, 1)};
  auto m = square_root_measurement(basis);
  CHECK(m.completeness_defect() < 1e-9);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m.weights()[i] == doctest::Approx(1.0));
    CHECK(pure_fidelity(m.directions()[i], basis[i]) == doctest::Approx(1.0));
  }

  auto trine = square_root_measurement(channels::trine_states());
  CHECK(trine.size() == 3);
  CHECK(trine.completeness_defect() < 1e-9);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(trine.weights()[i] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(pure_fidelity(trine.directions()[i], channels::trine_states()[i]) ==
          doctest::Approx(1.0).epsilon(1e-12));
  }

  auto srm = square_root_measurement(channels::two_copy_trine_states());
  CHECK(srm.completeness_defect() < 1e-9);
  const auto& w = srm.directions();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i + 1; j < 3; ++j)
      CHECK(std::abs(w[i].amplitudes().dot(w[j].amplitudes())) < 1e-9);

  CHECK_THROWS_AS(square_root_measurement({}), Error);
}

TEST_CASE("hermitian coordinates") {
  auto c = hermitian_to_coords(HermitianMatrix::identity(2));
  CHECK(c.coords.size() == 4);
  CHECK(max_abs(Matrix(c.coords.cast<Complex>()) - Matrix(real_vector({1, 1, 0, 0}))) == 0.0);

  Rng rng(12);
  for (int n = 0; n < 50; ++n) {
    Index d = 1 + n % 4;
    HermitianMatrix a(test::random_hermitian(d, rng));
    HermitianMatrix b(test::random_hermitian(d, rng));
    auto ca = hermitian_to_coords(a);
    CHECK(max_abs(coords_to_hermitian(ca).matrix() - a.matrix()) < 1e-12);
    double tr = (a.matrix() * b.matrix()).trace().real();
    CHECK(std::abs(tr - ca.coords.dot(hermitian_to_coords(b).coords)) < 1e-10);
  }
}

TEST_CASE("value types reject invalid input") {
  CHECK_THROWS_AS(PureState(real_vector({1, 1})), InvariantError);
  Matrix nh(2, 2);
  nh << 1, 1, 0, 0;
  CHECK_THROWS_AS(HermitianMatrix{nh}, InvariantError);
  Matrix neg(2, 2);
  neg << 1.5, 0, 0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, InvariantError);
  CHECK_THROWS_AS(Povm({0.5}, {PureState::basis(2, 0)}), InvariantError);
}
