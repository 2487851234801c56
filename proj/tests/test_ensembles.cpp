#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "acm/ensembles.hpp"
#include "acm/rng.hpp"
#include "acm/structures.hpp"

using namespace acm;

TEST_CASE("voiculescu pair at n=2") {
  auto [U, V] = voiculescu_pair(2);
  CHECK(std::abs(U(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(U(1, 1) + 1.0) < 1e-15);
  CHECK(std::abs(V(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(V(1, 0) - 1.0) < 1e-15);
  CHECK(commutator_norm(U, V) == doctest::Approx(2.0));
}

TEST_CASE("voiculescu defining relation VU = wUV is exact") {
  for (int n : {2, 3, 5, 8, 13}) {
    auto [U, V] = voiculescu_pair(n);
    const Complex w = std::polar(1.0, 2.0 * std::numbers::pi / n);
    CHECK(op_norm(Matrix(V * U - w * (U * V))) < 1e-14);
  }
}

TEST_CASE("voiculescu commutator norm is 2 sin(pi/n)") {
  for (int n = 2; n <= 64; n += (n < 8 ? 1 : 7)) {
    auto [U, V] = voiculescu_pair(n);
    CHECK(commutator_norm(U, V) ==
          doctest::Approx(2.0 * std::sin(std::numbers::pi / n)).epsilon(1e-12));
  }
}

TEST_CASE("commuting pairs commute and validate for every kind") {
  for (StructureKind kind : {StructureKind::RealOrthogonal,
                             StructureKind::SymplecticUnitary,
                             StructureKind::GeneralUnitary}) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      EnsembleSpec spec{8, kind, 0.0, seed};
      auto [U, V] = commuting_pair(spec);
      CHECK(commutator_norm(U.entries, V.entries) <= 1e-12);
      CHECK(validate(U).ok);
      CHECK(validate(V).ok);
    }
  }
}

TEST_CASE("commuting pair supports odd-dimensional real orthogonal") {
  EnsembleSpec spec{7, StructureKind::RealOrthogonal, 0.0, 9};
  auto [U, V] = commuting_pair(spec);
  CHECK(commutator_norm(U.entries, V.entries) <= 1e-12);
  CHECK(validate(U).ok);
  CHECK_THROWS_AS(
      commuting_pair(EnsembleSpec{7, StructureKind::SymplecticUnitary, 0.0, 9}),
      DimensionError);
}

TEST_CASE("generation is bitwise deterministic") {
  EnsembleSpec spec{8, StructureKind::RealOrthogonal, 0.0, 42};
  auto [U1, V1] = commuting_pair(spec);
  auto [U2, V2] = commuting_pair(spec);
  CHECK((U1.entries - U2.entries).cwiseAbs().maxCoeff() == 0.0);
  CHECK((V1.entries - V2.entries).cwiseAbs().maxCoeff() == 0.0);

  auto X1 = almost_normal(8, 0.05, StructureKind::RealContraction, 7);
  auto X2 = almost_normal(8, 0.05, StructureKind::RealContraction, 7);
  CHECK((X1.entries - X2.entries).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("perturb basics") {
  EnsembleSpec spec{8, StructureKind::RealOrthogonal, 0.0, 5};
  auto [U, V] = commuting_pair(spec);
  CHECK((perturb(U, 0.0, 1).entries - U.entries).cwiseAbs().maxCoeff() == 0.0);

  const double eta = 0.1;
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto Up = perturb(U, eta, s);
    CHECK(op_norm(Matrix(Up.entries - U.entries)) <= eta * std::exp(eta));
    CHECK(validate(Up).ok);
  }
}

TEST_CASE("perturb keeps symplectic structure") {
  EnsembleSpec spec{8, StructureKind::SymplecticUnitary, 0.0, 5};
  auto [U, V] = commuting_pair(spec);
  auto Up = perturb(U, 0.2, 3);
  CHECK(validate(Up).ok);
  CHECK(op_norm(Matrix(Up.entries - U.entries)) <= 0.2 * std::exp(0.2));
}

TEST_CASE("perturbed commuting pair has commutator O(eta)") {
  const double eta = 0.01;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EnsembleSpec spec{8, StructureKind::RealOrthogonal, 0.0, seed};
    auto [U, V] = commuting_pair(spec);
    const double c = commutator_norm(perturb(U, eta, split_seed(seed, 1)).entries,
                                     perturb(V, eta, split_seed(seed, 2)).entries);
    CHECK(c <= 0.05);
  }
}

TEST_CASE("perturb composes within the exponential bound") {
  EnsembleSpec spec{6, StructureKind::RealOrthogonal, 0.0, 21};
  auto [U, V] = commuting_pair(spec);
  const double e1 = 0.1, e2 = 0.05;
  auto Up = perturb(perturb(U, e1, 31), e2, 32);
  CHECK(op_norm(Matrix(Up.entries - U.entries)) <=
        e1 * std::exp(e1) + e2 * std::exp(e2));
}

TEST_CASE("almost normal hits the commutator window") {
  auto X = almost_normal(16, 0.05, StructureKind::RealContraction, 7);
  const double c = self_commutator_norm(X.entries);
  CHECK(c >= 0.025);
  CHECK(c <= 0.05);
  CHECK(op_norm(X.entries) <= 1.0 + 1e-12);
  CHECK(validate(X).ok);
}

TEST_CASE("almost normal delta=0 path is exactly normal") {
  auto X = almost_normal(8, 0.0, StructureKind::RealContraction, 3);
  CHECK(self_commutator_norm(X.entries) < 1e-13);
  auto Q = almost_normal(8, 0.0, StructureKind::QuaternionicContraction, 3);
  CHECK(self_commutator_norm(Q.entries) < 1e-13);
  CHECK(validate(Q).ok);
}

TEST_CASE("almost normal quaternionic window and structure") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
    auto X = almost_normal(8, 0.08, StructureKind::QuaternionicContraction, seed);
    const double c = self_commutator_norm(X.entries);
    CHECK(c >= 0.04);
    CHECK(c <= 0.08);
    CHECK(op_norm(X.entries) <= 1.0 + 1e-12);
    CHECK(validate(X).ok);
  }
}

TEST_CASE("generator outputs validate at 1e-10 across seeds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EnsembleSpec spec{6, StructureKind::GeneralUnitary, 0.0, seed};
    auto [U, V] = commuting_pair(spec);
    CHECK(validate(U).ok);
    auto X = almost_normal(6, 0.1, StructureKind::RealContraction, seed);
    CHECK(validate(X).ok);
  }
}
