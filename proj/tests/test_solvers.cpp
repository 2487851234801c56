#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "acm/ensembles.hpp"
#include "acm/rng.hpp"
#include "acm/solvers.hpp"
#include "acm/structures.hpp"
#include "oracles.hpp"

using namespace acm;

namespace {

std::pair<StructuredMatrix, StructuredMatrix> perturbed_pair(int dim,
                                                             StructureKind kind,
                                                             double eta,
                                                             std::uint64_t seed) {
  EnsembleSpec spec{dim, kind, 0.0, seed};
  auto [U, V] = commuting_pair(spec);
  return {perturb(U, eta, split_seed(seed, 1)), perturb(V, eta, split_seed(seed, 2))};
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

} // namespace

TEST_CASE("cluster_angles splits at obvious gaps") {
  auto groups = cluster_angles({0.0, 0.001, 1.0}, 0.1);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].size() == 2);
  CHECK(groups[1] == std::vector<int>{2});

  // equally spaced below the scale: one chain
  std::vector<double> chain;
  for (int i = 0; i < 20; ++i) chain.push_back(0.04 * i);
  CHECK(cluster_angles(chain, 0.05).size() == 1);
}

TEST_CASE("cluster_angles matches the quadratic gap-scan oracle") {
  Rng rng(30);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> values(100);
    for (double& v : values) v = rng.uniform(0.0, std::numbers::pi);
    const double scale = rng.uniform(0.01, 0.3);
    auto got = cluster_angles(values, scale);
    auto want = oracles::gap_scan_clusters(values, scale);
    REQUIRE(got.size() == want.size());
    for (std::size_t g = 0; g < got.size(); ++g) {
      auto a = got[g], b = want[g];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
    }
  }
}

TEST_CASE("exactly commuting pair is a fixed point") {
  for (StructureKind kind :
       {StructureKind::RealOrthogonal, StructureKind::SymplecticUnitary}) {
    EnsembleSpec spec{8, kind, 0.0, 4};
    auto [U, V] = commuting_pair(spec);
    auto r = commuting_approximation(U, V);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.epsilon <= 1e-10);
    CHECK(r.residual <= 1e-10);
  }
}

TEST_CASE("dim 8 real orthogonal pair at eta=0.01, seed 1") {
  auto [U, V] = perturbed_pair(8, StructureKind::RealOrthogonal, 0.01, 1);
  auto r = commuting_approximation(U, V);
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.residual <= 1e-10);
  CHECK(r.epsilon <= 0.2);
  REQUIRE(r.outputs.size() == 2);
  CHECK(validate(r.outputs[0]).ok);
  CHECK(validate(r.outputs[1]).ok);
  // epsilon self-consistency
  const double d0 = op_norm(Matrix(r.outputs[0].entries - U.entries));
  const double d1 = op_norm(Matrix(r.outputs[1].entries - V.entries));
  CHECK(r.epsilon == doctest::Approx(std::max(d0, d1)).epsilon(1e-12));
}

TEST_CASE("residual is roundoff-level independent of the input commutator") {
  for (double eta : {0.1, 0.02}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      auto [U, V] = perturbed_pair(8, StructureKind::RealOrthogonal, eta, seed);
      auto r = commuting_approximation(U, V);
      if (r.status != SolveStatus::Converged) continue;
      CHECK(r.residual <= 1e-10);
    }
  }
}

TEST_CASE("symplectic pairs converge with structure intact") {
  int converged = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto [U, V] = perturbed_pair(8, StructureKind::SymplecticUnitary, 0.02, seed);
    auto r = commuting_approximation(U, V);
    if (r.status != SolveStatus::Converged) continue;
    ++converged;
    CHECK(r.residual <= 1e-10);
    CHECK(validate(r.outputs[0]).ok);
    CHECK(validate(r.outputs[1]).ok);
    CHECK(r.outputs[0].kind == StructureKind::SymplecticUnitary);
  }
  CHECK(converged >= 19);
}

TEST_CASE("converged outputs are themselves a fixed point") {
  auto [U, V] = perturbed_pair(8, StructureKind::RealOrthogonal, 0.05, 2);
  auto r = commuting_approximation(U, V);
  REQUIRE(r.status == SolveStatus::Converged);
  auto r2 = commuting_approximation(r.outputs[0], r.outputs[1]);
  CHECK(r2.status == SolveStatus::Converged);
  CHECK(r2.epsilon <= 1e-10);
}

TEST_CASE("median epsilon is nonincreasing in the perturbation scale") {
  std::vector<double> medians;
  for (double eta : {0.1, 0.05, 0.025, 0.0125}) {
    std::vector<double> eps;
    int converged = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      auto [U, V] = perturbed_pair(16, StructureKind::RealOrthogonal, eta, seed);
      auto r = commuting_approximation(U, V);
      if (r.status == SolveStatus::Converged) ++converged;
      eps.push_back(r.epsilon);
    }
    CHECK(converged >= 48);
    medians.push_back(median(eps));
  }
  for (std::size_t i = 1; i < medians.size(); ++i)
    CHECK(medians[i] <= medians[i - 1] + 1e-12);
  CHECK(medians.back() < medians.front());
}

TEST_CASE("unsupported kinds and oversized commutators are rejected") {
  auto [U, V] = voiculescu_pair(6);
  StructuredMatrix Us{U, StructureKind::GeneralUnitary, 1e-10};
  StructuredMatrix Vs{V, StructureKind::GeneralUnitary, 1e-10};
  CHECK_THROWS_AS(commuting_approximation(Us, Vs), StructureError);

  // a genuine real-orthogonal pair whose commutator exceeds delta_max
  auto [U2, V2] = voiculescu_pair(2);
  StructuredMatrix Ur{U2, StructureKind::RealOrthogonal, 1e-10};
  StructuredMatrix Vr{V2, StructureKind::RealOrthogonal, 1e-10};
  CHECK_THROWS_AS(commuting_approximation(Ur, Vr), Error);

  EnsembleSpec spec{6, StructureKind::RealOrthogonal, 0.0, 1};
  auto [A, B] = commuting_pair(spec);
  auto [C, D] = commuting_pair(EnsembleSpec{8, StructureKind::RealOrthogonal, 0.0, 1});
  CHECK_THROWS_AS(commuting_approximation(A, C), DimensionError);
}

TEST_CASE("nearest_normal leaves normal inputs alone") {
  auto X = almost_normal(8, 0.0, StructureKind::RealContraction, 3);
  auto r = nearest_normal(X);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.epsilon <= 1e-10);

  auto Q = almost_normal(4, 0.0, StructureKind::QuaternionicContraction, 3);
  auto rq = nearest_normal(Q);
  CHECK(rq.status == SolveStatus::Converged);
  CHECK(rq.epsilon <= 1e-10);
}

TEST_CASE("nearest_normal 2x2 nilpotent matches the brute-force oracle") {
  Matrix X = Matrix::Zero(2, 2);
  X(0, 1) = 0.2;
  auto r = nearest_normal({X, StructureKind::RealContraction, 1e-10});
  REQUIRE(r.status == SolveStatus::Converged);
  RealMatrix Xr = X.real();
  const double oracle = oracles::nearest_normal_2x2_distance(Xr);
  CHECK(std::abs(r.epsilon - oracle) <= 0.02);
}

TEST_CASE("nearest_normal output contract over seeds and dims") {
  for (int dim : {8, 16}) {
    for (double delta : {0.05, 0.01}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto X = almost_normal(dim, delta, StructureKind::RealContraction, seed);
        auto r = nearest_normal(X);
        REQUIRE(r.outputs.size() == 1);
        CHECK(self_commutator_norm(r.outputs[0].entries) <= 1e-10);
        CHECK(op_norm(r.outputs[0].entries) <= 1.0 + 1e-12);
        CHECK(validate(r.outputs[0]).ok);
        CHECK(r.epsilon ==
              doctest::Approx(op_norm(Matrix(X.entries - r.outputs[0].entries)))
                  .epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("nearest_normal epsilon shrinks with the self-commutator") {
  for (int dim : {8, 16}) {
    std::vector<double> eps_large, eps_small;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      eps_large.push_back(
          nearest_normal(almost_normal(dim, 0.05, StructureKind::RealContraction, seed))
              .epsilon);
      eps_small.push_back(
          nearest_normal(almost_normal(dim, 0.01, StructureKind::RealContraction, seed))
              .epsilon);
    }
    CHECK(median(eps_small) < median(eps_large));
  }
}

TEST_CASE("nearest_normal quaternionic variant keeps the structure") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto X = almost_normal(8, 0.05, StructureKind::QuaternionicContraction, seed);
    auto r = nearest_normal(X);
    CHECK(r.residual <= 1e-10);
    CHECK(validate(r.outputs[0]).ok);
    CHECK(r.outputs[0].kind == StructureKind::QuaternionicContraction);
  }
}

TEST_CASE("nearest_normal rejects wrong kinds and non-contractions") {
  EnsembleSpec spec{4, StructureKind::RealOrthogonal, 0.0, 1};
  auto [U, V] = commuting_pair(spec);
  CHECK_THROWS_AS(nearest_normal(U), StructureError);

  Matrix big = 2.0 * Matrix::Identity(4, 4);
  CHECK_THROWS_AS(nearest_normal({big, StructureKind::RealContraction, 1e-10}),
                  StructureError);
}
