#ifndef ACM_ENSEMBLES_HPP
#define ACM_ENSEMBLES_HPP

#include <cstdint>
#include <utility>

#include "acm/structures.hpp"

// Deterministic, seeded generators of structured test inputs. All
// randomness flows through acm::Rng, so identical (spec, seed) inputs
// reproduce identical matrices.
namespace acm {

struct GenerationError : Error {
  using Error::Error;
};

struct EnsembleSpec {
  int dim = 4;
  StructureKind kind = StructureKind::RealOrthogonal;
  double eta = 0.0;
  std::uint64_t seed = 0;
};

// Clock/shift pair: U = diag(w^0..w^{n-1}), V the cyclic shift with
// VU = wUV, w = e^{2 pi i / n}. The standard nonzero-index witness.
std::pair<Matrix, Matrix> voiculescu_pair(int n);

// Exactly commuting pair of the requested kind (RealOrthogonal,
// SymplecticUnitary or GeneralUnitary), conjugated by one random
// structure-preserving similarity. Commutator is roundoff-level.
std::pair<StructuredMatrix, StructuredMatrix> commuting_pair(const EnsembleSpec& spec);

// M -> M exp(eta K) with K a random unit-norm tangent direction of M's
// structure group. Keeps M's kind; distance to M is at most eta e^eta.
StructuredMatrix perturb(const StructuredMatrix& M, double eta, std::uint64_t seed);

// Almost-normal contraction with self-commutator norm inside
// [delta/2, delta], of kind RealContraction or QuaternionicContraction.
StructuredMatrix almost_normal(int dim, double delta, StructureKind kind,
                               std::uint64_t seed);

class Rng;

// Random unit-operator-norm tangent direction at the identity of the
// structure group: real antisymmetric for RealOrthogonal, skew-Hermitian
// quaternionic for SymplecticUnitary, skew-Hermitian for GeneralUnitary.
Matrix random_tangent(int dim, StructureKind kind, Rng& rng);

} // namespace acm

#endif
