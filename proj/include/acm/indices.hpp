#ifndef ACM_INDICES_HPP
#define ACM_INDICES_HPP

#include <utility>
#include <vector>

#include "acm/structures.hpp"

// Three independent routes to the Bott index obstruction of an
// almost-commuting unitary pair, plus the self-dual spectral pairing check.
namespace acm {

struct DegeneratePathError : Error {
  using Error::Error;
};
struct CommutatorTooLargeError : Error {
  using Error::Error;
};
struct NoSpectralGapError : Error {
  using Error::Error;
};

struct WindingResult {
  int winding = 0;
  double min_abs_det = 0.0;
  int samples_used = 0;
};

struct BottReport {
  int winding = 0;
  double trace_log = 0.0;
  int k_class = 0;
  double commutator = 0.0;
  double path_min_abs_det = 0.0;
  int samples_used = 0;
};

// Winding number of t -> det((1-t)UV + tVU). Requires ||UV - VU|| < 2.
// Adaptive bisection until consecutive argument steps are below pi/2,
// capped at 2^20 samples; |det| < 1e-12 raises DegeneratePathError.
WindingResult bott_winding(const Matrix& U, const Matrix& V,
                           int initial_samples = 64);

// (1 / 2 pi i) Tr Log(V U V* U*), unrounded.
double bott_trace_log(const Matrix& U, const Matrix& V);

// The 2n x 2n almost-projection e(U,V) built from the circle functions
// f, g, h applied to V. Hermitian always; an exact projection when UV = VU.
Matrix bott_projection(const Matrix& U, const Matrix& V);

// (count of eigenvalues above 1/2) minus n, for a Hermitian 2n x 2n input.
// Eigenvalues within gap_tol of 1/2 raise NoSpectralGapError.
int k_class(const Matrix& e, double gap_tol = 0.05);

struct PairingResult {
  bool paired = false;
  std::vector<std::pair<Complex, Complex>> pairs;
};

// Checks that the spectrum of a symplectic unitary is invariant under
// conjugation with matched multiplicities (greedy matching within tol).
PairingResult spectral_pairing_check(const Matrix& X, double tol = 1e-8);

// All three index routes plus diagnostics, as reported by the CLI.
BottReport bott_report(const Matrix& U, const Matrix& V);

} // namespace acm

#endif
