#ifndef ACM_SOLVERS_HPP
#define ACM_SOLVERS_HPP

#include <utility>
#include <vector>

#include "acm/structures.hpp"

// Constructive solvers: nearby exactly-commuting structured pairs and
// nearby structured normal matrices, via spectral-gap clustering with a
// penalized Cayley-descent fallback.
namespace acm {

enum class SolveStatus { Converged, ClusterFallback, Failed };

const char* status_name(SolveStatus s);

struct SolveParams {
  double delta_max = 0.3;   // precondition on the input (self-)commutator
  double eps_budget = 0.5;  // clustering result beyond this triggers descent
  int scale_levels = 9;     // scale_k = sqrt(delta) * 2^-k, k = 0..levels-1
  bool enable_descent = true;
  int descent_max_inner = 40;
};

struct ApproximationResult {
  std::vector<StructuredMatrix> outputs;
  double epsilon = 0.0;  // max operator-norm distance to the inputs
  double residual = 0.0; // final (self-)commutator norm
  SolveStatus status = SolveStatus::Failed;
  int iterations = 0;    // descent steps taken (0 for pure clustering)
  std::vector<std::pair<int, int>> cluster_trace; // (scale level, cluster count)
};

// Partition of values into groups separated by consecutive gaps >= scale.
// Groups are returned as original indices, ordered by value.
std::vector<std::vector<int>> cluster_angles(const std::vector<double>& values,
                                             double scale);

// Nearby exactly-commuting pair of the same kind (RealOrthogonal or
// SymplecticUnitary). Commutation of Converged outputs is structural:
// the residual is roundoff only, independent of the input commutator.
ApproximationResult commuting_approximation(const StructuredMatrix& U,
                                            const StructuredMatrix& V,
                                            const SolveParams& params = {});

// Nearby normal contraction of the same kind (RealContraction or
// QuaternionicContraction), with ||X'|| <= 1 enforced by a radial rescale.
ApproximationResult nearest_normal(const StructuredMatrix& X,
                                   const SolveParams& params = {});

} // namespace acm

#endif
