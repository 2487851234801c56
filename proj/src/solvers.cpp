#include "acm/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

namespace acm {

namespace {

constexpr double kResidualTol = 1e-10;
constexpr double kDeltaFloor = 1e-8;

struct Candidate {
  Matrix U2, V2; // V2 unused for nearest_normal
  double eps = 0.0;
  double residual = 0.0;
  int clusters = 0;
};

double smallest_singular_value(const Matrix& M) {
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

// In-basis quaternionic projection w.r.t. the standard form [[0,-I],[I,0]].
Matrix qproj_std(const Matrix& M) {
  const Eigen::Index d = M.rows();
  Matrix G = symplectic_form(d);
  return 0.5 * (M - G * M.conjugate() * G);
}

// Projection onto matrices commuting with W, where W^2 = -I.
Matrix commute_project(const Matrix& M, const Matrix& W) {
  return 0.5 * (M - W * M * W);
}

std::vector<double> folded_angles(const RealVector& cosines) {
  std::vector<double> theta(cosines.size());
  for (Eigen::Index j = 0; j < cosines.size(); ++j)
    theta[j] = std::acos(std::clamp(cosines(j), -1.0, 1.0));
  return theta;
}

// ---------------------------------------------------------------------------
// Clustering snap: real orthogonal pair.
// ---------------------------------------------------------------------------

std::optional<Candidate> real_candidate(const Matrix& Uc, const Matrix& Vc,
                                        double scale) {
  const Eigen::Index n = Uc.rows();
  const RealMatrix U = Uc.real();
  const RealMatrix V = Vc.real();
  const RealMatrix S = 0.5 * (U + U.transpose());
  const RealMatrix A = 0.5 * (U - U.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(S);
  if (es.info() != Eigen::Success) return std::nullopt;
  const std::vector<double> theta = folded_angles(es.eigenvalues());
  const auto groups = cluster_angles(theta, scale);

  RealMatrix U2 = RealMatrix::Zero(n, n);
  RealMatrix V2 = RealMatrix::Zero(n, n);
  for (const auto& g : groups) {
    const Eigen::Index d = static_cast<Eigen::Index>(g.size());
    RealMatrix Q(n, d);
    double tmin = std::numbers::pi, tmax = 0.0, tsum = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      Q.col(k) = es.eigenvectors().col(g[k]);
      tmin = std::min(tmin, theta[g[k]]);
      tmax = std::max(tmax, theta[g[k]]);
      tsum += theta[g[k]];
    }
    const double tbar = tsum / static_cast<double>(d);
    const bool at_zero = tmin <= 0.5 * scale;
    const bool at_pi = std::numbers::pi - tmax <= 0.5 * scale;

    if (at_zero || at_pi) {
      const double sign = (at_zero && at_pi) ? (tbar < std::numbers::pi / 2 ? 1.0 : -1.0)
                                             : (at_zero ? 1.0 : -1.0);
      U2 += sign * Q * Q.transpose();
      RealMatrix VP = Q.transpose() * V * Q;
      try {
        VP = project_to_orthogonal(VP);
      } catch (const RankError&) {
        VP = RealMatrix::Identity(d, d); // singular compression
      }
      V2 += Q * VP * Q.transpose();
      continue;
    }

    if (d % 2 != 0) return std::nullopt; // no real rotation on odd dimension
    RealMatrix AP = Q.transpose() * A * Q;
    const double sb = std::sin(tbar);
    if (smallest_singular_value(AP.cast<Complex>()) < 0.1 * sb) return std::nullopt;
    RealMatrix W;
    try {
      W = project_to_orthogonal(AP);
      W = project_to_orthogonal(RealMatrix(0.5 * (W - W.transpose())));
    } catch (const RankError&) {
      return std::nullopt;
    }
    U2 += Q * (std::cos(tbar) * RealMatrix::Identity(d, d) + sb * W) * Q.transpose();

    RealMatrix VP = Q.transpose() * V * Q;
    VP = 0.5 * (VP - W * VP * W); // commute with W, hence with the rotation
    try {
      VP = project_to_orthogonal(VP);
    } catch (const RankError&) {
      VP = RealMatrix::Identity(d, d);
    }
    VP = project_to_orthogonal(RealMatrix(0.5 * (VP - W * VP * W)));
    V2 += Q * VP * Q.transpose();
  }

  Candidate c;
  c.U2 = U2.cast<Complex>();
  c.V2 = V2.cast<Complex>();
  c.eps = std::max(op_norm(RealMatrix(U - U2)), op_norm(RealMatrix(V - V2)));
  c.residual = commutator_norm(c.U2, c.V2);
  c.clusters = static_cast<int>(groups.size());
  return c;
}

// ---------------------------------------------------------------------------
// Clustering snap: symplectic unitary pair.
// ---------------------------------------------------------------------------

std::optional<Candidate> symplectic_candidate(const Matrix& U, const Matrix& V,
                                              double scale) {
  const Eigen::Index n = U.rows();
  const Matrix H = 0.5 * (U + U.adjoint());
  const Matrix A = 0.5 * (U - U.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) return std::nullopt;
  const std::vector<double> theta = folded_angles(es.eigenvalues());
  const auto groups = cluster_angles(theta, scale);

  Matrix U2 = Matrix::Zero(n, n);
  Matrix V2 = Matrix::Zero(n, n);
  for (const auto& g : groups) {
    const Eigen::Index d = static_cast<Eigen::Index>(g.size());
    if (d % 2 != 0) return std::nullopt; // Kramers degeneracy was split
    Matrix raw(n, d);
    double tmin = std::numbers::pi, tmax = 0.0, tsum = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      raw.col(k) = es.eigenvectors().col(g[k]);
      tmin = std::min(tmin, theta[g[k]]);
      tmax = std::max(tmax, theta[g[k]]);
      tsum += theta[g[k]];
    }
    const double tbar = tsum / static_cast<double>(d);
    Matrix B;
    try {
      B = quaternionic_basis(raw);
    } catch (const Error&) {
      return std::nullopt;
    }
    const bool at_zero = tmin <= 0.5 * scale;
    const bool at_pi = std::numbers::pi - tmax <= 0.5 * scale;

    Matrix VP = B.adjoint() * V * B;
    if (at_zero || at_pi) {
      const double sign = (at_zero && at_pi) ? (tbar < std::numbers::pi / 2 ? 1.0 : -1.0)
                                             : (at_zero ? 1.0 : -1.0);
      U2 += sign * B * B.adjoint();
      Matrix VPs = qproj_std(VP);
      try {
        VPs = polar_unitary(VPs);
      } catch (const RankError&) {
        VPs = Matrix::Identity(d, d);
      }
      VPs = polar_unitary(qproj_std(VPs));
      V2 += B * VPs * B.adjoint();
      continue;
    }

    Matrix AP = B.adjoint() * A * B;
    const double sb = std::sin(tbar);
    if (smallest_singular_value(AP) < 0.1 * sb) return std::nullopt;
    Matrix W;
    try {
      W = polar_unitary(AP);
      W = polar_unitary(qproj_std(Matrix(0.5 * (W - W.adjoint()))));
    } catch (const RankError&) {
      return std::nullopt;
    }
    U2 += B * (std::cos(tbar) * Matrix::Identity(d, d) + sb * W) * B.adjoint();

    Matrix VPs = qproj_std(commute_project(qproj_std(commute_project(VP, W)), W));
    try {
      VPs = polar_unitary(VPs);
    } catch (const RankError&) {
      VPs = Matrix::Identity(d, d);
    }
    V2 += B * VPs * B.adjoint();
  }

  Candidate c;
  c.U2 = U2;
  c.V2 = V2;
  c.eps = std::max(op_norm(Matrix(U - U2)), op_norm(Matrix(V - V2)));
  c.residual = commutator_norm(c.U2, c.V2);
  c.clusters = static_cast<int>(groups.size());
  return c;
}

// ---------------------------------------------------------------------------
// Penalized Cayley descent fallback.
// ---------------------------------------------------------------------------

Matrix cayley(const Matrix& B) {
  const Eigen::Index n = B.rows();
  const Matrix I = Matrix::Identity(n, n);
  return Eigen::PartialPivLU<Matrix>(I - 0.5 * B).solve(I + 0.5 * B);
}

// Projects a raw gradient onto the tangent direction at Q (anti-Hermitian
// after right-translation; additionally quaternionic in the symplectic case).
Matrix tangent_direction(const Matrix& G, const Matrix& Q, bool quaternionic) {
  Matrix A = G * Q.adjoint() - Q * G.adjoint();
  if (quaternionic) A = quaternionic_project(A);
  return A;
}

int descend(const Matrix& U, const Matrix& V, Matrix& U2, Matrix& V2,
            bool quaternionic, int max_inner) {
  auto objective = [&](const Matrix& Ux, const Matrix& Vx, double mu) {
    return (Ux - U).squaredNorm() + (Vx - V).squaredNorm() +
           mu * (Ux * Vx - Vx * Ux).squaredNorm();
  };
  int steps = 0;
  for (double mu = 1.0; mu <= 65536.0; mu *= 2.0) {
    double tau = 0.1;
    for (int it = 0; it < max_inner; ++it) {
      const Matrix C = U2 * V2 - V2 * U2;
      const Matrix Gu = 2.0 * (U2 - U) + 2.0 * mu * (C * V2.adjoint() - V2.adjoint() * C);
      const Matrix Gv = 2.0 * (V2 - V) + 2.0 * mu * (U2.adjoint() * C - C * U2.adjoint());
      const Matrix Au = tangent_direction(Gu, U2, quaternionic);
      const Matrix Av = tangent_direction(Gv, V2, quaternionic);
      const double gnorm = std::sqrt(Au.squaredNorm() + Av.squaredNorm());
      if (gnorm < 1e-12) break;
      const double f0 = objective(U2, V2, mu);
      bool moved = false;
      for (int bt = 0; bt < 30; ++bt) {
        const Matrix Un = cayley(Matrix(-tau * Au)) * U2;
        const Matrix Vn = cayley(Matrix(-tau * Av)) * V2;
        if (objective(Un, Vn, mu) < f0 - 1e-4 * tau * gnorm * gnorm) {
          U2 = Un;
          V2 = Vn;
          tau = std::min(1.0, tau * 1.5);
          moved = true;
          break;
        }
        tau *= 0.5;
      }
      ++steps;
      if (!moved) break;
    }
  }
  return steps;
}

// ---------------------------------------------------------------------------
// Clustering snap: nearest normal.
// ---------------------------------------------------------------------------

std::optional<Candidate> normal_candidate(const Matrix& Xc, StructureKind kind,
                                          double scale) {
  const Eigen::Index n = Xc.rows();
  Candidate c;
  if (kind == StructureKind::RealContraction) {
    const RealMatrix X = Xc.real();
    const RealMatrix S = 0.5 * (X + X.transpose());
    const RealMatrix K = 0.5 * (X - X.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(S);
    if (es.info() != Eigen::Success) return std::nullopt;
    std::vector<double> vals(es.eigenvalues().data(),
                             es.eigenvalues().data() + n);
    const auto groups = cluster_angles(vals, scale);
    RealMatrix X2 = RealMatrix::Zero(n, n);
    for (const auto& g : groups) {
      const Eigen::Index d = static_cast<Eigen::Index>(g.size());
      RealMatrix Q(n, d);
      double ssum = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        Q.col(k) = es.eigenvectors().col(g[k]);
        ssum += vals[g[k]];
      }
      const double sbar = ssum / static_cast<double>(d);
      RealMatrix KP = Q.transpose() * K * Q;
      KP = 0.5 * (KP - KP.transpose());
      // scalar + antisymmetric is normal on each block
      X2 += Q * (sbar * RealMatrix::Identity(d, d) + KP) * Q.transpose();
    }
    const double nu = op_norm(X2);
    if (nu > 1.0) X2 /= nu;
    c.U2 = X2.cast<Complex>();
    c.eps = op_norm(RealMatrix(X - X2));
    c.clusters = static_cast<int>(groups.size());
  } else {
    const Matrix& X = Xc;
    const Matrix S = 0.5 * (X + X.adjoint());
    const Matrix K = 0.5 * (X - X.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success) return std::nullopt;
    std::vector<double> vals(es.eigenvalues().data(),
                             es.eigenvalues().data() + n);
    const auto groups = cluster_angles(vals, scale);
    Matrix X2 = Matrix::Zero(n, n);
    for (const auto& g : groups) {
      const Eigen::Index d = static_cast<Eigen::Index>(g.size());
      if (d % 2 != 0) return std::nullopt;
      Matrix raw(n, d);
      double ssum = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        raw.col(k) = es.eigenvectors().col(g[k]);
        ssum += vals[g[k]];
      }
      const double sbar = ssum / static_cast<double>(d);
      Matrix B;
      try {
        B = quaternionic_basis(raw);
      } catch (const Error&) {
        return std::nullopt;
      }
      Matrix KP = B.adjoint() * K * B;
      KP = qproj_std(Matrix(0.5 * (KP - KP.adjoint())));
      X2 += B * (sbar * Matrix::Identity(d, d) + KP) * B.adjoint();
    }
    const double nu = op_norm(X2);
    if (nu > 1.0) X2 /= nu;
    c.U2 = X2;
    c.eps = op_norm(Matrix(X - X2));
    c.clusters = static_cast<int>(groups.size());
  }
  c.residual = self_commutator_norm(c.U2);
  return c;
}

std::vector<double> scale_schedule(double delta, int levels) {
  const double base = std::sqrt(std::max(delta, kDeltaFloor));
  std::vector<double> scales(levels);
  for (int k = 0; k < levels; ++k) scales[k] = base * std::ldexp(1.0, -k);
  return scales;
}

} // namespace

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::ClusterFallback: return "ClusterFallback";
    case SolveStatus::Failed: return "Failed";
  }
  return "unknown";
}

std::vector<std::vector<int>> cluster_angles(const std::vector<double>& values,
                                             double scale) {
  if (scale <= 0.0) throw Error("cluster_angles: scale must be positive");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || values[order[i]] - values[order[i - 1]] >= scale)
      groups.emplace_back();
    groups.back().push_back(order[i]);
  }
  return groups;
}

ApproximationResult commuting_approximation(const StructuredMatrix& U,
                                            const StructuredMatrix& V,
                                            const SolveParams& params) {
  if (U.kind != V.kind || (U.kind != StructureKind::RealOrthogonal &&
                           U.kind != StructureKind::SymplecticUnitary))
    throw StructureError("commuting_approximation: pair must share kind "
                         "RealOrthogonal or SymplecticUnitary");
  if (U.dim() != V.dim())
    throw DimensionError("commuting_approximation: dimension mismatch");
  if (!validate(U).ok || !validate(V).ok)
    throw StructureError("commuting_approximation: inputs fail structure validation");
  const double delta = commutator_norm(U.entries, V.entries);
  if (delta > params.delta_max)
    throw Error("commuting_approximation: input commutator exceeds delta_max");

  const bool symplectic = U.kind == StructureKind::SymplecticUnitary;
  auto snap = [&](const Matrix& Ux, const Matrix& Vx, double scale) {
    return symplectic ? symplectic_candidate(Ux, Vx, scale)
                      : real_candidate(Ux, Vx, scale);
  };
  auto candidate_valid = [&](const Candidate& c) {
    return c.residual <= kResidualTol &&
           validate({c.U2, U.kind, 1e-10}).ok && validate({c.V2, V.kind, 1e-10}).ok;
  };

  ApproximationResult res;
  const std::vector<double> scales = scale_schedule(delta, params.scale_levels);
  std::optional<Candidate> best;
  for (int k = 0; k < static_cast<int>(scales.size()); ++k) {
    auto c = snap(U.entries, V.entries, scales[k]);
    if (!c) continue;
    res.cluster_trace.emplace_back(k, c->clusters);
    if (!candidate_valid(*c)) continue;
    // Candidates measure eps against the original inputs; keep the best.
    if (!best || c->eps < best->eps) best = *c;
  }

  if (best && best->eps <= params.eps_budget) {
    res.outputs = {StructuredMatrix{best->U2, U.kind, 1e-10},
                   StructuredMatrix{best->V2, V.kind, 1e-10}};
    res.epsilon = best->eps;
    res.residual = best->residual;
    res.status = SolveStatus::Converged;
    return res;
  }

  if (params.enable_descent) {
    Matrix U2 = best ? best->U2 : U.entries;
    Matrix V2 = best ? best->V2 : V.entries;
    res.iterations = descend(U.entries, V.entries, U2, V2, symplectic,
                             params.descent_max_inner);
    // Re-snap the descended pair; eps is still measured against the inputs.
    std::optional<Candidate> rebest;
    const double d2 = std::max(commutator_norm(U2, V2), kDeltaFloor);
    for (double s : scale_schedule(d2, params.scale_levels)) {
      auto c = snap(U2, V2, s);
      if (!c) continue;
      c->eps = std::max(op_norm(Matrix(U.entries - c->U2)),
                        op_norm(Matrix(V.entries - c->V2)));
      if (!candidate_valid(*c)) continue;
      if (!rebest || c->eps < rebest->eps) rebest = *c;
    }
    if (rebest && (!best || rebest->eps < best->eps)) {
      res.outputs = {StructuredMatrix{rebest->U2, U.kind, 1e-10},
                     StructuredMatrix{rebest->V2, V.kind, 1e-10}};
      res.epsilon = rebest->eps;
      res.residual = rebest->residual;
      res.status = SolveStatus::ClusterFallback;
      return res;
    }
  }

  if (best) {
    res.outputs = {StructuredMatrix{best->U2, U.kind, 1e-10},
                   StructuredMatrix{best->V2, V.kind, 1e-10}};
    res.epsilon = best->eps;
    res.residual = best->residual;
    res.status = best->eps <= params.eps_budget ? SolveStatus::Converged
                                                : SolveStatus::ClusterFallback;
  } else {
    res.outputs = {U, V}; // best effort: unchanged inputs
    res.epsilon = 0.0;
    res.residual = delta;
    res.status = SolveStatus::Failed;
  }
  return res;
}

ApproximationResult nearest_normal(const StructuredMatrix& X,
                                   const SolveParams& params) {
  if (X.kind != StructureKind::RealContraction &&
      X.kind != StructureKind::QuaternionicContraction)
    throw StructureError("nearest_normal: kind must be a contraction kind");
  if (!validate(X).ok)
    throw StructureError("nearest_normal: input fails structure validation");
  const double delta = self_commutator_norm(X.entries);
  if (delta > params.delta_max)
    throw Error("nearest_normal: input self-commutator exceeds delta_max");

  ApproximationResult res;
  std::optional<Candidate> best;
  const std::vector<double> scales = scale_schedule(delta, params.scale_levels);
  for (int k = 0; k < static_cast<int>(scales.size()); ++k) {
    auto c = normal_candidate(X.entries, X.kind, scales[k]);
    if (!c) continue;
    res.cluster_trace.emplace_back(k, c->clusters);
    if (c->residual > kResidualTol) continue;
    if (!validate({c->U2, X.kind, 1e-10}).ok) continue;
    if (!best || c->eps < best->eps) best = *c;
  }
  if (!best) {
    res.outputs = {X};
    res.residual = delta;
    res.status = SolveStatus::Failed;
    return res;
  }
  res.outputs = {StructuredMatrix{best->U2, X.kind, 1e-10}};
  res.epsilon = best->eps;
  res.residual = best->residual;
  res.status = SolveStatus::Converged;
  return res;
}

} // namespace acm
