#include "acm/indices.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace acm {

namespace {

constexpr double kDegenerateDet = 1e-12;
constexpr int kSampleCap = 1 << 20;

} // namespace

WindingResult bott_winding(const Matrix& U, const Matrix& V, int initial_samples) {
  if (U.rows() != V.rows() || U.cols() != V.cols())
    throw DimensionError("bott_winding: dimension mismatch");
  const double comm = commutator_norm(U, V);
  if (comm >= 2.0)
    throw CommutatorTooLargeError("bott_winding: ||UV - VU|| must be < 2");
  const Matrix UV = U * V;
  const Matrix VU = V * U;

  WindingResult res;
  res.min_abs_det = std::numeric_limits<double>::infinity();
  auto det_at = [&](double t) {
    Complex d = Eigen::PartialPivLU<Matrix>((1.0 - t) * UV + t * VU).determinant();
    ++res.samples_used;
    const double ad = std::abs(d);
    res.min_abs_det = std::min(res.min_abs_det, ad);
    if (ad < kDegenerateDet)
      throw DegeneratePathError("bott_winding: |det| fell below 1e-12 along the path");
    return d;
  };

  double total = 0.0;
  std::function<void(double, Complex, double, Complex)> refine =
      [&](double t0, Complex d0, double t1, Complex d1) {
        const double darg = std::arg(d1 / d0);
        if (std::abs(darg) < std::numbers::pi / 2.0 ||
            res.samples_used >= kSampleCap) {
          total += darg;
          return;
        }
        const double tm = 0.5 * (t0 + t1);
        const Complex dm = det_at(tm);
        refine(t0, d0, tm, dm);
        refine(tm, dm, t1, d1);
      };

  const int n0 = std::max(2, initial_samples);
  Complex prev = det_at(0.0);
  for (int i = 1; i <= n0; ++i) {
    const double t0 = static_cast<double>(i - 1) / n0;
    const double t1 = static_cast<double>(i) / n0;
    const Complex cur = det_at(t1);
    refine(t0, prev, t1, cur);
    prev = cur;
  }
  res.winding = static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
  return res;
}

double bott_trace_log(const Matrix& U, const Matrix& V) {
  const Matrix W = V * U * V.adjoint() * U.adjoint();
  const Matrix L = principal_log(W);
  // L is skew-Hermitian, so its trace is purely imaginary.
  return L.trace().imag() / (2.0 * std::numbers::pi);
}

Matrix bott_projection(const Matrix& U, const Matrix& V) {
  const Eigen::Index n = U.rows();
  if (V.rows() != n || U.cols() != n || V.cols() != n)
    throw DimensionError("bott_projection: dimension mismatch");
  UnitaryEig eig = unitary_eigensystem(V);
  RealVector fv(n), gv(n), hv(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    // f descends from 1 at z = 1 to 0 at z = -1 symmetrically along both
    // arcs, so it is continuous on the whole circle; g lives on the lower
    // arc and h on the upper one, giving gh = 0 and g^2 + h^2 = f - f^2.
    const double theta = std::arg(eig.values(j)); // in (-pi, pi]
    const double f = 1.0 - std::abs(theta) / std::numbers::pi;
    const double w = std::sqrt(std::max(0.0, f - f * f));
    fv(j) = f;
    gv(j) = theta < 0.0 ? w : 0.0;
    hv(j) = theta < 0.0 ? 0.0 : w;
  }
  auto apply = [&](const RealVector& vals) {
    return Matrix(eig.vectors * vals.cast<Complex>().asDiagonal() *
                  eig.vectors.adjoint());
  };
  const Matrix F = apply(fv), G = apply(gv), H = apply(hv);
  Matrix e(2 * n, 2 * n);
  e.topLeftCorner(n, n) = F;
  e.topRightCorner(n, n) = G + H * U;
  e.bottomLeftCorner(n, n) = G + U.adjoint() * H;
  e.bottomRightCorner(n, n) = Matrix::Identity(n, n) - F;
  return 0.5 * (e + e.adjoint());
}

int k_class(const Matrix& e, double gap_tol) {
  const Eigen::Index dim = e.rows();
  if (dim % 2 != 0 || e.cols() != dim)
    throw DimensionError("k_class: input must be square of even dimension");
  Eigen::SelfAdjointEigenSolver<Matrix> es(e);
  int above = 0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const double ev = es.eigenvalues()(j);
    if (std::abs(ev - 0.5) < gap_tol)
      throw NoSpectralGapError("k_class: eigenvalue inside the gap window at 1/2");
    if (ev > 0.5) ++above;
  }
  return above - static_cast<int>(dim / 2);
}

PairingResult spectral_pairing_check(const Matrix& X, double tol) {
  const Eigen::Index n = X.rows();
  const double udef = op_norm(X.adjoint() * X - Matrix::Identity(n, n));
  const double sdef = op_norm(dual(X) - X.adjoint());
  if (udef > tol || sdef > tol)
    throw StructureError("spectral_pairing_check: input is not symplectic unitary at tol");
  UnitaryEig eig = unitary_eigensystem(X);
  std::vector<bool> used(n, false);
  PairingResult res;
  res.paired = true;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    const Complex target = std::conj(eig.values(i));
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[j]) continue;
      const double d = std::abs(eig.values(j) - target);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best < 0 || best_d > tol) {
      res.paired = false;
      res.pairs.emplace_back(eig.values(i), target);
      continue;
    }
    used[best] = true;
    res.pairs.emplace_back(eig.values(i), eig.values(best));
  }
  return res;
}

BottReport bott_report(const Matrix& U, const Matrix& V) {
  BottReport rep;
  rep.commutator = commutator_norm(U, V);
  const WindingResult w = bott_winding(U, V);
  rep.winding = w.winding;
  rep.path_min_abs_det = w.min_abs_det;
  rep.samples_used = w.samples_used;
  rep.trace_log = bott_trace_log(U, V);
  rep.k_class = k_class(bott_projection(U, V));
  return rep;
}

} // namespace acm
