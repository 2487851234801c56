#include "acm/ensembles.hpp"

#include <Eigen/QR>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "acm/rng.hpp"

namespace acm {

namespace {

RealMatrix real_gaussian(int n, Rng& rng) {
  RealMatrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = rng.gaussian();
  return G;
}

Matrix complex_gaussian(int n, Rng& rng) {
  Matrix G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double re = rng.gaussian();
      const double im = rng.gaussian();
      G(i, j) = Complex(re, im);
    }
  return G;
}

// Haar-ish random orthogonal via QR with the sign convention fixed by the
// diagonal of R, which keeps the draw deterministic.
RealMatrix random_orthogonal(int n, Rng& rng) {
  RealMatrix G = real_gaussian(n, rng);
  Eigen::HouseholderQR<RealMatrix> qr(G);
  RealMatrix Q = qr.householderQ();
  RealMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  return Q;
}

Matrix random_unitary(int n, Rng& rng) {
  Matrix G = complex_gaussian(n, rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex r = R(j, j);
    if (std::abs(r) > 0.0) Q.col(j) *= r / std::abs(r);
  }
  return Q;
}

Matrix random_symplectic_unitary(int n, Rng& rng) {
  Matrix K = random_tangent(n, StructureKind::SymplecticUnitary, rng);
  return Matrix((std::numbers::pi * K).exp());
}

// Common 2x2-rotation-block diagonal (plus a +-1 entry at odd dim).
RealMatrix rotation_block_diagonal(int n, const std::vector<double>& angles,
                                   double odd_sign) {
  RealMatrix D = RealMatrix::Zero(n, n);
  const int m = n / 2;
  for (int k = 0; k < m; ++k) {
    const double c = std::cos(angles[k]);
    const double s = std::sin(angles[k]);
    D(2 * k, 2 * k) = c;
    D(2 * k, 2 * k + 1) = -s;
    D(2 * k + 1, 2 * k) = s;
    D(2 * k + 1, 2 * k + 1) = c;
  }
  if (n % 2 != 0) D(n - 1, n - 1) = odd_sign;
  return D;
}

Matrix quaternionic_phase_diagonal(int n, const std::vector<double>& angles) {
  Matrix D = Matrix::Zero(n, n);
  const int m = n / 2;
  for (int k = 0; k < m; ++k) {
    D(k, k) = std::polar(1.0, angles[k]);
    D(m + k, m + k) = std::polar(1.0, -angles[k]);
  }
  return D;
}

} // namespace

std::pair<Matrix, Matrix> voiculescu_pair(int n) {
  if (n < 2) throw DimensionError("voiculescu_pair: n must be >= 2");
  Matrix U = Matrix::Zero(n, n);
  Matrix V = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k)
    U(k, k) = std::polar(1.0, 2.0 * std::numbers::pi * k / n);
  for (int j = 1; j < n; ++j) V(j - 1, j) = 1.0; // shift e_j -> e_{j-1}
  V(n - 1, 0) = 1.0;
  return {U, V};
}

Matrix random_tangent(int dim, StructureKind kind, Rng& rng) {
  Matrix K;
  switch (kind) {
    case StructureKind::RealOrthogonal: {
      RealMatrix G = real_gaussian(dim, rng);
      K = (0.5 * (G - G.transpose())).cast<Complex>();
      break;
    }
    case StructureKind::GeneralUnitary: {
      Matrix G = complex_gaussian(dim, rng);
      K = 0.5 * (G - G.adjoint());
      break;
    }
    case StructureKind::SymplecticUnitary: {
      Matrix G = complex_gaussian(dim, rng);
      K = quaternionic_project(0.5 * (G - G.adjoint()));
      break;
    }
    default:
      throw StructureError("random_tangent: unsupported kind");
  }
  const double norm = op_norm(K);
  if (norm == 0.0) throw GenerationError("random_tangent: zero direction drawn");
  return K / norm;
}

std::pair<StructuredMatrix, StructuredMatrix> commuting_pair(const EnsembleSpec& spec) {
  const int n = spec.dim;
  if (n < 1) throw DimensionError("commuting_pair: dim must be positive");
  if (kind_requires_even_dim(spec.kind) && n % 2 != 0)
    throw DimensionError("commuting_pair: kind requires even dimension");
  Rng rng(spec.seed);
  Matrix U, V;
  switch (spec.kind) {
    case StructureKind::RealOrthogonal: {
      const int m = n / 2;
      std::vector<double> a(m), b(m);
      for (int k = 0; k < m; ++k) a[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      for (int k = 0; k < m; ++k) b[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const double su = rng.uniform() < 0.5 ? -1.0 : 1.0;
      const double sv = rng.uniform() < 0.5 ? -1.0 : 1.0;
      RealMatrix W = random_orthogonal(n, rng);
      U = (W * rotation_block_diagonal(n, a, su) * W.transpose()).cast<Complex>();
      V = (W * rotation_block_diagonal(n, b, sv) * W.transpose()).cast<Complex>();
      break;
    }
    case StructureKind::SymplecticUnitary: {
      const int m = n / 2;
      std::vector<double> a(m), b(m);
      for (int k = 0; k < m; ++k) a[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      for (int k = 0; k < m; ++k) b[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
      Matrix W = random_symplectic_unitary(n, rng);
      U = W * quaternionic_phase_diagonal(n, a) * W.adjoint();
      V = W * quaternionic_phase_diagonal(n, b) * W.adjoint();
      break;
    }
    case StructureKind::GeneralUnitary: {
      Vector du(n), dv(n);
      for (int k = 0; k < n; ++k)
        du(k) = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
      for (int k = 0; k < n; ++k)
        dv(k) = std::polar(1.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
      Matrix W = random_unitary(n, rng);
      U = W * du.asDiagonal() * W.adjoint();
      V = W * dv.asDiagonal() * W.adjoint();
      break;
    }
    default:
      throw StructureError("commuting_pair: unsupported kind");
  }
  return {StructuredMatrix{U, spec.kind, 1e-10},
          StructuredMatrix{V, spec.kind, 1e-10}};
}

StructuredMatrix perturb(const StructuredMatrix& M, double eta, std::uint64_t seed) {
  if (eta > 0.5) throw Error("perturb: eta must be <= 0.5");
  if (eta == 0.0) return M;
  Rng rng(seed);
  const int n = static_cast<int>(M.dim());
  Matrix K = random_tangent(n, M.kind, rng);
  Matrix E = Matrix((eta * K).exp());
  return StructuredMatrix{M.entries * E, M.kind, M.tol};
}

StructuredMatrix almost_normal(int dim, double delta, StructureKind kind,
                               std::uint64_t seed) {
  if (delta > 0.5) throw Error("almost_normal: delta must be <= 0.5");
  if (kind != StructureKind::RealContraction &&
      kind != StructureKind::QuaternionicContraction)
    throw StructureError("almost_normal: kind must be a contraction kind");
  if (kind_requires_even_dim(kind) && dim % 2 != 0)
    throw DimensionError("almost_normal: kind requires even dimension");
  Rng rng(seed);

  Matrix X0, E;
  if (kind == StructureKind::RealContraction) {
    const int m = dim / 2;
    RealMatrix D = RealMatrix::Zero(dim, dim);
    for (int k = 0; k < m; ++k) {
      const double a = rng.uniform(-1.0, 1.0);
      const double b = rng.uniform(-1.0, 1.0);
      D(2 * k, 2 * k) = a;
      D(2 * k, 2 * k + 1) = -b;
      D(2 * k + 1, 2 * k) = b;
      D(2 * k + 1, 2 * k + 1) = a;
    }
    if (dim % 2 != 0) D(dim - 1, dim - 1) = rng.uniform(-1.0, 1.0);
    RealMatrix Q = random_orthogonal(dim, rng);
    RealMatrix X0r = Q * D * Q.transpose();
    X0 = (X0r * (0.7 / std::max(1e-12, op_norm(X0r)))).cast<Complex>();
    RealMatrix Er = real_gaussian(dim, rng);
    E = (Er / op_norm(Er)).cast<Complex>();
  } else {
    const int m = dim / 2;
    Matrix D = Matrix::Zero(dim, dim);
    for (int k = 0; k < m; ++k) {
      const double r = std::sqrt(rng.uniform());
      const double ph = rng.uniform(0.0, 2.0 * std::numbers::pi);
      D(k, k) = std::polar(r, ph);
      D(m + k, m + k) = std::conj(D(k, k));
    }
    Matrix W = random_symplectic_unitary(dim, rng);
    Matrix X0c = W * D * W.adjoint();
    X0 = X0c * (0.7 / std::max(1e-12, op_norm(X0c)));
    Matrix Ec = quaternionic_project(complex_gaussian(dim, rng));
    E = Ec / op_norm(Ec);
  }

  if (delta == 0.0) return StructuredMatrix{X0, kind, 1e-10};

  // Bisection on the perturbation amplitude: the self-commutator scale is
  // monotone in the amplitude for small amplitudes. A final radial rescale
  // enforces the contraction bound, shrinking the commutator by nu^2, so the
  // bisection target is adjusted until the rescaled value lands in window.
  double target = 0.75 * delta;
  for (int attempt = 0; attempt < 100; ++attempt) {
    double lo = 0.0, hi = 0.05;
    while (self_commutator_norm(X0 + hi * E) < target && hi < 0.6) hi *= 2.0;
    double s = hi;
    for (int it = 0; it < 80; ++it) {
      s = 0.5 * (lo + hi);
      const double c = self_commutator_norm(X0 + s * E);
      if (c < target)
        lo = s;
      else
        hi = s;
    }
    Matrix X = X0 + s * E;
    const double nu = std::max(1.0, op_norm(X));
    X /= nu;
    const double c = self_commutator_norm(X);
    if (c >= delta / 2.0 && c <= delta)
      return StructuredMatrix{X, kind, 1e-10};
    target = std::min(0.75 * delta * nu * nu, 0.99 * delta * nu * nu);
  }
  throw GenerationError("almost_normal: commutator window unreachable");
}

} // namespace acm
