#include "acm/structures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace acm {

const char* kind_name(StructureKind k) {
  switch (k) {
    case StructureKind::RealOrthogonal: return "real-orthogonal";
    case StructureKind::SymplecticUnitary: return "symplectic-unitary";
    case StructureKind::GeneralUnitary: return "general-unitary";
    case StructureKind::RealContraction: return "real-contraction";
    case StructureKind::QuaternionicContraction: return "quaternionic-contraction";
  }
  return "unknown";
}

StructureKind kind_from_name(const std::string& name) {
  if (name == "real-orthogonal") return StructureKind::RealOrthogonal;
  if (name == "symplectic-unitary") return StructureKind::SymplecticUnitary;
  if (name == "general-unitary") return StructureKind::GeneralUnitary;
  if (name == "real-contraction") return StructureKind::RealContraction;
  if (name == "quaternionic-contraction") return StructureKind::QuaternionicContraction;
  throw Error("unknown structure kind: " + name);
}

bool kind_requires_even_dim(StructureKind k) {
  return k == StructureKind::SymplecticUnitary ||
         k == StructureKind::QuaternionicContraction;
}

Matrix dual(const Matrix& M) {
  const Eigen::Index dim = M.rows();
  if (M.cols() != dim) throw DimensionError("dual: matrix not square");
  if (dim % 2 != 0) throw DimensionError("dual: dimension must be even");
  const Eigen::Index n = dim / 2;
  Matrix out(dim, dim);
  out.topLeftCorner(n, n) = M.bottomRightCorner(n, n).transpose();
  out.topRightCorner(n, n) = -M.topRightCorner(n, n).transpose();
  out.bottomLeftCorner(n, n) = -M.bottomLeftCorner(n, n).transpose();
  out.bottomRightCorner(n, n) = M.topLeftCorner(n, n).transpose();
  return out;
}

Matrix symplectic_form(Eigen::Index n) {
  if (n % 2 != 0) throw DimensionError("symplectic_form: dimension must be even");
  Matrix J = Matrix::Zero(n, n);
  const Eigen::Index m = n / 2;
  J.topRightCorner(m, m) = -Matrix::Identity(m, m);
  J.bottomLeftCorner(m, m) = Matrix::Identity(m, m);
  return J;
}

Matrix quaternionic_project(const Matrix& M) {
  // M quaternionic <=> M# = M*, so the projection averages M with (M#)*.
  return 0.5 * (M + dual(M).adjoint());
}

double commutator_norm(const Matrix& U, const Matrix& V) {
  if (U.rows() != V.rows() || U.cols() != V.cols())
    throw DimensionError("commutator_norm: dimension mismatch");
  return op_norm(U * V - V * U);
}

double self_commutator_norm(const Matrix& X) {
  return op_norm(X * X.adjoint() - X.adjoint() * X);
}

ValidationReport validate(const StructuredMatrix& M) {
  ValidationReport r;
  const Matrix& A = M.entries;
  const Eigen::Index n = A.rows();
  if (n == 0 || A.cols() != n) return r; // ok stays false
  const Matrix I = Matrix::Identity(n, n);
  bool even_ok = true;
  switch (M.kind) {
    case StructureKind::RealOrthogonal:
      r.realness = A.imag().cwiseAbs().maxCoeff();
      r.unitarity = op_norm(A.adjoint() * A - I);
      r.ok = r.realness <= M.tol && r.unitarity <= M.tol;
      break;
    case StructureKind::SymplecticUnitary:
      even_ok = n % 2 == 0;
      r.unitarity = op_norm(A.adjoint() * A - I);
      if (even_ok) r.self_duality = op_norm(dual(A) - A.adjoint());
      r.ok = even_ok && r.unitarity <= M.tol && r.self_duality <= M.tol;
      break;
    case StructureKind::GeneralUnitary:
      r.unitarity = op_norm(A.adjoint() * A - I);
      r.ok = r.unitarity <= M.tol;
      break;
    case StructureKind::RealContraction:
      r.realness = A.imag().cwiseAbs().maxCoeff();
      r.contraction = std::max(0.0, op_norm(A) - 1.0);
      r.ok = r.realness <= M.tol && r.contraction <= M.tol;
      break;
    case StructureKind::QuaternionicContraction:
      even_ok = n % 2 == 0;
      if (even_ok) r.self_duality = op_norm(dual(A) - A.adjoint());
      r.contraction = std::max(0.0, op_norm(A) - 1.0);
      r.ok = even_ok && r.self_duality <= M.tol && r.contraction <= M.tol;
      break;
  }
  return r;
}

StructuredMatrix make_structured(Matrix entries, StructureKind kind, double tol) {
  StructuredMatrix M{std::move(entries), kind, tol};
  ValidationReport r = validate(M);
  if (!r.ok)
    throw StructureError(std::string("matrix does not validate as ") +
                         kind_name(kind));
  return M;
}

UnitaryEig unitary_eigensystem(const Matrix& U) {
  // A unitary matrix is normal, so its Schur form is diagonal and the Schur
  // vectors are an orthonormal eigenbasis.
  Eigen::ComplexSchur<Matrix> schur(U);
  if (schur.info() != Eigen::Success)
    throw Error("unitary_eigensystem: Schur decomposition failed");
  return {schur.matrixU(), schur.matrixT().diagonal()};
}

Matrix principal_log(const Matrix& U, double branch_tol) {
  const Eigen::Index n = U.rows();
  if (U.cols() != n) throw DimensionError("principal_log: matrix not square");
  const double defect = op_norm(U.adjoint() * U - Matrix::Identity(n, n));
  if (defect > 1e-6)
    throw StructureError("principal_log: input is not unitary (defect " +
                         std::to_string(defect) + ")");
  UnitaryEig eig = unitary_eigensystem(U);
  Vector logs(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex lambda = eig.values(j);
    if (std::abs(lambda + 1.0) < branch_tol)
      throw BranchCutError("principal_log: eigenvalue within branch_tol of -1");
    logs(j) = Complex(0.0, std::arg(lambda));
  }
  return eig.vectors * logs.asDiagonal() * eig.vectors.adjoint();
}

RealMatrix project_to_orthogonal(const RealMatrix& A) {
  Eigen::JacobiSVD<RealMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-13 * std::max(1.0, sv(0)))
    throw RankError("project_to_orthogonal: input is numerically singular");
  return svd.matrixU() * svd.matrixV().transpose();
}

Matrix polar_unitary(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-13 * std::max(1.0, sv(0)))
    throw RankError("polar_unitary: input is numerically singular");
  return svd.matrixU() * svd.matrixV().adjoint();
}

Matrix project_to_symplectic(const Matrix& A) {
  const double qdefect = op_norm(dual(A) - A.adjoint());
  if (qdefect > 0.5)
    throw StructureError("project_to_symplectic: input too far from quaternionic form");
  Matrix Q = quaternionic_project(A);
  Matrix W = polar_unitary(Q);
  // One cleanup pass: the polar factor of a quaternionic matrix is
  // quaternionic, so this only strips roundoff.
  return polar_unitary(quaternionic_project(W));
}

Matrix quaternionic_basis(const Matrix& B) {
  const Eigen::Index n = B.rows();
  const Eigen::Index d = B.cols();
  if (d % 2 != 0)
    throw DimensionError("quaternionic_basis: span dimension must be even");
  const Eigen::Index m = d / 2;
  Matrix J = symplectic_form(n);
  Matrix vs(n, m);
  Matrix cvs(n, m);
  Eigen::Index got = 0;
  for (Eigen::Index j = 0; j < d && got < m; ++j) {
    Vector w = B.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < got; ++k) {
        w -= vs.col(k) * (vs.col(k).dot(w));
        w -= cvs.col(k) * (cvs.col(k).dot(w));
      }
    }
    const double nw = w.norm();
    if (nw < 1e-8) continue;
    vs.col(got) = w / nw;
    // Kramers pairing keeps J conj(v) orthogonal to every previous vector;
    // the exact pairing is what makes the assembled blocks quaternionic.
    cvs.col(got) = J * vs.col(got).conjugate();
    ++got;
  }
  if (got < m)
    throw Error("quaternionic_basis: span is not C-invariant of full rank");
  Matrix out(n, d);
  out.leftCols(m) = vs;
  out.rightCols(m) = cvs;
  return out;
}

} // namespace acm
