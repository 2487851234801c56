#ifndef ACM_STRUCTURES_HPP
#define ACM_STRUCTURES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

// Structured dense matrices: the dual involution, structure predicates and
// the polar-type projections back onto each structure group.
namespace acm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
  using Error::Error;
};
struct StructureError : Error {
  using Error::Error;
};
struct RankError : Error {
  using Error::Error;
};
struct BranchCutError : Error {
  using Error::Error;
};

enum class StructureKind {
  RealOrthogonal,
  SymplecticUnitary,
  GeneralUnitary,
  RealContraction,
  QuaternionicContraction,
};

const char* kind_name(StructureKind k);
StructureKind kind_from_name(const std::string& name);
bool kind_requires_even_dim(StructureKind k);

/// Dense complex square matrix with a declared structure tag.
/// Plain aggregate; use make_structured() when the invariants must hold.
struct StructuredMatrix {
  Matrix entries;
  StructureKind kind = StructureKind::GeneralUnitary;
  double tol = 1e-10;

  Eigen::Index dim() const { return entries.rows(); }
};

struct ValidationReport {
  bool ok = false;
  double unitarity = 0.0;    // ||M*M - I||
  double realness = 0.0;     // max |Im M_ij|
  double self_duality = 0.0; // ||M# - M*||
  double contraction = 0.0;  // max(0, sigma_max - 1)
};

// Operator norm (largest singular value), full SVD.
template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Plain> svd(M.eval());
  return svd.singularValues()(0);
}

// The block involution (A,B;C,D) -> (D^T,-B^T;-C^T,A^T). Even dim only.
Matrix dual(const Matrix& M);

// Standard skew form J = [[0,-I],[I,0]] of even size n.
Matrix symplectic_form(Eigen::Index n);

// Projection onto the quaternionic subalgebra {M : M# = M*},
// i.e. matrices commuting with the antiunitary v -> J conj(v).
Matrix quaternionic_project(const Matrix& M);

ValidationReport validate(const StructuredMatrix& M);

// Checked constructor: throws StructureError when validate() fails.
StructuredMatrix make_structured(Matrix entries, StructureKind kind,
                                 double tol = 1e-10);

double commutator_norm(const Matrix& U, const Matrix& V);
double self_commutator_norm(const Matrix& X);

// Eigensystem of a (numerically) unitary matrix via complex Schur form;
// vectors are orthonormal to roundoff.
struct UnitaryEig {
  Matrix vectors;
  Vector values;
};
UnitaryEig unitary_eigensystem(const Matrix& U);

// Skew-Hermitian principal logarithm of a unitary matrix; eigenvalue
// arguments land in (-pi, pi). Throws BranchCutError near -1.
Matrix principal_log(const Matrix& U, double branch_tol = 1e-6);

// Orthogonal polar factor, the nearest orthogonal matrix. Input must be
// invertible.
RealMatrix project_to_orthogonal(const RealMatrix& A);

// Unitary polar factor of an invertible complex matrix.
Matrix polar_unitary(const Matrix& A);

// Nearest symplectic unitary: symmetrize into the quaternionic subalgebra,
// then take the polar factor there. Requires ||A# - A*|| <= 0.5.
Matrix project_to_symplectic(const Matrix& A);

// Orthonormal basis [v_1..v_m | Cv_1..Cv_m] of the span of the columns of B,
// where C v = J conj(v). The span must be C-invariant and of even dimension.
// In this basis the induced skew form is exactly [[0,-I],[I,0]].
Matrix quaternionic_basis(const Matrix& B);

} // namespace acm

#endif
