#pragma once

// Two-qubit linear algebra primitives.
//
// Basis ordering used everywhere in the library: |00>, |01>, |10>, |11>,
// where the left label is qubit A and the right label is qubit B. A 4x4
// matrix entry (i, j) therefore refers to <a_i b_i| rho |a_j b_j> with
// i = 2 * a + b.

#include <complex>

#include <Eigen/Dense>

#include "discordkit/errors.hpp"

namespace discordkit {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix<Complex, 2, 2>;
using Matrix4 = Eigen::Matrix<Complex, 4, 4>;
using Vector2 = Eigen::Matrix<Complex, 2, 1>;
using Vector4 = Eigen::Matrix<Complex, 4, 1>;

enum class Subsystem { A, B };

constexpr Subsystem other(Subsystem s) { return s == Subsystem::A ? Subsystem::B : Subsystem::A; }
constexpr char label(Subsystem s) { return s == Subsystem::A ? 'A' : 'B'; }

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
// Eigenvalues in [-kNegativeTolerance, 0) are clipped to zero; anything
// lower is rejected.
inline constexpr double kNegativeTolerance = 1e-9;
inline constexpr double kRankThreshold = 1e-9;

/// Validated two-qubit density matrix: Hermitian, unit trace, PSD.
///
/// Instances are immutable. The spectrum is computed once at validation and
/// cached together with the eigenvectors.
class TwoQubitState {
 public:
  /// Validates a raw matrix. Throws Error with NotHermitian, TraceNotOne or
  /// NotPositive. Slightly negative eigenvalues are clipped and the spectrum
  /// renormalized; the stored matrix is then rebuilt from the clipped
  /// spectrum.
  static TwoQubitState validate(const Matrix4& raw);

  const Matrix4& matrix() const noexcept { return matrix_; }
  /// Clipped eigenvalues in ascending order, summing to one.
  const Eigen::Vector4d& spectrum() const noexcept { return spectrum_; }
  /// Columns are the eigenvectors matching spectrum().
  const Matrix4& eigenvectors() const noexcept { return eigenvectors_; }
  int rank() const noexcept { return rank_; }

 private:
  TwoQubitState(Matrix4 matrix, Eigen::Vector4d spectrum, Matrix4 vectors, int rank)
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)),
        eigenvectors_(std::move(vectors)), rank_(rank) {}

  Matrix4 matrix_;
  Eigen::Vector4d spectrum_;
  Matrix4 eigenvectors_;
  int rank_;
};

/// Validated single-qubit density matrix.
class QubitState {
 public:
  static QubitState validate(const Matrix2& raw);

  const Matrix2& matrix() const noexcept { return matrix_; }
  const Eigen::Vector2d& spectrum() const noexcept { return spectrum_; }

 private:
  QubitState(Matrix2 matrix, Eigen::Vector2d spectrum)
      : matrix_(std::move(matrix)), spectrum_(std::move(spectrum)) {}

  Matrix2 matrix_;
  Eigen::Vector2d spectrum_;
};

QubitState partial_trace(const TwoQubitState& rho, Subsystem keep);

/// Von Neumann entropy in bits with 0 log 0 = 0.
double entropy(const TwoQubitState& rho);
double entropy(const QubitState& rho);

/// Tr(rho^2).
double purity(const TwoQubitState& rho);

/// -sum p log2 p over non-negative weights; zero weights contribute nothing.
double shannon_bits(const double* weights, int count);

/// h(p) = -p log2 p - (1-p) log2 (1-p).
double binary_entropy(double p);

/// Entropy of a qubit whose Bloch vector has length r (clamped to [0, 1]).
double qubit_entropy_from_radius(double r);

// Constructors for frequently used states and operators.
Vector4 basis_ket(int index);
Vector4 bell_phi_plus();
Matrix4 projector(const Vector4& ket);
Matrix4 kron(const Matrix2& a, const Matrix2& b);
Matrix2 pauli(int axis);  // 0 = x, 1 = y, 2 = z

/// Normalizes the ket and returns its projector as a validated state.
TwoQubitState pure_state(const Vector4& ket);

/// Exchanges the roles of A and B.
TwoQubitState swap_subsystems(const TwoQubitState& rho);

/// U rho U^dagger.
TwoQubitState conjugate(const TwoQubitState& rho, const Matrix4& unitary);

}  // namespace discordkit
