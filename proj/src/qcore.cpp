#include "discordkit/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace discordkit {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

template <int N>
double hermiticity_defect(const Eigen::Matrix<Complex, N, N>& m) {
  double worst = 0.0;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) worst = std::max(worst, std::abs(m(i, j) - std::conj(m(j, i))));
  return worst;
}

// Shared validation path for 2x2 and 4x4 matrices. Returns the clipped,
// renormalized spectrum and eigenvectors; `changed` reports whether clipping
// modified the spectrum.
template <int N>
void validate_matrix(const Eigen::Matrix<Complex, N, N>& raw, Eigen::Matrix<Complex, N, N>& hermitian,
                     Eigen::Matrix<double, N, 1>& spectrum, Eigen::Matrix<Complex, N, N>& vectors,
                     bool& changed) {
  if (!raw.allFinite()) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
  const double defect = hermiticity_defect<N>(raw);
  if (defect > kHermitianTolerance)
    throw Error(ErrorCode::NotHermitian, "max |rho_ij - conj(rho_ji)| = " + fmt_double(defect));
  const double trace = raw.trace().real();
  if (std::abs(trace - 1.0) > kTraceTolerance)
    throw Error(ErrorCode::TraceNotOne, "|Tr rho - 1| = " + fmt_double(std::abs(trace - 1.0)));

  hermitian = (raw + raw.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Complex, N, N>> solver(hermitian);
  spectrum = solver.eigenvalues();
  vectors = solver.eigenvectors();
  if (spectrum(0) < -kNegativeTolerance)
    throw Error(ErrorCode::NotPositive, "smallest eigenvalue " + fmt_double(spectrum(0)));

  changed = false;
  for (int i = 0; i < N; ++i) {
    if (spectrum(i) < 0.0) {
      spectrum(i) = 0.0;
      changed = true;
    }
  }
  if (changed) spectrum /= spectrum.sum();
}

}  // namespace

TwoQubitState TwoQubitState::validate(const Matrix4& raw) {
  Matrix4 hermitian;
  Eigen::Vector4d spectrum;
  Matrix4 vectors;
  bool changed = false;
  validate_matrix<4>(raw, hermitian, spectrum, vectors, changed);
  if (changed) hermitian = vectors * spectrum.cast<Complex>().asDiagonal() * vectors.adjoint();
  const int rank = static_cast<int>((spectrum.array() > kRankThreshold).count());
  return TwoQubitState(std::move(hermitian), spectrum, std::move(vectors), rank);
}

QubitState QubitState::validate(const Matrix2& raw) {
  Matrix2 hermitian;
  Eigen::Vector2d spectrum;
  Matrix2 vectors;
  bool changed = false;
  validate_matrix<2>(raw, hermitian, spectrum, vectors, changed);
  if (changed) hermitian = vectors * spectrum.cast<Complex>().asDiagonal() * vectors.adjoint();
  return QubitState(std::move(hermitian), spectrum);
}

QubitState partial_trace(const TwoQubitState& rho, Subsystem keep) {
  const Matrix4& m = rho.matrix();
  Matrix2 reduced = Matrix2::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        reduced(i, j) += keep == Subsystem::A ? m(2 * i + k, 2 * j + k) : m(2 * k + i, 2 * k + j);
      }
    }
  }
  return QubitState::validate(reduced);
}

double shannon_bits(const double* weights, int count) {
  double s = 0.0;
  for (int i = 0; i < count; ++i) {
    const double w = weights[i];
    if (w > 0.0) s -= w * std::log2(w);
  }
  return s;
}

double entropy(const TwoQubitState& rho) { return std::max(0.0, shannon_bits(rho.spectrum().data(), 4)); }

double entropy(const QubitState& rho) { return std::max(0.0, shannon_bits(rho.spectrum().data(), 2)); }

double purity(const TwoQubitState& rho) { return rho.spectrum().squaredNorm(); }

double binary_entropy(double p) {
  const double w[2] = {p, 1.0 - p};
  return std::max(0.0, shannon_bits(w, 2));
}

double qubit_entropy_from_radius(double r) {
  r = std::clamp(r, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + r));
}

Vector4 basis_ket(int index) {
  Vector4 v = Vector4::Zero();
  v(index) = 1.0;
  return v;
}

Vector4 bell_phi_plus() { return (basis_ket(0) + basis_ket(3)) / std::sqrt(2.0); }

Matrix4 projector(const Vector4& ket) { return ket * ket.adjoint(); }

Matrix4 kron(const Matrix2& a, const Matrix2& b) {
  Matrix4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Matrix2 pauli(int axis) {
  Matrix2 s;
  switch (axis) {
    case 0: s << 0.0, 1.0, 1.0, 0.0; break;
    case 1: s << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0; break;
    default: s << 1.0, 0.0, 0.0, -1.0; break;
  }
  return s;
}

TwoQubitState pure_state(const Vector4& ket) {
  const Vector4 normalized = ket.normalized();
  return TwoQubitState::validate(projector(normalized));
}

TwoQubitState swap_subsystems(const TwoQubitState& rho) {
  static const int perm[4] = {0, 2, 1, 3};
  Matrix4 out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(perm[i], perm[j]) = rho.matrix()(i, j);
  return TwoQubitState::validate(out);
}

TwoQubitState conjugate(const TwoQubitState& rho, const Matrix4& unitary) {
  return TwoQubitState::validate(unitary * rho.matrix() * unitary.adjoint());
}

}  // namespace discordkit
