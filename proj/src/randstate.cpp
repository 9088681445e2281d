#include "discordkit/randstate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace discordkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

template <int N>
Eigen::Matrix<Complex, N, N> haar_unitary(SeededGenerator& gen) {
  Eigen::Matrix<Complex, N, N> g;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) g(i, j) = gen.complex_normal();
  Eigen::HouseholderQR<Eigen::Matrix<Complex, N, N>> qr(g);
  Eigen::Matrix<Complex, N, N> q = qr.householderQ();
  const Eigen::Matrix<Complex, N, N> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int k = 0; k < N; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

}  // namespace

SeededGenerator::SeededGenerator(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id),
      engine_(splitmix64(master_seed ^ splitmix64(stream_id ^ 0xd1b54a32d192ed03ULL))) {}

double SeededGenerator::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double SeededGenerator::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

Complex SeededGenerator::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

TwoQubitState random_pure(SeededGenerator& gen) {
  Vector4 v;
  for (int i = 0; i < 4; ++i) v(i) = gen.complex_normal();
  return pure_state(v);
}

TwoQubitState random_density(int rank, SeededGenerator& gen) {
  if (rank < 1 || rank > 4) throw Error(ErrorCode::ParamOutOfRange, "rank must be in 1..4");
  Eigen::Matrix<Complex, 4, Eigen::Dynamic> g(4, rank);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = gen.complex_normal();
  Matrix4 m = g * g.adjoint();
  m /= m.trace().real();
  TwoQubitState rho = TwoQubitState::validate(m);
  if (rho.rank() != rank)
    throw std::logic_error("random_density produced rank " + std::to_string(rho.rank()) + " instead of " +
                           std::to_string(rank));
  return rho;
}

Matrix4 random_unitary4(SeededGenerator& gen) { return haar_unitary<4>(gen); }

Matrix2 random_unitary2(SeededGenerator& gen) { return haar_unitary<2>(gen); }

}  // namespace discordkit
