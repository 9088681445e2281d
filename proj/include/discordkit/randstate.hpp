#pragma once

// Seeded random states. Each (master_seed, stream_id) pair owns an
// independent, platform-stable stream, so results never depend on how work
// is split across threads.

#include <cstdint>
#include <random>

#include "discordkit/qcore.hpp"

namespace discordkit {

class SeededGenerator {
 public:
  SeededGenerator(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on (0, 1].
  double uniform();
  /// Standard normal (Box-Muller; avoids std::normal_distribution, whose
  /// output is implementation-defined).
  double normal();
  /// Real and imaginary parts i.i.d. standard normal.
  Complex complex_normal();

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-uniform pure state (normalized vector of complex Gaussians).
TwoQubitState random_pure(SeededGenerator& gen);

/// rho = G G^dagger / Tr(G G^dagger) with G a 4 x rank complex Ginibre
/// matrix (Hilbert-Schmidt induced measure). rank in 1..4.
TwoQubitState random_density(int rank, SeededGenerator& gen);

/// Haar-random unitary via QR of a Ginibre matrix with phase correction.
Matrix4 random_unitary4(SeededGenerator& gen);
Matrix2 random_unitary2(SeededGenerator& gen);

}  // namespace discordkit
