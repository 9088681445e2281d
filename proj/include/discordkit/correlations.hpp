#pragma once

// Mutual information, measurement-conditioned entropies, quantum discord
// (projective and rank-one POVM), classical correlations and concurrence.
//
// Naming convention: `measured` is the qubit that is measured. Measuring B
// yields delta_{A:B} and J_{A:B}; measuring A yields delta_{B:A}.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "discordkit/qcore.hpp"

namespace discordkit {

/// Projective measurement on one qubit:
///   |psi_1> = cos(theta)|0> + e^{i phi} sin(theta)|1>
///   |psi_2> = -e^{-i phi} sin(theta)|0> + cos(theta)|1>
struct MeasurementBasis {
  double theta = 0.0;
  double phi = 0.0;

  Vector2 ket(int outcome) const;
  Matrix2 projector(int outcome) const;
  /// Bloch vector of |psi_1>; |psi_2> has the opposite one.
  Eigen::Vector3d bloch() const;
  /// Same measurement with theta in [0, pi/2] and phi in [0, 2 pi).
  MeasurementBasis canonical() const;
};

/// Rank-one POVM on one qubit: E_i = w_i |v(n_i)><v(n_i)|, with n_i a unit
/// Bloch vector and w_i in (0, 1].
class RankOnePOVM {
 public:
  struct Element {
    double weight;
    Eigen::Vector3d direction;
  };

  /// Checks 2..4 elements, positive weights, unit directions and
  /// completeness sum E_i = I to 1e-9. Throws ParamOutOfRange.
  static RankOnePOVM validate(std::vector<Element> elements);

  const std::vector<Element>& elements() const noexcept { return elements_; }
  Matrix2 effect(std::size_t i) const;
  /// max |(sum E_i - I)_{jk}|.
  double completeness_residual() const;

 private:
  explicit RankOnePOVM(std::vector<Element> elements) : elements_(std::move(elements)) {}
  std::vector<Element> elements_;
};

inline constexpr double kCompletenessTolerance = 1e-9;
inline constexpr double kOutcomeProbabilityFloor = 1e-12;

struct OptimizerSettings {
  int grid = 48;            // grid points per angle
  int starts = 5;           // refinement seeds taken from the best grid cells
  int max_iterations = 200; // per simplex refinement
  double tolerance = 1e-12; // objective spread at convergence
};

struct MeasurementOptimum {
  double value = 0.0;
  MeasurementBasis basis;
};

struct PovmOptimum {
  double value = 0.0;
  RankOnePOVM povm;
};

struct CorrelationRecord {
  double delta_ab = 0.0;
  double delta_ba = 0.0;
  double classical_j = 0.0;
  double mutual_i = 0.0;
  double concurrence = 0.0;
  double purity = 0.0;
  int rank = 0;
};

/// Local Pauli expansion rho = (I + a.s x I + I x b.s + sum T_ij s_i x s_j) / 4.
struct BlochForm {
  Eigen::Vector3d a = Eigen::Vector3d::Zero();
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  Eigen::Matrix3d t = Eigen::Matrix3d::Zero();

  static BlochForm of(const TwoQubitState& rho);
  /// Reorders so that `measured` plays the role of B.
  BlochForm oriented(Subsystem measured) const;
};

/// Entropy of the unmeasured qubit after a measurement along `n` on the
/// B role of `form` (outcomes +n and -n).
double conditional_entropy_bloch(const BlochForm& form, const Eigen::Vector3d& n);

/// I = S(rho_A) + S(rho_B) - S(rho), bits.
double mutual_information(const TwoQubitState& rho);

/// S(unmeasured | {Pi_j}) = sum_i p_i S(rho_{unmeasured | i}), computed from
/// explicit projectors and partial traces.
double conditional_entropy(const TwoQubitState& rho, const MeasurementBasis& basis, Subsystem measured);

/// Same for a rank-one POVM.
double conditional_entropy(const TwoQubitState& rho, const RankOnePOVM& povm, Subsystem measured);

/// Minimum conditional entropy over projective measurements: coarse grid on
/// (theta, phi) in [0, pi/2] x [0, pi) followed by simplex refinement.
MeasurementOptimum min_conditional_entropy(const TwoQubitState& rho, Subsystem measured,
                                           const OptimizerSettings& settings = {});

/// delta = S(rho_measured) - S(rho) + min S(unmeasured | Pi). Throws
/// OptimizationFailed if the refinement does not converge or the value is
/// below -1e-9.
MeasurementOptimum discord_projective(const TwoQubitState& rho, Subsystem measured,
                                      const OptimizerSettings& settings = {});

/// J = S(rho_unmeasured) - min S(unmeasured | Pi).
MeasurementOptimum classical_correlations(const TwoQubitState& rho, Subsystem measured,
                                          const OptimizerSettings& settings = {});

/// Discord minimized over rank-one POVMs with 2..max_elements elements
/// (max_elements in {2, 3, 4}). Never exceeds the projective value.
PovmOptimum discord_povm(const TwoQubitState& rho, Subsystem measured, int max_elements,
                         const OptimizerSettings& settings = {});

/// Wootters concurrence.
double concurrence(const TwoQubitState& rho);

CorrelationRecord correlation_record(const TwoQubitState& rho, const OptimizerSettings& settings = {});

/// "delta_ab,delta_ba,J,I,E,purity,rank"
std::string record_csv_header();
/// Full-precision CSV row (no trailing newline).
std::string record_csv_row(const CorrelationRecord& record);

namespace detail {
/// Clips values in [-1e-9, 0) to zero; throws OptimizationFailed below.
double clip_correlation(double value, const char* what);
}  // namespace detail

}  // namespace discordkit
