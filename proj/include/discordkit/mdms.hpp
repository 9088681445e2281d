#pragma once

// State families mixing a (possibly asymmetric) Bell component with
// opposite-parity computational-basis states, their closed forms, and the
// boundary curve of maximal discord at fixed classical correlations.
//
//   symmetric rank 2:  eps |Phi+><Phi+| + (1 - eps) |01><01|
//   rank 2:            eps |Phi~><Phi~| + (1 - eps) |01><01|,
//                      |Phi~> = sqrt(p)|00> + sqrt(1 - p)|11>
//   rank 3:            eps |Phi+><Phi+| + (1 - eps)(m |01><01| + (1 - m)|10><10|)
//
// All discord values here are delta_{A:B} (qubit B measured) unless a
// Subsystem argument says otherwise.

#include <string>
#include <vector>

#include "discordkit/correlations.hpp"
#include "discordkit/qcore.hpp"

namespace discordkit::mdms {

struct R2Params {
  double epsilon = 0.0;
  double p = 0.5;
};

struct R3Params {
  double epsilon = 0.0;
  double m = 0.5;
};

enum class Branch { Rank3Lower, Rank3Middle, Rank2 };

std::string_view branch_name(Branch b);

struct MDMSPoint {
  Branch branch = Branch::Rank3Lower;
  double epsilon = 0.0;
  double param2 = 0.0;  // p for Rank2, m for the rank-3 branches
  double classical_j = 0.0;
  double delta = 0.0;
  double concurrence = 0.0;
};

TwoQubitState symmetric_r2_state(double epsilon);
TwoQubitState r2_state(const R2Params& params);
TwoQubitState r3_state(const R3Params& params);
/// (|Phi+><Phi+| + |01><01| + |10><10|) / 3
TwoQubitState cusp_state();

/// Minimum conditional entropy of the rank-2 family, attained at
/// theta = pi/4: (x log2((1-x)/(1+x)) - log2 y) / 2 with x = sqrt(1 - 4y),
/// y = eps (1-p) (1-eps) when B is measured and y = eps p (1-eps) when A is.
double r2_conditional_entropy_closed(const R2Params& params, Subsystem measured);

struct ClosedCorrelations {
  double delta = 0.0;
  double classical_j = 0.0;
};

/// delta_{A:B} and J_{A:B} of the rank-2 family from the spectral form.
ClosedCorrelations r2_closed_correlations(const R2Params& params);

/// Closed-form concurrences: 2 eps sqrt(p(1-p)) and
/// max(0, eps - 2 (1-eps) sqrt(m(1-m))).
double r2_concurrence_closed(const R2Params& params);
double r3_concurrence_closed(const R3Params& params);

inline constexpr double kFiniteDifferenceStep = 1e-5;

/// Extremality residual d_eps(delta) d_p(J) - d_p(delta) d_eps(J) with
/// central differences of the closed forms. Requires the stencil to stay
/// inside [0, 1]^2 (ParamOutOfRange); throws DegeneratePoint when d_eps J or
/// d_p J is below 1e-12 in magnitude.
double r2_lagrange_residual(const R2Params& params);

/// Largest root in eps of the extremality residual for fixed p, i.e. the
/// discord-maximizing extremum, searched over eps in [100 h, 1 - h] with h the
/// finite-difference step. Throws NoRoot when none is bracketed.
double r2_optimal_epsilon(double p);

/// delta_{A:B} of the rank-3 family for the projective measurement
/// (theta, phi = 0) on B.
double r3_angle_discord(const R3Params& params, double theta);

/// Smallest eps in [0, 1) with delta_0 = delta_{pi/4}. Throws NoRoot.
double r3_optimal_epsilon(double m);

struct Junction {
  double p = 0.0;              // rank-2 parameter at the handoff
  double epsilon_rank2 = 0.0;  // rank-2 mixing weight at the handoff
  double epsilon_middle = 0.0; // rank-3 (m = 1/2) mixing weight at the handoff
  double classical_j = 0.0;
  double delta = 0.0;
};

/// Handoff between the m = 1/2 rank-3 branch and the rank-2 branch, defined
/// as the crossing of the two curves in the (J, delta) plane.
Junction find_junction(const OptimizerSettings& settings = {});

class MdmsCurve {
 public:
  MdmsCurve(std::vector<MDMSPoint> points, Junction junction);

  const std::vector<MDMSPoint>& points() const noexcept { return points_; }
  const Junction& junction() const noexcept { return junction_; }

  /// Upper envelope delta_max(J), linear between traced points.
  double delta_bound(double classical_j) const;
  /// Euclidean distance from (J, delta) to the traced polyline.
  double distance(double classical_j, double delta) const;

 private:
  std::vector<MDMSPoint> points_;
  Junction junction_;
  std::vector<std::pair<double, double>> envelope_;  // (J, delta) sorted by J
};

/// Traces the three branches with n points each (n >= 2):
///   Rank3Lower:  m over [0, 1/2] (quadratically spaced), eps = r3_optimal_epsilon(m)
///   Rank3Middle: m = 1/2, eps from 1/3 to the junction
///   Rank2:       p from the junction to 1/2, eps = r2_optimal_epsilon(p),
///                closed by the Bell state (eps = 1, p = 1/2).
/// (J, delta, E) come from the generic correlation routines.
MdmsCurve trace_mdms_curve(int n_points_per_branch, const OptimizerSettings& settings = {}, int workers = 1);

/// "branch,epsilon,param2,J,delta,E"
std::string curve_csv_header();
std::string curve_csv_row(const MDMSPoint& point);

}  // namespace discordkit::mdms
