#include "discordkit/mdms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>

#include "discordkit/optim.hpp"
#include "discordkit/parallel.hpp"

namespace discordkit::mdms {

namespace {

constexpr double kRootTolerance = 1e-12;
constexpr int kScanNodes = 200;

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s = %.6g outside [0, 1]", name, v);
    throw Error(ErrorCode::ParamOutOfRange, buf);
  }
}

Matrix4 diagonal_projector(int index) { return projector(basis_ket(index)); }

double conditional_entropy_from_y(double y) {
  if (y <= 0.0) return 0.0;
  y = std::min(y, 0.25);
  const double x = std::sqrt(std::max(0.0, 1.0 - 4.0 * y));
  const double log_ratio = x > 0.0 ? std::log2((1.0 - x) / (1.0 + x)) : 0.0;
  return 0.5 * (x * log_ratio - std::log2(y));
}

}  // namespace

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::Rank3Lower: return "Rank3Lower";
    case Branch::Rank3Middle: return "Rank3Middle";
    case Branch::Rank2: return "Rank2";
  }
  return "?";
}

TwoQubitState symmetric_r2_state(double epsilon) { return r2_state({epsilon, 0.5}); }

TwoQubitState r2_state(const R2Params& params) {
  check_unit(params.epsilon, "epsilon");
  check_unit(params.p, "p");
  const Vector4 tilde = std::sqrt(params.p) * basis_ket(0) + std::sqrt(1.0 - params.p) * basis_ket(3);
  return TwoQubitState::validate(params.epsilon * projector(tilde) + (1.0 - params.epsilon) * diagonal_projector(1));
}

TwoQubitState r3_state(const R3Params& params) {
  check_unit(params.epsilon, "epsilon");
  check_unit(params.m, "m");
  const Matrix4 mixture = params.m * diagonal_projector(1) + (1.0 - params.m) * diagonal_projector(2);
  return TwoQubitState::validate(params.epsilon * projector(bell_phi_plus()) + (1.0 - params.epsilon) * mixture);
}

TwoQubitState cusp_state() { return r3_state({1.0 / 3.0, 0.5}); }

double r2_conditional_entropy_closed(const R2Params& params, Subsystem measured) {
  check_unit(params.epsilon, "epsilon");
  check_unit(params.p, "p");
  const double weight = measured == Subsystem::B ? 1.0 - params.p : params.p;
  return conditional_entropy_from_y(params.epsilon * weight * (1.0 - params.epsilon));
}

ClosedCorrelations r2_closed_correlations(const R2Params& params) {
  const double ce = r2_conditional_entropy_closed(params, Subsystem::B);
  const double s_total = binary_entropy(params.epsilon);
  const double s_b = binary_entropy(params.epsilon * params.p);
  const double s_a = binary_entropy(params.epsilon * (1.0 - params.p));
  return {s_b - s_total + ce, s_a - ce};
}

double r2_concurrence_closed(const R2Params& params) {
  check_unit(params.epsilon, "epsilon");
  check_unit(params.p, "p");
  return 2.0 * params.epsilon * std::sqrt(params.p * (1.0 - params.p));
}

double r3_concurrence_closed(const R3Params& params) {
  check_unit(params.epsilon, "epsilon");
  check_unit(params.m, "m");
  return std::max(0.0, params.epsilon - 2.0 * (1.0 - params.epsilon) * std::sqrt(params.m * (1.0 - params.m)));
}

double r2_lagrange_residual(const R2Params& params) {
  const double h = kFiniteDifferenceStep;
  const double e = params.epsilon;
  const double p = params.p;
  if (!(e - h >= 0.0 && e + h <= 1.0 && p - h >= 0.0 && p + h <= 1.0)) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(epsilon, p) = (%.6g, %.6g) too close to the boundary for the difference stencil",
                  e, p);
    throw Error(ErrorCode::ParamOutOfRange, buf);
  }
  const ClosedCorrelations ep = r2_closed_correlations({e + h, p});
  const ClosedCorrelations em = r2_closed_correlations({e - h, p});
  const ClosedCorrelations pp = r2_closed_correlations({e, p + h});
  const ClosedCorrelations pm = r2_closed_correlations({e, p - h});
  const double d_e_delta = (ep.delta - em.delta) / (2.0 * h);
  const double d_e_j = (ep.classical_j - em.classical_j) / (2.0 * h);
  const double d_p_delta = (pp.delta - pm.delta) / (2.0 * h);
  const double d_p_j = (pp.classical_j - pm.classical_j) / (2.0 * h);
  if (std::abs(d_e_j) < 1e-12 || std::abs(d_p_j) < 1e-12)
    throw Error(ErrorCode::DegeneratePoint, "vanishing derivative of J at the evaluation point");
  return d_e_delta * d_p_j - d_p_delta * d_e_j;
}

double r2_optimal_epsilon(double p) {
  check_unit(p, "p");
  const double h = kFiniteDifferenceStep;
  if (p < h || p > 1.0 - h) throw Error(ErrorCode::NoRoot, "product-state limit: no interior extremum");

  auto residual = [p](double e) -> std::optional<double> {
    try {
      return r2_lagrange_residual({e, p});
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  // Below ~100 h the stencil spans a sizable fraction of eps and the residual
  // is dominated by rounding; sign changes there are not extrema.
  const auto brackets = optim::scan_brackets(residual, optim::chebyshev_nodes(100.0 * h, 1.0 - h, kScanNodes));
  if (brackets.empty()) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "extremality residual does not change sign for p = %.6g", p);
    throw Error(ErrorCode::NoRoot, buf);
  }
  const auto [lo, hi] = brackets.back();
  const auto root =
      optim::solve_bracketed([&](double e) { return r2_lagrange_residual({e, p}); }, lo, hi, kRootTolerance);
  if (!root) throw Error(ErrorCode::NoRoot, "root refinement failed");
  return *root;
}

double r3_angle_discord(const R3Params& params, double theta) {
  const TwoQubitState rho = r3_state(params);
  return entropy(partial_trace(rho, Subsystem::B)) - entropy(rho) +
         conditional_entropy(rho, MeasurementBasis{theta, 0.0}, Subsystem::B);
}

double r3_optimal_epsilon(double m) {
  check_unit(m, "m");
  auto gap = [m](double e) {
    return r3_angle_discord({e, m}, 0.0) - r3_angle_discord({e, m}, std::numbers::pi / 4.0);
  };
  std::vector<double> nodes = optim::linspace(0.0, 1.0, kScanNodes + 1);
  nodes.pop_back();  // both angles agree trivially on the pure state at eps = 1
  const auto brackets = optim::scan_brackets([&](double e) -> std::optional<double> { return gap(e); }, nodes);
  if (brackets.empty()) {
    if (std::abs(gap(0.0)) <= 1e-12) return 0.0;
    throw Error(ErrorCode::NoRoot, "delta_0 - delta_pi/4 does not change sign");
  }
  const auto [lo, hi] = brackets.front();
  const auto root = optim::solve_bracketed(gap, lo, hi, kRootTolerance);
  if (!root) throw Error(ErrorCode::NoRoot, "root refinement failed");
  return *root;
}

Junction find_junction(const OptimizerSettings& settings) {
  auto middle_j = [&](double e) {
    return classical_correlations(r3_state({e, 0.5}), Subsystem::B, settings).value;
  };
  const double e_lo = 1.0 / 3.0;
  const double e_hi = 1.0 - 1e-9;
  const double j_lo = middle_j(e_lo);
  const double j_hi = middle_j(e_hi);

  // Middle-branch weight whose J matches `j`.
  auto middle_at = [&](double j) -> std::optional<double> {
    if (j < j_lo || j > j_hi) return std::nullopt;
    return optim::solve_bracketed([&](double e) { return middle_j(e) - j; }, e_lo, e_hi, kRootTolerance);
  };

  struct Eval {
    double e_rank2, e_mid, j, delta, gap;
  };
  auto evaluate = [&](double p) -> std::optional<Eval> {
    double e2 = 0.0;
    try {
      e2 = r2_optimal_epsilon(p);
    } catch (const Error&) {
      return std::nullopt;
    }
    const ClosedCorrelations c = r2_closed_correlations({e2, p});
    const auto e_mid = middle_at(c.classical_j);
    if (!e_mid) return std::nullopt;
    const double d_mid = discord_projective(r3_state({*e_mid, 0.5}), Subsystem::B, settings).value;
    return Eval{e2, *e_mid, c.classical_j, c.delta, d_mid - c.delta};
  };

  const auto brackets = optim::scan_brackets(
      [&](double p) -> std::optional<double> {
        const auto ev = evaluate(p);
        return ev ? std::optional<double>(ev->gap) : std::nullopt;
      },
      optim::linspace(0.25, 0.495, 50));
  if (brackets.empty()) throw Error(ErrorCode::NoRoot, "middle and rank-2 branches do not cross");

  const auto [lo, hi] = brackets.front();
  const auto p = optim::solve_bracketed(
      [&](double q) {
        const auto ev = evaluate(q);
        if (!ev) throw Error(ErrorCode::NoRoot, "junction bracket left the rank-2 domain");
        return ev->gap;
      },
      lo, hi, 1e-10);
  if (!p) throw Error(ErrorCode::NoRoot, "junction refinement failed");
  const Eval ev = *evaluate(*p);
  return Junction{*p, ev.e_rank2, ev.e_mid, ev.j, ev.delta};
}

MdmsCurve::MdmsCurve(std::vector<MDMSPoint> points, Junction junction)
    : points_(std::move(points)), junction_(junction) {
  for (const MDMSPoint& pt : points_) envelope_.emplace_back(pt.classical_j, pt.delta);
  std::stable_sort(envelope_.begin(), envelope_.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
}

double MdmsCurve::delta_bound(double j) const {
  if (envelope_.empty()) return 0.0;
  if (j <= envelope_.front().first) return envelope_.front().second;
  if (j >= envelope_.back().first) return envelope_.back().second;
  const auto hi = std::upper_bound(envelope_.begin(), envelope_.end(), j,
                                   [](double v, const auto& pt) { return v < pt.first; });
  const auto lo = hi - 1;
  const double span = hi->first - lo->first;
  if (span <= 0.0) return std::max(lo->second, hi->second);
  const double t = (j - lo->first) / span;
  return lo->second + t * (hi->second - lo->second);
}

double MdmsCurve::distance(double j, double delta) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < envelope_.size(); ++i) {
    const Eigen::Vector2d a(envelope_[i].first, envelope_[i].second);
    const Eigen::Vector2d b(envelope_[i + 1].first, envelope_[i + 1].second);
    const Eigen::Vector2d q(j, delta);
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((q - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (q - (a + t * ab)).norm());
  }
  if (envelope_.size() == 1) best = std::hypot(j - envelope_[0].first, delta - envelope_[0].second);
  return best;
}

MdmsCurve trace_mdms_curve(int n, const OptimizerSettings& settings, int workers) {
  if (n < 2) throw Error(ErrorCode::ParamOutOfRange, "at least two points per branch are required");
  const Junction junction = find_junction(settings);

  struct Task {
    Branch branch;
    double param;  // m, eps or p depending on the branch
    bool bell = false;
  };
  std::vector<Task> tasks;
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    tasks.push_back({Branch::Rank3Lower, 0.5 * t * t});
  }
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    tasks.push_back({Branch::Rank3Middle, 1.0 / 3.0 + (junction.epsilon_middle - 1.0 / 3.0) * t});
  }
  for (int k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / (n - 1);
    tasks.push_back({Branch::Rank2, junction.p + (0.5 - junction.p) * t, k == n - 1});
  }

  std::vector<std::optional<MDMSPoint>> results(tasks.size());
  parallel_for(tasks.size(), workers, [&](std::size_t i) {
    const Task& task = tasks[i];
    MDMSPoint pt;
    pt.branch = task.branch;
    std::optional<TwoQubitState> rho;
    switch (task.branch) {
      case Branch::Rank3Lower:
        pt.param2 = task.param;
        pt.epsilon = r3_optimal_epsilon(task.param);
        rho = r3_state({pt.epsilon, pt.param2});
        break;
      case Branch::Rank3Middle:
        pt.param2 = 0.5;
        pt.epsilon = task.param;
        rho = r3_state({pt.epsilon, pt.param2});
        break;
      case Branch::Rank2:
        if (task.bell) {
          pt.epsilon = 1.0;
          pt.param2 = 0.5;
        } else if (i % n == 0) {
          pt.epsilon = junction.epsilon_rank2;
          pt.param2 = junction.p;
        } else {
          pt.param2 = task.param;
          try {
            pt.epsilon = r2_optimal_epsilon(task.param);
          } catch (const Error& e) {
            // Near p = 1/2 the root approaches eps = 1 faster than the
            // difference stencil can resolve; the Bell endpoint closes the branch.
            if (e.code() == ErrorCode::NoRoot) return;
            throw;
          }
        }
        rho = r2_state({pt.epsilon, pt.param2});
        break;
    }
    const CorrelationRecord rec = [&] {
      CorrelationRecord r;
      const MeasurementOptimum ce = min_conditional_entropy(*rho, Subsystem::B, settings);
      const double s = entropy(*rho);
      r.delta_ab = detail::clip_correlation(entropy(partial_trace(*rho, Subsystem::B)) - s + ce.value, "discord");
      r.classical_j = detail::clip_correlation(entropy(partial_trace(*rho, Subsystem::A)) - ce.value, "J");
      return r;
    }();
    pt.classical_j = rec.classical_j;
    pt.delta = rec.delta_ab;
    pt.concurrence = concurrence(*rho);
    results[i] = pt;
  });

  std::vector<MDMSPoint> points;
  for (const auto& r : results)
    if (r) points.push_back(*r);
  return MdmsCurve(std::move(points), junction);
}

std::string curve_csv_header() { return "branch,epsilon,param2,J,delta,E"; }

std::string curve_csv_row(const MDMSPoint& pt) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g", std::string(branch_name(pt.branch)).c_str(),
                pt.epsilon, pt.param2, pt.classical_j, pt.delta, pt.concurrence);
  return buf;
}

}  // namespace discordkit::mdms
