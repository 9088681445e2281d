#include "discordkit/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "discordkit/optim.hpp"

namespace discordkit {

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::Vector3d direction(double theta, double phi) {
  const double s = std::sin(2.0 * theta);
  return {s * std::cos(phi), s * std::sin(phi), std::cos(2.0 * theta)};
}

double expectation(const Matrix4& rho, const Matrix4& op) {
  // Tr(rho op) for Hermitian arguments.
  return (rho.cwiseProduct(op.transpose())).sum().real();
}

struct PauliProducts {
  Matrix4 a[3];
  Matrix4 b[3];
  Matrix4 ab[3][3];

  PauliProducts() {
    const Matrix2 id = Matrix2::Identity();
    for (int i = 0; i < 3; ++i) {
      a[i] = kron(pauli(i), id);
      b[i] = kron(id, pauli(i));
      for (int j = 0; j < 3; ++j) ab[i][j] = kron(pauli(i), pauli(j));
    }
  }
};

const PauliProducts& pauli_products() {
  static const PauliProducts products;
  return products;
}

}  // namespace

namespace detail {

// Hermitian 2x2 block -> (trace, entropy of the normalized block).
std::pair<double, double> weighted_block_entropy(const Matrix2& block) {
  const double p = block.trace().real();
  if (p <= kOutcomeProbabilityFloor) return {p, 0.0};
  const double diff = (block(0, 0).real() - block(1, 1).real()) / p;
  const Complex off = 0.5 * (block(0, 1) + std::conj(block(1, 0))) / p;
  const double radius = std::sqrt(diff * diff + 4.0 * std::norm(off));
  return {p, qubit_entropy_from_radius(radius)};
}

// Tr_measured[(E on measured) rho], unnormalized state of the other qubit.
Matrix2 unmeasured_block(const Matrix4& rho, const Matrix2& effect, Subsystem measured) {
  Matrix2 out = Matrix2::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          out(i, j) += effect(k, l) * (measured == Subsystem::B ? rho(2 * i + l, 2 * j + k)
                                                                : rho(2 * l + i, 2 * k + j));
        }
      }
    }
  }
  return out;
}

double clip_correlation(double value, const char* what) {
  if (value >= 0.0) return value;
  if (value >= -kNegativeTolerance) return 0.0;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s evaluated to %.3e (below -1e-9)", what, value);
  throw Error(ErrorCode::OptimizationFailed, buf);
}

}  // namespace detail

Vector2 MeasurementBasis::ket(int outcome) const {
  const Complex phase = std::polar(1.0, phi);
  Vector2 v;
  if (outcome == 0) {
    v << std::cos(theta), phase * std::sin(theta);
  } else {
    v << -std::conj(phase) * std::sin(theta), std::cos(theta);
  }
  return v;
}

Matrix2 MeasurementBasis::projector(int outcome) const {
  const Vector2 v = ket(outcome);
  return v * v.adjoint();
}

Eigen::Vector3d MeasurementBasis::bloch() const { return direction(theta, phi); }

MeasurementBasis MeasurementBasis::canonical() const {
  const Eigen::Vector3d n = bloch();
  MeasurementBasis out;
  out.theta = 0.5 * std::acos(std::clamp(n.z(), -1.0, 1.0));
  const double planar = std::hypot(n.x(), n.y());
  if (planar > 1e-14) {
    out.phi = std::atan2(n.y(), n.x());
    if (out.phi < 0.0) out.phi += 2.0 * kPi;
  }
  return out;
}

BlochForm BlochForm::of(const TwoQubitState& rho) {
  const PauliProducts& ops = pauli_products();
  BlochForm f;
  for (int i = 0; i < 3; ++i) {
    f.a(i) = expectation(rho.matrix(), ops.a[i]);
    f.b(i) = expectation(rho.matrix(), ops.b[i]);
    for (int j = 0; j < 3; ++j) f.t(i, j) = expectation(rho.matrix(), ops.ab[i][j]);
  }
  return f;
}

BlochForm BlochForm::oriented(Subsystem measured) const {
  if (measured == Subsystem::B) return *this;
  BlochForm f;
  f.a = b;
  f.b = a;
  f.t = t.transpose();
  return f;
}

double conditional_entropy_bloch(const BlochForm& form, const Eigen::Vector3d& n) {
  const double bn = form.b.dot(n);
  const Eigen::Vector3d tn = form.t * n;
  double s = 0.0;
  for (double sign : {1.0, -1.0}) {
    const double q = 1.0 + sign * bn;
    const double p = 0.5 * q;
    if (p <= kOutcomeProbabilityFloor) continue;
    const double r = (form.a + sign * tn).norm() / q;
    s += p * qubit_entropy_from_radius(r);
  }
  return s;
}

double mutual_information(const TwoQubitState& rho) {
  const double value = entropy(partial_trace(rho, Subsystem::A)) + entropy(partial_trace(rho, Subsystem::B)) -
                       entropy(rho);
  return detail::clip_correlation(value, "mutual information");
}

double conditional_entropy(const TwoQubitState& rho, const MeasurementBasis& basis, Subsystem measured) {
  double s = 0.0;
  for (int outcome = 0; outcome < 2; ++outcome) {
    const auto [p, h] = detail::weighted_block_entropy(
        detail::unmeasured_block(rho.matrix(), basis.projector(outcome), measured));
    s += p * h;
  }
  return s;
}

MeasurementOptimum min_conditional_entropy(const TwoQubitState& rho, Subsystem measured,
                                           const OptimizerSettings& settings) {
  if (settings.grid < 2 || settings.starts < 1 || settings.max_iterations < 1 || !(settings.tolerance > 0.0))
    throw Error(ErrorCode::InvalidConfig, "optimizer settings out of range");

  const BlochForm form = BlochForm::of(rho).oriented(measured);
  auto objective = [&form](double theta, double phi) {
    return conditional_entropy_bloch(form, direction(theta, phi));
  };

  const int g = settings.grid;
  const double d_theta = 0.5 * kPi / g;
  const double d_phi = kPi / g;
  std::vector<double> values(static_cast<std::size_t>(g) * g);
  for (int i = 0; i < g; ++i) {
    const double theta = (i + 0.5) * d_theta;
    for (int j = 0; j < g; ++j) values[static_cast<std::size_t>(i) * g + j] = objective(theta, (j + 0.5) * d_phi);
  }

  const int starts = std::min(settings.starts, g * g);
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::partial_sort(idx.begin(), idx.begin() + starts, idx.end(),
                    [&](int l, int r) { return values[l] < values[r] || (values[l] == values[r] && l < r); });

  optim::NelderMeadOptions nm;
  nm.max_iterations = settings.max_iterations;
  nm.f_tolerance = settings.tolerance;

  using Vec2 = Eigen::Vector2d;
  auto f2 = [&objective](const Vec2& x) { return objective(x(0), x(1)); };

  optim::NelderMeadResult<2> best;
  for (int s = 0; s < starts; ++s) {
    const int cell = idx[s];
    const Vec2 start((cell / g + 0.5) * d_theta, (cell % g + 0.5) * d_phi);
    auto result = optim::nelder_mead<2>(f2, start, Vec2(d_theta, d_phi), nm);
    if (result.value < best.value || (result.value == best.value && result.converged && !best.converged))
      best = result;
  }
  if (!best.converged) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "simplex refinement did not converge within %d iterations (spread > %.1e)",
                  settings.max_iterations, settings.tolerance);
    throw Error(ErrorCode::OptimizationFailed, buf);
  }

  MeasurementOptimum out;
  out.value = std::max(0.0, best.value);
  out.basis = MeasurementBasis{best.x(0), best.x(1)}.canonical();
  return out;
}

MeasurementOptimum discord_projective(const TwoQubitState& rho, Subsystem measured,
                                      const OptimizerSettings& settings) {
  MeasurementOptimum ce = min_conditional_entropy(rho, measured, settings);
  ce.value = detail::clip_correlation(entropy(partial_trace(rho, measured)) - entropy(rho) + ce.value, "discord");
  return ce;
}

MeasurementOptimum classical_correlations(const TwoQubitState& rho, Subsystem measured,
                                          const OptimizerSettings& settings) {
  MeasurementOptimum ce = min_conditional_entropy(rho, measured, settings);
  ce.value = detail::clip_correlation(entropy(partial_trace(rho, other(measured))) - ce.value,
                                      "classical correlations");
  return ce;
}

double concurrence(const TwoQubitState& rho) {
  // rho = W W^dagger; the Wootters lambdas are the singular values of
  // W^T (s_y x s_y) W.
  Matrix4 w = rho.eigenvectors();
  for (int k = 0; k < 4; ++k) w.col(k) *= std::sqrt(std::max(0.0, rho.spectrum()(k)));
  Matrix4 yy = Matrix4::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix4 tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<Matrix4> svd(tau);
  const Eigen::Vector4d s = svd.singularValues();  // decreasing
  return std::clamp(s(0) - s(1) - s(2) - s(3), 0.0, 1.0);
}

CorrelationRecord correlation_record(const TwoQubitState& rho, const OptimizerSettings& settings) {
  const double s_ab = entropy(rho);
  const double s_a = entropy(partial_trace(rho, Subsystem::A));
  const double s_b = entropy(partial_trace(rho, Subsystem::B));
  const double ce_b = min_conditional_entropy(rho, Subsystem::B, settings).value;
  const double ce_a = min_conditional_entropy(rho, Subsystem::A, settings).value;

  CorrelationRecord r;
  r.delta_ab = detail::clip_correlation(s_b - s_ab + ce_b, "discord A:B");
  r.delta_ba = detail::clip_correlation(s_a - s_ab + ce_a, "discord B:A");
  r.classical_j = detail::clip_correlation(s_a - ce_b, "classical correlations");
  r.mutual_i = detail::clip_correlation(s_a + s_b - s_ab, "mutual information");
  r.concurrence = concurrence(rho);
  r.purity = purity(rho);
  r.rank = rho.rank();
  return r;
}

std::string record_csv_header() { return "delta_ab,delta_ba,J,I,E,purity,rank"; }

std::string record_csv_row(const CorrelationRecord& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d", r.delta_ab, r.delta_ba, r.classical_j,
                r.mutual_i, r.concurrence, r.purity, r.rank);
  return buf;
}

}  // namespace discordkit
