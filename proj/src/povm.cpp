// Rank-one POVM discord.
//
// An N-outcome rank-one POVM on a qubit is parametrized by an N x 2 complex
// matrix X. Its polar factor V = X (X^dagger X)^{-1/2} is an isometry, and the
// rows v_i of V define effects E_i = v_i^dagger v_i with sum_i E_i = V^dagger V = I.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "discordkit/correlations.hpp"
#include "discordkit/optim.hpp"

namespace discordkit {

namespace detail {
std::pair<double, double> weighted_block_entropy(const Matrix2& block);
Matrix2 unmeasured_block(const Matrix4& rho, const Matrix2& effect, Subsystem measured);
}  // namespace detail

namespace {

constexpr int kMaxRestarts = 3;
constexpr int kPovmIterationBudget = 6000;
constexpr double kPovmStep = 0.15;
constexpr double kMinWeight = 1e-12;

template <int N>
using Params = Eigen::Matrix<double, 4 * N, 1>;

template <int N>
using Isometry = Eigen::Matrix<Complex, N, 2>;

template <int N>
Isometry<N> unpack(const Params<N>& x) {
  Isometry<N> m;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < 2; ++j) m(i, j) = Complex(x(4 * i + 2 * j), x(4 * i + 2 * j + 1));
  return m;
}

template <int N>
Params<N> pack(const Isometry<N>& m) {
  Params<N> x;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < 2; ++j) {
      x(4 * i + 2 * j) = m(i, j).real();
      x(4 * i + 2 * j + 1) = m(i, j).imag();
    }
  return x;
}

template <int N>
bool polar_isometry(const Isometry<N>& x, Isometry<N>& v) {
  const Matrix2 gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<Matrix2> es(gram);
  const Eigen::Vector2d ev = es.eigenvalues();
  if (!(ev(0) > 1e-14 * std::max(1.0, ev(1)))) return false;
  const Matrix2 inv_sqrt =
      es.eigenvectors() * ev.cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  v = x * inv_sqrt;
  return true;
}

// Weight and Bloch direction of the effect v^dagger v for a row v.
RankOnePOVM::Element element_of_row(const Eigen::Matrix<Complex, 1, 2>& row) {
  const double weight = row.squaredNorm();
  RankOnePOVM::Element e{weight, Eigen::Vector3d::UnitZ()};
  if (weight <= 0.0) return e;
  const Complex c = row(0) * std::conj(row(1)) / weight;
  const double z = (std::norm(row(0)) - std::norm(row(1))) / weight;
  e.direction = Eigen::Vector3d(2.0 * c.real(), 2.0 * c.imag(), z).normalized();
  return e;
}

template <int N>
double povm_objective(const BlochForm& form, const Isometry<N>& v) {
  double s = 0.0;
  for (int i = 0; i < N; ++i) {
    const RankOnePOVM::Element e = element_of_row(v.row(i));
    if (e.weight <= kMinWeight) continue;
    const double q = 1.0 + form.b.dot(e.direction);
    const double p = 0.5 * e.weight * q;
    if (p <= kOutcomeProbabilityFloor) continue;
    s += p * qubit_entropy_from_radius((form.a + form.t * e.direction).norm() / q);
  }
  return s;
}

// Row <u| scaled by sqrt(weight), u the qubit state with Bloch vector n.
Eigen::Matrix<Complex, 1, 2> row_for(double weight, const Eigen::Vector3d& n) {
  const MeasurementBasis b = [&] {
    MeasurementBasis m;
    m.theta = 0.5 * std::acos(std::clamp(n.z(), -1.0, 1.0));
    m.phi = std::atan2(n.y(), n.x());
    return m;
  }();
  return std::sqrt(weight) * b.ket(0).adjoint();
}

template <int N>
Isometry<N> isometry_from(const std::vector<RankOnePOVM::Element>& elements) {
  Isometry<N> m;
  for (int i = 0; i < N; ++i) m.row(i) = row_for(elements[i].weight, elements[i].direction);
  return m;
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Matrix3d g;
  for (int i = 0; i < 9; ++i) g(i) = normal(rng);
  Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

// Seeds: the projective optimum split into N pieces, plus symmetric
// (trine / tetrahedral) POVMs in several fixed orientations.
template <int N>
std::vector<Isometry<N>> seeds(const Eigen::Vector3d& projective_axis) {
  std::vector<Isometry<N>> out;
  const Eigen::Vector3d n = projective_axis.normalized();
  if constexpr (N == 3) {
    out.push_back(isometry_from<3>({{0.5, n}, {0.5, n}, {1.0, -n}}));
  } else {
    out.push_back(isometry_from<4>({{0.5, n}, {0.5, n}, {0.5, -n}, {0.5, -n}}));
  }

  std::vector<Eigen::Vector3d> shape;
  double weight = 0.0;
  if constexpr (N == 3) {
    for (int k = 0; k < 3; ++k) {
      const double ang = 2.0 * std::numbers::pi * k / 3.0;
      shape.emplace_back(std::cos(ang), std::sin(ang), 0.0);
    }
    weight = 2.0 / 3.0;
  } else {
    const double s = 1.0 / std::sqrt(3.0);
    shape = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
    weight = 0.5;
  }
  std::mt19937_64 rng(0x5eedf00dULL + N);
  for (int r = 0; r < 4; ++r) {
    const Eigen::Matrix3d rot = r == 0 ? Eigen::Matrix3d::Identity() : random_rotation(rng);
    std::vector<RankOnePOVM::Element> el;
    for (const auto& d : shape) el.push_back({weight, rot * d});
    out.push_back(isometry_from<N>(el));
  }
  return out;
}

template <int N>
std::pair<double, Isometry<N>> minimize_povm(const BlochForm& form, const Eigen::Vector3d& projective_axis,
                                              double tolerance) {
  auto objective = [&form](const Params<N>& x) {
    Isometry<N> v;
    if (!polar_isometry<N>(unpack<N>(x), v)) return std::numeric_limits<double>::max();
    return povm_objective<N>(form, v);
  };

  optim::NelderMeadOptions nm;
  nm.max_iterations = kPovmIterationBudget;
  nm.f_tolerance = tolerance;
  const Params<N> step = Params<N>::Constant(kPovmStep);

  double best_value = std::numeric_limits<double>::infinity();
  Params<N> best_x;
  for (const Isometry<N>& seed : seeds<N>(projective_axis)) {
    Params<N> x = pack<N>(seed);
    double value = objective(x);
    for (int restart = 0; restart <= kMaxRestarts; ++restart) {
      const auto r = optim::nelder_mead<4 * N>(objective, x, step * std::pow(0.3, restart), nm);
      const bool improved = r.value < value - tolerance;
      if (r.value < value) {
        value = r.value;
        x = r.x;
      }
      if (!improved && r.converged) break;
    }
    if (value < best_value) {
      best_value = value;
      best_x = x;
    }
  }
  Isometry<N> v;
  polar_isometry<N>(unpack<N>(best_x), v);
  return {best_value, v};
}

template <int N>
RankOnePOVM povm_from_isometry(const Isometry<N>& v) {
  std::vector<RankOnePOVM::Element> el;
  for (int i = 0; i < N; ++i) {
    const RankOnePOVM::Element e = element_of_row(v.row(i));
    if (e.weight > kMinWeight) el.push_back(e);
  }
  return RankOnePOVM::validate(std::move(el));
}

}  // namespace

RankOnePOVM RankOnePOVM::validate(std::vector<Element> elements) {
  if (elements.size() < 2 || elements.size() > 4)
    throw Error(ErrorCode::ParamOutOfRange, "rank-one POVM needs 2 to 4 elements, got " +
                                                std::to_string(elements.size()));
  for (Element& e : elements) {
    if (!(e.weight > 0.0) || e.weight > 1.0 + kCompletenessTolerance)
      throw Error(ErrorCode::ParamOutOfRange, "POVM weight outside (0, 1]: " + std::to_string(e.weight));
    const double len = e.direction.norm();
    if (std::abs(len - 1.0) > 1e-9) throw Error(ErrorCode::ParamOutOfRange, "POVM direction is not a unit vector");
    e.direction /= len;
    e.weight = std::min(e.weight, 1.0);
  }
  RankOnePOVM povm(std::move(elements));
  const double residual = povm.completeness_residual();
  if (residual > kCompletenessTolerance) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "completeness residual %.3e exceeds 1e-9", residual);
    throw Error(ErrorCode::ParamOutOfRange, buf);
  }
  return povm;
}

Matrix2 RankOnePOVM::effect(std::size_t i) const {
  const Element& e = elements_.at(i);
  Matrix2 m = Matrix2::Identity();
  for (int k = 0; k < 3; ++k) m += e.direction(k) * pauli(k);
  return 0.5 * e.weight * m;
}

double RankOnePOVM::completeness_residual() const {
  Matrix2 sum = Matrix2::Zero();
  for (std::size_t i = 0; i < elements_.size(); ++i) sum += effect(i);
  return (sum - Matrix2::Identity()).cwiseAbs().maxCoeff();
}

double conditional_entropy(const TwoQubitState& rho, const RankOnePOVM& povm, Subsystem measured) {
  double s = 0.0;
  for (std::size_t i = 0; i < povm.elements().size(); ++i) {
    const auto [p, h] = detail::weighted_block_entropy(detail::unmeasured_block(rho.matrix(), povm.effect(i), measured));
    s += p * h;
  }
  return s;
}

PovmOptimum discord_povm(const TwoQubitState& rho, Subsystem measured, int max_elements,
                         const OptimizerSettings& settings) {
  if (max_elements < 2 || max_elements > 4)
    throw Error(ErrorCode::ParamOutOfRange, "max_elements must be 2, 3 or 4");

  const MeasurementOptimum projective = min_conditional_entropy(rho, measured, settings);
  const Eigen::Vector3d axis = projective.basis.bloch();
  double best = projective.value;
  RankOnePOVM povm = RankOnePOVM::validate({{1.0, axis}, {1.0, -axis}});

  const BlochForm form = BlochForm::of(rho).oriented(measured);
  if (max_elements >= 3) {
    const auto [value, v] = minimize_povm<3>(form, axis, settings.tolerance);
    if (value < best) {
      best = value;
      povm = povm_from_isometry<3>(v);
    }
  }
  if (max_elements >= 4) {
    const auto [value, v] = minimize_povm<4>(form, axis, settings.tolerance);
    if (value < best) {
      best = value;
      povm = povm_from_isometry<4>(v);
    }
  }
  if (povm.completeness_residual() >= kCompletenessTolerance)
    throw Error(ErrorCode::OptimizationFailed, "accepted POVM violates completeness");

  const double delta = entropy(partial_trace(rho, measured)) - entropy(rho) + std::max(0.0, best);
  return PovmOptimum{detail::clip_correlation(delta, "POVM discord"), povm};
}

}  // namespace discordkit
