#pragma once

// Derivative-free minimization and bracketed root finding used by the
// correlation optimizers and the boundary-curve solvers.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace discordkit::optim {

struct NelderMeadOptions {
  int max_iterations = 200;
  // Converged once the spread of objective values across the simplex drops
  // to f_tolerance and every vertex is within x_tolerance (max-norm) of the
  // best one. The second test stops a simplex whose vertices happen to sit on
  // one level set (e.g. symmetric about a minimum) from passing as converged.
  double f_tolerance = 1e-12;
  double x_tolerance = 1e-8;
};

template <int N>
struct NelderMeadResult {
  Eigen::Matrix<double, N, 1> x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex descent (standard coefficients 1, 2, 1/2, 1/2).
///
/// The initial simplex is `start` plus `step(i) * e_i` for each axis.
template <int N, class F>
NelderMeadResult<N> nelder_mead(F&& f, const Eigen::Matrix<double, N, 1>& start,
                                const Eigen::Matrix<double, N, 1>& step,
                                const NelderMeadOptions& options = {}) {
  using Vec = Eigen::Matrix<double, N, 1>;
  constexpr int kVertices = N + 1;

  std::array<Vec, kVertices> simplex;
  std::array<double, kVertices> values;
  NelderMeadResult<N> result;

  auto eval = [&](const Vec& x) {
    ++result.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  simplex[0] = start;
  values[0] = eval(start);
  for (int i = 0; i < N; ++i) {
    simplex[i + 1] = start;
    simplex[i + 1](i) += step(i);
    values[i + 1] = eval(simplex[i + 1]);
  }

  std::array<int, kVertices> order;
  for (int i = 0; i < kVertices; ++i) order[i] = i;

  for (;;) {
    std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = order[0];
    const int worst = order[N];
    const int second_worst = order[N - 1];

    if (values[worst] - values[best] <= options.f_tolerance) {
      double size = 0.0;
      for (int i = 1; i < kVertices; ++i)
        size = std::max(size, (simplex[order[i]] - simplex[best]).cwiseAbs().maxCoeff());
      if (size <= options.x_tolerance) {
        result.converged = true;
        break;
      }
    }
    if (result.iterations >= options.max_iterations) break;
    ++result.iterations;

    Vec centroid = Vec::Zero();
    for (int i = 0; i < N; ++i) centroid += simplex[order[i]];
    centroid /= static_cast<double>(N);

    const Vec reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = eval(reflected);

    if (f_reflected < values[best]) {
      const Vec expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }

    const bool outside = f_reflected < values[worst];
    const Vec contracted = outside ? Vec(centroid + 0.5 * (reflected - centroid))
                                   : Vec(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = eval(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }

    for (int i = 1; i < kVertices; ++i) {
      const int v = order[i];
      simplex[v] = simplex[best] + 0.5 * (simplex[v] - simplex[best]);
      values[v] = eval(simplex[v]);
    }
  }

  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

/// Sign-change brackets of `f` over consecutive nodes. Nodes where `f`
/// returns nullopt are skipped (the bracket then spans the gap).
template <class F>
std::vector<std::pair<double, double>> scan_brackets(F&& f, const std::vector<double>& nodes) {
  std::vector<std::pair<double, double>> brackets;
  std::optional<std::pair<double, double>> previous;
  for (double x : nodes) {
    const std::optional<double> v = f(x);
    if (!v || !std::isfinite(*v)) continue;
    if (previous) {
      if (*v == 0.0) {
        brackets.emplace_back(x, x);
      } else if ((previous->second < 0.0) != (*v < 0.0) && previous->second != 0.0) {
        brackets.emplace_back(previous->first, x);
      }
    }
    previous = std::make_pair(x, *v);
  }
  return brackets;
}

/// Uniform nodes on [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int count);

/// Chebyshev-Lobatto nodes on [lo, hi]; dense near both ends.
std::vector<double> chebyshev_nodes(double lo, double hi, int count);

/// Solves f(x) = 0 on a sign-changing bracket [lo, hi] to interval width
/// `x_tolerance`. Returns nullopt when the bracket does not change sign or the
/// solver exhausts its iteration budget.
std::optional<double> solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                      double x_tolerance, std::uintmax_t max_iterations = 200);

}  // namespace discordkit::optim
