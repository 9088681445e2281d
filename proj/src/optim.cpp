#include "discordkit/optim.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <numbers>

namespace discordkit::optim {

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> nodes;
  if (count <= 0) return nodes;
  if (count == 1) return {lo};
  nodes.reserve(count);
  for (int i = 0; i < count; ++i) nodes.push_back(lo + (hi - lo) * i / (count - 1));
  nodes.back() = hi;
  return nodes;
}

std::vector<double> chebyshev_nodes(double lo, double hi, int count) {
  std::vector<double> nodes;
  if (count <= 0) return nodes;
  if (count == 1) return {0.5 * (lo + hi)};
  nodes.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double t = 0.5 * (1.0 - std::cos(std::numbers::pi * i / (count - 1)));
    nodes.push_back(lo + (hi - lo) * t);
  }
  nodes.front() = lo;
  nodes.back() = hi;
  return nodes;
}

std::optional<double> solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                                      double x_tolerance, std::uintmax_t max_iterations) {
  if (lo == hi) return lo;
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) return std::nullopt;

  auto tol = [x_tolerance](double a, double b) { return std::abs(b - a) <= x_tolerance; };
  std::uintmax_t iterations = max_iterations;
  try {
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iterations);
    if (iterations >= max_iterations && !tol(a, b)) return std::nullopt;
    return 0.5 * (a + b);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace discordkit::optim
