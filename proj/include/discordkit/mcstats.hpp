#pragma once

// Monte Carlo surveys of correlation quantities over random states of fixed
// rank, plus the histogram / density-grid reductions used for plotting.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "discordkit/correlations.hpp"
#include "discordkit/mdms.hpp"

namespace discordkit::mcstats {

struct SurveyConfig {
  int rank = 4;
  std::size_t n_samples = 100000;
  std::uint64_t master_seed = 0;
  int workers = 1;
  OptimizerSettings optimizer;

  /// Throws InvalidConfig.
  void validate() const;
  /// "# rank=K n=N seed=S"
  std::string echo() const;
};

struct SurveyResult {
  SurveyConfig config;
  std::vector<CorrelationRecord> records;  // sample order, failed samples dropped
  std::vector<std::size_t> failed_samples;
};

/// Maximum tolerated fraction of samples whose optimizer failed.
inline constexpr double kMaxFailureFraction = 1e-4;

/// Sample i is drawn from SeededGenerator(master_seed, i), so the output is
/// identical for any worker count. Throws OptimizationFailed when too many
/// samples fail.
SurveyResult run_survey(const SurveyConfig& config);

struct Fraction {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t hits = 0;
  std::size_t total = 0;
};

/// Fraction of records with delta_ab > J, with binomial standard error.
/// Throws EmptyInput.
Fraction fraction_delta_exceeds_j(std::span<const CorrelationRecord> records);

enum class Quantity { Delta, J, E, I, Purity };

std::string_view quantity_name(Quantity q);
/// Accepts delta, J, E, I, purity. Throws InvalidConfig.
Quantity parse_quantity(std::string_view name);
double value_of(const CorrelationRecord& r, Quantity q);
/// [0, 2] for I, [0, 1] otherwise.
std::pair<double, double> quantity_range(Quantity q);

struct Histogram1D {
  Quantity quantity = Quantity::Delta;
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::vector<double> density;

  double bin_width() const { return edges.size() > 1 ? edges[1] - edges[0] : 0.0; }
  /// sum density * width; 1 when nonempty.
  double mass() const;
};

/// Uniform bins over quantity_range(q); values outside are clamped into the
/// end bins. Throws EmptyInput, InvalidConfig (n_bins < 2).
Histogram1D histogram(std::span<const CorrelationRecord> records, Quantity q, int n_bins = 100);

struct DensityGrid2D {
  Quantity x_quantity = Quantity::J;
  Quantity y_quantity = Quantity::Delta;
  std::vector<double> x_edges;
  std::vector<double> y_edges;
  std::vector<std::size_t> counts;  // row-major, x outer

  std::size_t nx() const { return x_edges.size() - 1; }
  std::size_t ny() const { return y_edges.size() - 1; }
  std::size_t at(std::size_t ix, std::size_t iy) const { return counts[ix * ny() + iy]; }
  std::size_t total() const;
};

/// 2-D counts over (J, y) with y in {Delta, E}. Throws EmptyInput.
DensityGrid2D density_grid(std::span<const CorrelationRecord> records, Quantity y, int nx = 100, int ny = 100);

double mean(std::span<const CorrelationRecord> records, Quantity q);

/// Records whose delta_ab exceeds the traced boundary at their J by more than `slack`.
std::size_t count_above_curve(std::span<const CorrelationRecord> records, const mdms::MdmsCurve& curve,
                              double slack);

/// Fraction of records within `distance` of the traced boundary in the (J, delta) plane.
double fraction_near_curve(std::span<const CorrelationRecord> records, const mdms::MdmsCurve& curve,
                           double distance);

/// Occupied (J, delta) cells whose lower corner lies above the boundary plus `slack`.
std::size_t cells_above_curve(const DensityGrid2D& grid, const mdms::MdmsCurve& curve, double slack);

void write_records_csv(std::ostream& os, std::span<const CorrelationRecord> records, const std::string& echo);
/// Reads a records file; returns the echo comment line (may be empty). Throws SchemaError.
std::vector<CorrelationRecord> read_records_csv(std::istream& is, std::string* echo = nullptr);
void write_histogram_csv(std::ostream& os, const Histogram1D& h, const std::string& echo);
void write_grid_csv(std::ostream& os, const DensityGrid2D& g, const std::string& echo);

}  // namespace discordkit::mcstats
